// Copyright 2026 The chaoskraus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "chaoskraus/types.hpp"

namespace chaoskraus {

/// Eigendecomposition of a small Hermitian generator, reusable for
/// exp(-i H t) at many times.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const Matrix& h);

  /// exp(-i H t)
  Matrix unitary(double t) const;
  /// exp(-i H t) rho exp(+i H t)
  Matrix evolve(const Matrix& rho, double t) const;

  const RealVector& eigenvalues() const { return values_; }
  const Matrix& eigenvectors() const { return vectors_; }

 private:
  RealVector values_;
  Matrix vectors_;
};

/// exp(-i H t) for a 2x2 Hermitian H via the closed form
/// e^{-i h0 t} [cos(|h| t) I - i sin(|h| t) (h . sigma) / |h|].
Matrix qubit_unitary(const Matrix& h, double t);

/// |psi><psi|
Matrix projector(const Vector& psi);

/// (|0> + |1>) / sqrt(2)
Vector plus_state();

/// Structural checks on a density matrix. Tolerances: Hermiticity 1e-12,
/// trace 1e-10, eigenvalues >= -1e-10.
struct DensityCheck {
  double hermiticity_defect = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok = true;
};
DensityCheck check_density(const Matrix& rho, double herm_tol = 1e-12, double trace_tol = 1e-10,
                           double eig_tol = 1e-10);

/// Throws ValidationError when check_density fails.
void require_density(const Matrix& rho, const char* what);

}  // namespace chaoskraus
