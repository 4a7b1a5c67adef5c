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

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "chaoskraus/model.hpp"
#include "chaoskraus/pauli.hpp"
#include "chaoskraus/types.hpp"

namespace chaoskraus {

/// Retained bath eigenpairs with thermal weights and diagonal coupling
/// elements. The weights are renormalized over the retained states only.
struct BathSpectrum {
  RealVector energies;  // ascending, size m
  Matrix vectors;       // dim x m, orthonormal columns
  RealVector weights;   // p_n, empty until assigned
  RealVector bdiag;     // B_nn, empty until a coupling is attached
  /// Complete ascending spectrum when the dense solver was used; otherwise the
  /// converged Ritz values.
  RealVector all_energies;
  double kt = 0.0;

  double max_residual = 0.0;
  std::size_t degenerate_pairs = 0;
  std::vector<std::string> warnings;

  std::size_t retained() const { return static_cast<std::size_t>(energies.size()); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.rows()); }
};

enum class EigenMethod { kDense, kLanczos };

struct DiagonalizationOptions {
  EigenMethod method = EigenMethod::kDense;
  /// Residual bound relative to the spectral norm of H_B.
  double residual_tol = 1e-10;
};

/// Lowest `m` eigenpairs of a Hermitian H_B (m = dim gives the full spectrum).
/// Throws ValidationError for non-Hermitian input, DomainError for m outside
/// [1, dim], NumericError when the residual bound is not met.
BathSpectrum diagonalize_bath(const OperatorMatrix& bath, std::size_t m,
                              const DiagonalizationOptions& options = {});

/// Matrix-free variant: Lanczos with full reorthogonalization on a Pauli sum.
/// Exactly degenerate levels may be returned with reduced multiplicity.
BathSpectrum diagonalize_bath(const PauliSum& bath, std::size_t m,
                              const DiagonalizationOptions& options = {});

/// p_n = exp(-E_n / kT) / sum_{n' < m} exp(-E_n' / kT), evaluated with a
/// ground-state shift. kT = 0 puts uniform weight on the exactly degenerate
/// ground manifold. Throws DomainError for kT < 0 or m outside [1, size].
RealVector boltzmann_weights(const RealVector& energies, double kt, std::size_t m);

/// Tail weight above which the retained-state count is reported as too small.
inline constexpr double kTailWeightWarning = 1e-3;

/// Sets weights (and the tail-weight warning) on a spectrum.
void assign_weights(BathSpectrum& spectrum, double kt);

/// <j|B|k> over the retained eigenstates.
struct CouplingMatrix {
  Matrix elements;
  RealVector energies;

  /// Real part of the diagonal.
  RealVector diagonal() const { return elements.diagonal().real(); }
};

/// Throws ShapeError on dimension mismatch and NumericError when a diagonal
/// element has an imaginary part above 1e-10.
CouplingMatrix coupling_matrix_elements(const OperatorMatrix& coupling,
                                        const BathSpectrum& spectrum);
CouplingMatrix coupling_matrix_elements(const PauliSum& coupling, const BathSpectrum& spectrum);

void attach_coupling(BathSpectrum& spectrum, const CouplingMatrix& coupling);

struct OffdiagSuppression {
  /// RMS of near-resonant off-diagonal |B_jk| over RMS spread of B_nn.
  /// +infinity when all B_nn coincide (the spread vanishes).
  double ratio = 0.0;
  double rms_offdiag = 0.0;
  double rms_diag_spread = 0.0;
  std::size_t pairs_in_window = 0;
  bool degenerate = false;
};

/// Off-diagonal elements enter when |E_j - E_k| < window. Requires m >= 2.
OffdiagSuppression offdiag_suppression(const CouplingMatrix& coupling, double window);

/// diagonalize + weights + coupling for the model bath.
BathSpectrum analyze_bath(const ModelHamiltonians& h, std::size_t m, double kt,
                          const DiagonalizationOptions& options = {});

}  // namespace chaoskraus
