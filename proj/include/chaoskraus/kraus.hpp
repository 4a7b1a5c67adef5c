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
#include <vector>

#include "chaoskraus/spectral.hpp"
#include "chaoskraus/types.hpp"

namespace chaoskraus {

/// One term of the chaotic Kraus sum: weight p_n and generator
/// H_S + S * B_nn. The Kraus operator is sqrt(p_n) exp(-i generator t).
struct KrausBranch {
  double weight = 0.0;
  double bath_element = 0.0;  // B_nn
  Matrix generator;
};

/// Boltzmann-weighted ensemble of effective system Hamiltonians.
struct KrausEnsemble {
  Matrix system_hamiltonian;
  Matrix system_coupling;
  std::vector<KrausBranch> branches;

  Eigen::Index system_dim() const { return system_hamiltonian.rows(); }
  double total_weight() const;
};

/// One branch per retained bath state. Throws ShapeError if H_S and S differ
/// in dimension, ValidationError if the spectrum lacks weights or B_nn.
KrausEnsemble build_ensemble(const Matrix& system_hamiltonian, const Matrix& system_coupling,
                             const BathSpectrum& spectrum);

/// Direct construction from weights and diagonal couplings.
KrausEnsemble build_ensemble(const Matrix& system_hamiltonian, const Matrix& system_coupling,
                             const RealVector& weights, const RealVector& bath_elements);

/// rho(t) = sum_n p_n U_n(t) rho0 U_n(t)^dagger, with U_n evaluated directly
/// at each sampled time (closed form for qubits, cached eigendecomposition
/// otherwise). Purity and fidelity (against H_S-only evolution) are filled.
Trajectory propagate_kraus(const KrausEnsemble& ensemble, const DensityMatrix& rho0,
                           const std::vector<double>& times);

/// Single-time channel output.
DensityMatrix apply_channel(const KrausEnsemble& ensemble, const DensityMatrix& rho0, double t);

/// Amplitudes of exp(-i(-(Bz/2) sigma_z + Bnn sigma_x) t) (|0> + |1>)/sqrt(2).
/// c1 is the amplitude on |0> (sigma_z = +1), c0 the amplitude on |1>.
struct QubitBranchCoefficients {
  double b = 0.0;  // sqrt(Bz^2 + 4 Bnn^2), energy
  double a = 0.0;  // b / 2, angular frequency
  Complex c1;
  Complex c0;

  /// [[|c1|^2, c1 c0*], [c0 c1*, |c0|^2]]
  DensityMatrix density() const;
};

/// Closed-form branch amplitudes for the detector qubit starting in the
/// equal superposition. b = 0 gives the constant limit c1 = c0 = 1/sqrt(2).
QubitBranchCoefficients qubit_closed_form(double bz, double bnn, double t);

/// Weighted sum of closed-form branch densities, one entry per time.
Trajectory qubit_closed_form_trajectory(double bz, const RealVector& weights,
                                        const RealVector& bath_elements,
                                        const std::vector<double>& times);

/// max(max|sum p U U^dagger - I|, max|sum p U^dagger U - I|) at time t.
double completeness_residual(const KrausEnsemble& ensemble, double t);

/// Choi matrix sum_n p_n vec(U_n) vec(U_n)^dagger (column-stacking), d^2 x d^2.
Matrix choi_matrix(const KrausEnsemble& ensemble, double t);

/// Eigenvalue threshold for Choi-matrix positivity.
inline constexpr double kChoiTolerance = 1e-10;

}  // namespace chaoskraus
