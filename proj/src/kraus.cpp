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

#include "chaoskraus/kraus.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "chaoskraus/diagnostics.hpp"
#include "chaoskraus/errors.hpp"
#include "chaoskraus/linalg.hpp"

namespace chaoskraus {

double KrausEnsemble::total_weight() const {
  double w = 0.0;
  for (const auto& b : branches) w += b.weight;
  return w;
}

KrausEnsemble build_ensemble(const Matrix& system_hamiltonian, const Matrix& system_coupling,
                             const RealVector& weights, const RealVector& bath_elements) {
  if (system_hamiltonian.rows() != system_hamiltonian.cols() ||
      system_coupling.rows() != system_hamiltonian.rows() ||
      system_coupling.cols() != system_hamiltonian.cols()) {
    throw ShapeError("H_S and S must be square matrices of equal dimension");
  }
  if (weights.size() != bath_elements.size() || weights.size() == 0) {
    throw ShapeError("weights and diagonal couplings must be nonempty and of equal length");
  }
  const double scale = std::max(1.0, system_hamiltonian.cwiseAbs().maxCoeff());
  if (hermiticity_defect(system_hamiltonian) > 1e-12 * scale ||
      hermiticity_defect(system_coupling) > 1e-12 * scale) {
    throw ValidationError("H_S and S must be Hermitian");
  }
  KrausEnsemble e;
  e.system_hamiltonian = system_hamiltonian;
  e.system_coupling = system_coupling;
  e.branches.reserve(static_cast<std::size_t>(weights.size()));
  for (Eigen::Index n = 0; n < weights.size(); ++n) {
    if (weights[n] < 0.0) throw ValidationError("negative branch weight");
    e.branches.push_back(
        {weights[n], bath_elements[n], system_hamiltonian + bath_elements[n] * system_coupling});
  }
  return e;
}

KrausEnsemble build_ensemble(const Matrix& system_hamiltonian, const Matrix& system_coupling,
                             const BathSpectrum& spectrum) {
  if (static_cast<std::size_t>(spectrum.weights.size()) != spectrum.retained()) {
    throw ValidationError("spectrum has no Boltzmann weights");
  }
  if (static_cast<std::size_t>(spectrum.bdiag.size()) != spectrum.retained()) {
    throw ValidationError("spectrum has no diagonal coupling elements");
  }
  return build_ensemble(system_hamiltonian, system_coupling, spectrum.weights, spectrum.bdiag);
}

namespace {

// Per-branch unitary source: closed form for qubits, cached eigensystem above.
class BranchUnitaries {
 public:
  explicit BranchUnitaries(const KrausEnsemble& e) : ensemble_(e) {
    if (e.system_dim() != 2) {
      propagators_.reserve(e.branches.size());
      for (const auto& b : e.branches) propagators_.emplace_back(b.generator);
    }
  }

  Matrix operator()(std::size_t n, double t) const {
    if (propagators_.empty()) return qubit_unitary(ensemble_.branches[n].generator, t);
    return propagators_[n].unitary(t);
  }

 private:
  const KrausEnsemble& ensemble_;
  std::vector<HermitianPropagator> propagators_;
};

DensityMatrix channel_at(const KrausEnsemble& e, const BranchUnitaries& unitaries,
                         const DensityMatrix& rho0, double t) {
  DensityMatrix rho = DensityMatrix::Zero(rho0.rows(), rho0.cols());
  for (std::size_t n = 0; n < e.branches.size(); ++n) {
    const Matrix u = unitaries(n, t);
    rho.noalias() += e.branches[n].weight * (u * rho0 * u.adjoint());
  }
  return rho;
}

void check_input_state(const KrausEnsemble& e, const DensityMatrix& rho0) {
  if (rho0.rows() != e.system_dim() || rho0.cols() != e.system_dim()) {
    throw ShapeError("initial density does not match the system dimension");
  }
  require_density(rho0, "initial density");
}

}  // namespace

DensityMatrix apply_channel(const KrausEnsemble& ensemble, const DensityMatrix& rho0, double t) {
  check_input_state(ensemble, rho0);
  const BranchUnitaries unitaries(ensemble);
  return channel_at(ensemble, unitaries, rho0, t);
}

Trajectory propagate_kraus(const KrausEnsemble& ensemble, const DensityMatrix& rho0,
                           const std::vector<double>& times) {
  check_input_state(ensemble, rho0);
  const BranchUnitaries unitaries(ensemble);
  Trajectory tr;
  tr.times = times;
  tr.rho.reserve(times.size());
  for (double t : times) tr.rho.push_back(channel_at(ensemble, unitaries, rho0, t));
  fill_quality_measures(tr, ensemble.system_hamiltonian, rho0);
  return tr;
}

DensityMatrix QubitBranchCoefficients::density() const {
  DensityMatrix rho(2, 2);
  rho(0, 0) = std::norm(c1);
  rho(0, 1) = c1 * std::conj(c0);
  rho(1, 0) = c0 * std::conj(c1);
  rho(1, 1) = std::norm(c0);
  return rho;
}

QubitBranchCoefficients qubit_closed_form(double bz, double bnn, double t) {
  QubitBranchCoefficients q;
  q.b = std::sqrt(bz * bz + 4.0 * bnn * bnn);
  q.a = 0.5 * q.b;
  const double amp = 0.5 * std::numbers::sqrt2;
  if (q.b == 0.0) {
    q.c1 = q.c0 = Complex(amp, 0.0);
    return q;
  }
  const double c = std::cos(q.a * t);
  const double s = std::sin(q.a * t);
  q.c1 = amp * Complex(c, (bz - 2.0 * bnn) / q.b * s);
  q.c0 = amp * Complex(c, -(bz + 2.0 * bnn) / q.b * s);
  return q;
}

Trajectory qubit_closed_form_trajectory(double bz, const RealVector& weights,
                                        const RealVector& bath_elements,
                                        const std::vector<double>& times) {
  if (weights.size() != bath_elements.size()) {
    throw ShapeError("weights and diagonal couplings differ in length");
  }
  Trajectory tr;
  tr.times = times;
  for (double t : times) {
    DensityMatrix rho = DensityMatrix::Zero(2, 2);
    for (Eigen::Index n = 0; n < weights.size(); ++n) {
      rho += weights[n] * qubit_closed_form(bz, bath_elements[n], t).density();
    }
    tr.rho.push_back(rho);
  }
  Matrix hs(2, 2);
  hs << -0.5 * bz, 0.0, 0.0, 0.5 * bz;
  fill_quality_measures(tr, hs, projector(plus_state()));
  return tr;
}

double completeness_residual(const KrausEnsemble& ensemble, double t) {
  const BranchUnitaries unitaries(ensemble);
  const Eigen::Index d = ensemble.system_dim();
  Matrix left = Matrix::Zero(d, d), right = Matrix::Zero(d, d);
  for (std::size_t n = 0; n < ensemble.branches.size(); ++n) {
    const Matrix u = unitaries(n, t);
    const double p = ensemble.branches[n].weight;
    left.noalias() += p * (u * u.adjoint());
    right.noalias() += p * (u.adjoint() * u);
  }
  const Matrix id = Matrix::Identity(d, d);
  return std::max((left - id).cwiseAbs().maxCoeff(), (right - id).cwiseAbs().maxCoeff());
}

Matrix choi_matrix(const KrausEnsemble& ensemble, double t) {
  const BranchUnitaries unitaries(ensemble);
  const Eigen::Index d = ensemble.system_dim();
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (std::size_t n = 0; n < ensemble.branches.size(); ++n) {
    const Matrix u = unitaries(n, t);
    const Eigen::Map<const Vector> vec(u.data(), d * d);
    choi.noalias() += ensemble.branches[n].weight * (vec * vec.adjoint());
  }
  return choi;
}

}  // namespace chaoskraus
