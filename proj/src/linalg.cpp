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

#include "chaoskraus/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "chaoskraus/errors.hpp"

namespace chaoskraus {

std::vector<double> uniform_grid(double t_max, std::size_t n_samples) {
  if (n_samples < 2 || !(t_max > 0.0)) {
    throw DomainError("time grid needs t_max > 0 and at least two samples");
  }
  std::vector<double> t(n_samples);
  const double dt = t_max / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) t[i] = dt * static_cast<double>(i);
  t.back() = t_max;
  return t;
}

HermitianPropagator::HermitianPropagator(const Matrix& h) {
  if (h.rows() != h.cols()) throw ShapeError("generator must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericError("generator diagonalization failed");
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Matrix HermitianPropagator::unitary(double t) const {
  Vector phases(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    phases[i] = std::polar(1.0, -values_[i] * t);
  }
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Matrix HermitianPropagator::evolve(const Matrix& rho, double t) const {
  const Matrix u = unitary(t);
  return u * rho * u.adjoint();
}

Matrix qubit_unitary(const Matrix& h, double t) {
  if (h.rows() != 2 || h.cols() != 2) throw ShapeError("qubit_unitary needs a 2x2 generator");
  // H = h0 I + hx X + hy Y + hz Z
  const double h0 = 0.5 * (h(0, 0) + h(1, 1)).real();
  const double hz = 0.5 * (h(0, 0) - h(1, 1)).real();
  const double hx = h(1, 0).real();
  const double hy = h(1, 0).imag();
  const double r = std::sqrt(hx * hx + hy * hy + hz * hz);
  const double c = std::cos(r * t);
  // sin(r t) / r, continuous at r = 0
  const double s = r > 0.0 ? std::sin(r * t) / r : t;
  Matrix u(2, 2);
  u(0, 0) = Complex(c, -s * hz);
  u(1, 1) = Complex(c, s * hz);
  // -i s (hx X + hy Y): (0,1) -> -i s (hx - i hy), (1,0) -> -i s (hx + i hy)
  u(0, 1) = Complex(-s * hy, -s * hx);
  u(1, 0) = Complex(s * hy, -s * hx);
  return std::polar(1.0, -h0 * t) * u;
}

Matrix projector(const Vector& psi) { return psi * psi.adjoint(); }

Vector plus_state() {
  Vector v(2);
  v << Complex(0.5 * std::numbers::sqrt2, 0.0), Complex(0.5 * std::numbers::sqrt2, 0.0);
  return v;
}

DensityCheck check_density(const Matrix& rho, double herm_tol, double trace_tol,
                           double eig_tol) {
  DensityCheck c;
  c.hermiticity_defect = hermiticity_defect(rho);
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const Matrix sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = solver.eigenvalues().minCoeff();
  c.ok = c.hermiticity_defect < herm_tol && c.trace_error < trace_tol &&
         c.min_eigenvalue > -eig_tol;
  return c;
}

void require_density(const Matrix& rho, const char* what) {
  const DensityCheck c = check_density(rho);
  if (!c.ok) {
    std::ostringstream os;
    os << what << ": not a valid density matrix (hermiticity " << c.hermiticity_defect
       << ", trace error " << c.trace_error << ", min eigenvalue " << c.min_eigenvalue << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace chaoskraus
