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

#include "chaoskraus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "chaoskraus/errors.hpp"
#include "chaoskraus/rng.hpp"

namespace chaoskraus {
namespace {

void check_count(std::size_t m, std::size_t dim) {
  if (m < 1 || m > dim) {
    throw DomainError("retained state count " + std::to_string(m) + " outside [1, " +
                      std::to_string(dim) + "]");
  }
}

// Residual check and degeneracy bookkeeping shared by both solvers.
void finish_spectrum(BathSpectrum& s, const Matrix& residuals, double norm, double tol) {
  const auto m = s.retained();
  for (std::size_t i = 0; i < m; ++i) {
    s.max_residual = std::max(s.max_residual, residuals.col(static_cast<Eigen::Index>(i)).norm());
  }
  const double scale = std::max(norm, 1.0);
  if (s.max_residual > tol * scale) {
    std::ostringstream os;
    os << "eigensolver residual " << s.max_residual << " exceeds " << tol << " * ||H_B|| = "
       << tol * scale;
    throw NumericError(os.str());
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(s.energies[i + 1] - s.energies[i]) <= 1e-10 * scale) ++s.degenerate_pairs;
  }
  if (s.degenerate_pairs > 0) {
    s.warnings.push_back(std::to_string(s.degenerate_pairs) +
                         " degenerate level pair(s) among retained states; diagonal coupling "
                         "elements depend on the eigensolver's basis choice there");
  }
}

}  // namespace

BathSpectrum diagonalize_bath(const OperatorMatrix& bath, std::size_t m,
                              const DiagonalizationOptions& options) {
  const auto dim = static_cast<std::size_t>(bath.dim());
  if (bath.data.rows() != bath.data.cols() || dim == 0) {
    throw ShapeError("bath Hamiltonian must be a nonempty square matrix");
  }
  check_count(m, dim);
  const double size = std::max(1.0, bath.data.cwiseAbs().maxCoeff());
  if (hermiticity_defect(bath.data) > 1e-12 * size) {
    throw ValidationError("bath Hamiltonian is not Hermitian");
  }
  if (options.method == EigenMethod::kLanczos) {
    throw DomainError("Lanczos path takes a Pauli sum; use the PauliSum overload");
  }

  BathSpectrum s;
  const auto mi = static_cast<Eigen::Index>(m);
  // The model's H_B is real symmetric; the real solver is ~4x cheaper.
  if (bath.data.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(bath.data.real());
    if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver did not converge");
    s.all_energies = solver.eigenvalues();
    s.energies = s.all_energies.head(mi);
    s.vectors = solver.eigenvectors().leftCols(mi).cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(bath.data);
    if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver did not converge");
    s.all_energies = solver.eigenvalues();
    s.energies = s.all_energies.head(mi);
    s.vectors = solver.eigenvectors().leftCols(mi);
  }
  const double norm = s.all_energies.cwiseAbs().maxCoeff();
  const Matrix residuals = bath.data * s.vectors - s.vectors * s.energies.asDiagonal();
  finish_spectrum(s, residuals, norm, options.residual_tol);
  return s;
}

BathSpectrum diagonalize_bath(const PauliSum& bath, std::size_t m,
                              const DiagonalizationOptions& options) {
  const PauliKernel kernel(bath);
  const std::size_t dim = kernel.dim();
  check_count(m, dim);
  const auto n = static_cast<Eigen::Index>(dim);

  Vector start(n);
  UniformStream rng(0x5eed);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = rng.next_open01() - 0.5;
  start.normalize();

  std::size_t krylov = std::min(dim, std::max<std::size_t>(2 * m + 40, 80));
  for (;;) {
    const auto kk = static_cast<Eigen::Index>(krylov);
    Matrix basis(n, kk);
    RealVector alpha(kk), beta(kk);
    basis.col(0) = start;
    Vector w(n);
    Eigen::Index built = kk;
    for (Eigen::Index j = 0; j < kk; ++j) {
      kernel.apply(basis.col(j).eval(), w);
      alpha[j] = basis.col(j).dot(w).real();
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Vector proj = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * proj;
      }
      beta[j] = w.norm();
      if (j + 1 == kk) break;
      if (beta[j] < 1e-12) {  // invariant subspace found
        built = j + 1;
        break;
      }
      basis.col(j + 1) = w / beta[j];
    }

    RealMatrix tri = RealMatrix::Zero(built, built);
    for (Eigen::Index j = 0; j < built; ++j) {
      tri(j, j) = alpha[j];
      if (j + 1 < built) tri(j, j + 1) = tri(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> small(tri);
    if (small.info() != Eigen::Success) throw NumericError("Lanczos projection did not converge");
    const auto mi = static_cast<Eigen::Index>(std::min<std::size_t>(m, built));

    BathSpectrum s;
    s.all_energies = small.eigenvalues();
    s.energies = small.eigenvalues().head(mi);
    s.vectors = basis.leftCols(built) * small.eigenvectors().leftCols(mi).cast<Complex>();
    for (Eigen::Index i = 0; i < mi; ++i) s.vectors.col(i).normalize();

    Matrix residuals(n, mi);
    for (Eigen::Index i = 0; i < mi; ++i) {
      Vector hv = kernel.apply(s.vectors.col(i).eval());
      residuals.col(i) = hv - s.energies[i] * s.vectors.col(i);
    }
    const double norm = s.all_energies.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < mi; ++i) worst = std::max(worst, residuals.col(i).norm());
    const bool converged = worst <= options.residual_tol * std::max(norm, 1.0);
    if ((converged && static_cast<std::size_t>(mi) == m) || krylov == dim) {
      if (static_cast<std::size_t>(mi) < m) {
        throw NumericError("Lanczos found an invariant subspace of dimension " +
                           std::to_string(mi) + " < " + std::to_string(m));
      }
      finish_spectrum(s, residuals, norm, options.residual_tol);
      return s;
    }
    krylov = std::min(dim, 2 * krylov);
  }
}

RealVector boltzmann_weights(const RealVector& energies, double kt, std::size_t m) {
  if (!(kt >= 0.0)) throw DomainError("temperature must be >= 0");
  check_count(m, static_cast<std::size_t>(energies.size()));
  const RealVector e = energies.head(static_cast<Eigen::Index>(m));
  const double e_min = e.minCoeff();
  RealVector w(e.size());
  if (kt == 0.0) {
    for (Eigen::Index i = 0; i < e.size(); ++i) w[i] = e[i] == e_min ? 1.0 : 0.0;
  } else {
    for (Eigen::Index i = 0; i < e.size(); ++i) w[i] = std::exp(-(e[i] - e_min) / kt);
  }
  return w / w.sum();
}

void assign_weights(BathSpectrum& s, double kt) {
  s.kt = kt;
  s.weights = boltzmann_weights(s.energies, kt, s.retained());
  const double tail = s.weights[s.weights.size() - 1];
  if (s.retained() > 1 && tail > kTailWeightWarning) {
    std::ostringstream os;
    os << "tail weight p[m-1] = " << tail << " exceeds " << kTailWeightWarning
       << "; retained-state count may be too small for kT = " << kt;
    s.warnings.push_back(os.str());
  }
}

CouplingMatrix coupling_matrix_elements(const OperatorMatrix& coupling,
                                        const BathSpectrum& spectrum) {
  if (coupling.data.rows() != spectrum.vectors.rows() ||
      coupling.data.cols() != spectrum.vectors.rows()) {
    throw ShapeError("coupling operator dimension " + std::to_string(coupling.data.rows()) +
                     " does not match bath dimension " + std::to_string(spectrum.dim()));
  }
  CouplingMatrix c;
  c.elements = spectrum.vectors.adjoint() * coupling.data * spectrum.vectors;
  c.energies = spectrum.energies;
  if (c.elements.diagonal().imag().cwiseAbs().maxCoeff() > 1e-10) {
    throw NumericError("diagonal coupling elements have imaginary part above 1e-10");
  }
  return c;
}

CouplingMatrix coupling_matrix_elements(const PauliSum& coupling, const BathSpectrum& spectrum) {
  if (coupling.dim() != spectrum.dim()) {
    throw ShapeError("coupling operator dimension " + std::to_string(coupling.dim()) +
                     " does not match bath dimension " + std::to_string(spectrum.dim()));
  }
  const PauliKernel kernel(coupling);
  Matrix bv(spectrum.vectors.rows(), spectrum.vectors.cols());
  for (Eigen::Index i = 0; i < bv.cols(); ++i) bv.col(i) = kernel.apply(spectrum.vectors.col(i).eval());
  CouplingMatrix c;
  c.elements = spectrum.vectors.adjoint() * bv;
  c.energies = spectrum.energies;
  if (c.elements.diagonal().imag().cwiseAbs().maxCoeff() > 1e-10) {
    throw NumericError("diagonal coupling elements have imaginary part above 1e-10");
  }
  return c;
}

void attach_coupling(BathSpectrum& spectrum, const CouplingMatrix& coupling) {
  if (coupling.elements.rows() != static_cast<Eigen::Index>(spectrum.retained())) {
    throw ShapeError("coupling matrix size does not match retained state count");
  }
  spectrum.bdiag = coupling.diagonal();
}

OffdiagSuppression offdiag_suppression(const CouplingMatrix& coupling, double window) {
  const Eigen::Index m = coupling.elements.rows();
  if (m < 2) throw DomainError("off-diagonal suppression needs at least two states");
  if (coupling.energies.size() != m) throw ShapeError("coupling energies size mismatch");

  OffdiagSuppression r;
  double off_sq = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if (j == k || std::abs(coupling.energies[j] - coupling.energies[k]) >= window) continue;
      off_sq += std::norm(coupling.elements(j, k));
      ++r.pairs_in_window;
    }
  }
  r.rms_offdiag = r.pairs_in_window ? std::sqrt(off_sq / static_cast<double>(r.pairs_in_window)) : 0.0;
  const RealVector d = coupling.diagonal();
  r.rms_diag_spread = std::sqrt((d.array() - d.mean()).square().mean());
  if (r.rms_diag_spread == 0.0) {
    r.degenerate = true;
    r.ratio = std::numeric_limits<double>::infinity();
  } else {
    r.ratio = r.rms_offdiag / r.rms_diag_spread;
  }
  return r;
}

BathSpectrum analyze_bath(const ModelHamiltonians& h, std::size_t m, double kt,
                          const DiagonalizationOptions& options) {
  BathSpectrum s;
  if (options.method == EigenMethod::kDense) {
    if (!h.has_dense_bath()) {
      throw CapacityError("dense bath Hamiltonian not materialized; raise the dense cap or "
                          "use the Lanczos solver");
    }
    s = diagonalize_bath(h.bath, m, options);
  } else {
    s = diagonalize_bath(h.bath_terms, m, options);
  }
  assign_weights(s, kt);
  attach_coupling(s, coupling_matrix_elements(h.bath_coupling_terms, s));
  return s;
}

}  // namespace chaoskraus
