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

#include "chaoskraus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "chaoskraus/diagnostics.hpp"
#include "chaoskraus/errors.hpp"
#include "chaoskraus/linalg.hpp"
#include "chaoskraus/parallel.hpp"

namespace chaoskraus {
namespace {

using ApplyAdd = std::function<void(const Vector& in, Vector& out, Complex alpha)>;

std::vector<Vector> propagate_impl(const ApplyAdd& apply_add, Eigen::Index dim, const Vector& v0,
                                   const std::vector<double>& times,
                                   const PropagationOptions& options, IntegratorStats* stats) {
  if (v0.size() != dim) {
    throw ShapeError("initial state has dimension " + std::to_string(v0.size()) +
                     ", Hamiltonian " + std::to_string(dim));
  }
  if (!(options.tol > 0.0)) throw DomainError("propagation tolerance must be positive");
  if (std::abs(v0.norm() - 1.0) > 1e-8) {
    throw ValidationError("initial state is not normalized (norm " + std::to_string(v0.norm()) +
                          ")");
  }

  double shift = 0.0;
  if (options.shift_energy) {
    Vector hv = Vector::Zero(dim);
    apply_add(v0, hv, Complex{1.0, 0.0});
    shift = v0.dot(hv).real();
  }

  const ComplexRhs rhs = [&](double, const Vector& y, Vector& dydt) {
    // dy/dt = -i (H - shift) y
    dydt = Complex(0.0, shift) * y;
    apply_add(y, dydt, Complex{0.0, -1.0});
  };
  IntegratorOptions io;
  io.rtol = options.tol;
  io.atol = options.tol;
  io.max_step = options.max_step;
  std::vector<Vector> out = integrate_dop853(rhs, 0.0, v0, times, io, stats);
  if (shift != 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::polar(1.0, -shift * times[i]);
  }
  return out;
}


// Row-major flattening of a dim x k block: element (j, c) lives at j * k + c.
using RowBlock = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BlockApply =
    std::function<void(const Complex* in, Complex* out, Complex alpha, Eigen::Index k)>;

void propagate_block_impl(const BlockApply& apply_add, Eigen::Index dim, const Matrix& v0,
                          const std::vector<double>& times, const PropagationOptions& options,
                          const BlockObserver& observer, IntegratorStats* stats) {
  const Eigen::Index k = v0.cols();
  if (v0.rows() != dim || k == 0) {
    throw ShapeError("block has shape " + std::to_string(v0.rows()) + "x" + std::to_string(k) +
                     ", Hamiltonian dimension " + std::to_string(dim));
  }
  if (!(options.tol > 0.0)) throw DomainError("propagation tolerance must be positive");
  for (Eigen::Index c = 0; c < k; ++c) {
    if (std::abs(v0.col(c).norm() - 1.0) > 1e-8) {
      throw ValidationError("block column " + std::to_string(c) + " is not normalized");
    }
  }

  Vector y0(dim * k);
  Eigen::Map<RowBlock>(y0.data(), dim, k) = v0;

  RealVector shift = RealVector::Zero(k);
  if (options.shift_energy) {
    Vector hv = Vector::Zero(dim * k);
    apply_add(y0.data(), hv.data(), Complex{1.0, 0.0}, k);
    const Eigen::Map<const RowBlock> hb(hv.data(), dim, k);
    for (Eigen::Index c = 0; c < k; ++c) shift[c] = v0.col(c).dot(hb.col(c)).real();
  }

  const ComplexRhs rhs = [&](double, const Vector& y, Vector& dydt) {
    // dy/dt = -i (H - shift_c) y, column by column
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index c = 0; c < k; ++c) {
        dydt[j * k + c] = Complex(0.0, shift[c]) * y[j * k + c];
      }
    }
    apply_add(y.data(), dydt.data(), Complex{0.0, -1.0}, k);
  };
  IntegratorOptions io;
  io.rtol = options.tol;
  io.atol = options.tol;
  io.max_step = options.max_step;
  Matrix block(dim, k);
  integrate_dop853(
      rhs, 0.0, y0, times, io,
      [&](std::size_t i, const Vector& y) {
        block = Eigen::Map<const RowBlock>(y.data(), dim, k);
        for (Eigen::Index c = 0; c < k; ++c) {
          if (shift[c] != 0.0) block.col(c) *= std::polar(1.0, -shift[c] * times[i]);
        }
        observer(i, block);
      },
      stats);
}

}  // namespace

std::vector<Vector> propagate(const PauliKernel& hamiltonian, const Vector& v0,
                              const std::vector<double>& times, const PropagationOptions& options,
                              IntegratorStats* stats) {
  const ApplyAdd apply = [&](const Vector& in, Vector& out, Complex alpha) {
    hamiltonian.apply_add(in.data(), out.data(), alpha);
  };
  return propagate_impl(apply, static_cast<Eigen::Index>(hamiltonian.dim()), v0, times, options,
                        stats);
}

std::vector<Vector> propagate(const OperatorMatrix& hamiltonian, const Vector& v0,
                              const std::vector<double>& times, const PropagationOptions& options,
                              IntegratorStats* stats) {
  if (hamiltonian.data.rows() != hamiltonian.data.cols()) {
    throw ShapeError("Hamiltonian must be square");
  }
  const ApplyAdd apply = [&](const Vector& in, Vector& out, Complex alpha) {
    out.noalias() += alpha * (hamiltonian.data * in);
  };
  return propagate_impl(apply, hamiltonian.data.rows(), v0, times, options, stats);
}

void propagate_block(const PauliKernel& hamiltonian, const Matrix& v0,
                     const std::vector<double>& times, const PropagationOptions& options,
                     const BlockObserver& observer, IntegratorStats* stats) {
  const BlockApply apply = [&](const Complex* in, Complex* out, Complex alpha, Eigen::Index k) {
    hamiltonian.apply_add_block(in, out, alpha, static_cast<std::size_t>(k));
  };
  propagate_block_impl(apply, static_cast<Eigen::Index>(hamiltonian.dim()), v0, times, options,
                       observer, stats);
}

void propagate_block(const OperatorMatrix& hamiltonian, const Matrix& v0,
                     const std::vector<double>& times, const PropagationOptions& options,
                     const BlockObserver& observer, IntegratorStats* stats) {
  if (hamiltonian.data.rows() != hamiltonian.data.cols()) {
    throw ShapeError("Hamiltonian must be square");
  }
  const Eigen::Index dim = hamiltonian.data.rows();
  const BlockApply apply = [&](const Complex* in, Complex* out, Complex alpha, Eigen::Index k) {
    const Eigen::Map<const RowBlock> x(in, dim, k);
    Eigen::Map<RowBlock> y(out, dim, k);
    y.noalias() += alpha * (hamiltonian.data * x);
  };
  propagate_block_impl(apply, dim, v0, times, options, observer, stats);
}

DensityMatrix partial_trace_bath(const Vector& v, std::size_t system_dim) {
  const auto n = static_cast<std::size_t>(v.size());
  if (system_dim == 0 || n % system_dim != 0 || n == 0) {
    throw ShapeError("state dimension " + std::to_string(n) + " is not a multiple of " +
                     std::to_string(system_dim));
  }
  const double norm_sq = v.squaredNorm();
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-6) {
    throw ValidationError("partial trace of unnormalized state (norm " +
                          std::to_string(std::sqrt(norm_sq)) + ")");
  }
  const auto ds = static_cast<Eigen::Index>(system_dim);
  const auto db = static_cast<Eigen::Index>(n / system_dim);
  // Row-major view: row s holds the bath amplitudes of system state s.
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      block(v.data(), ds, db);
  DensityMatrix rho = block * block.adjoint();
  rho /= norm_sq;
  // Exact Hermitian symmetrization removes round-off asymmetry.
  return 0.5 * (rho + rho.adjoint());
}

namespace {

using BlockPropagator = std::function<void(const Matrix& v0, const BlockObserver& observer)>;

Trajectory exact_impl(const BlockPropagator& propagate_columns, const Matrix& system_hamiltonian,
                      const BathSpectrum& spectrum, const Vector& psi0,
                      const std::vector<double>& times, const ExactOptions& options) {
  if (psi0.size() != 2) throw ShapeError("system state must be a qubit");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw ValidationError("psi0 is not normalized");
  if (static_cast<std::size_t>(spectrum.weights.size()) != spectrum.retained()) {
    throw ValidationError("spectrum has no Boltzmann weights");
  }
  const std::size_t m = spectrum.retained();
  const auto bath_dim = static_cast<Eigen::Index>(spectrum.dim());

  // The column partition depends on m and block_columns only, never on the
  // worker count, so results do not change with the degree of parallelism.
  const std::size_t per_block = options.block_columns ? options.block_columns : m;
  const std::size_t n_blocks = (m + per_block - 1) / per_block;
  std::vector<std::vector<DensityMatrix>> branches(m, std::vector<DensityMatrix>(times.size()));
  const std::size_t workers = options.workers ? options.workers : worker_count();
  parallel_for(
      n_blocks,
      [&](std::size_t b) {
        const std::size_t first = b * per_block;
        const std::size_t count = std::min(per_block, m - first);
        try {
          Matrix v0(2 * bath_dim, static_cast<Eigen::Index>(count));
          for (std::size_t c = 0; c < count; ++c) {
            const Vector chi = spectrum.vectors.col(static_cast<Eigen::Index>(first + c));
            Vector col(2 * bath_dim);
            col.head(bath_dim) = psi0[0] * chi;
            col.tail(bath_dim) = psi0[1] * chi;
            v0.col(static_cast<Eigen::Index>(c)) = col;
          }
          propagate_columns(v0, [&](std::size_t i, const Matrix& block) {
            for (std::size_t c = 0; c < count; ++c) {
              branches[first + c][i] = partial_trace_bath(block.col(static_cast<Eigen::Index>(c)));
            }
          });
        } catch (const Error& e) {
          std::ostringstream os;
          os << "bath state n=" << first;
          if (count > 1) os << ".." << first + count - 1;
          os << ": " << e.what();
          if (dynamic_cast<const StiffnessError*>(&e)) throw StiffnessError(os.str());
          if (dynamic_cast<const ValidationError*>(&e)) throw ValidationError(os.str());
          throw NumericError(os.str());
        }
      },
      std::min(workers, n_blocks));

  Trajectory tr;
  tr.times = times;
  tr.rho.assign(times.size(), DensityMatrix::Zero(2, 2));
  for (std::size_t n = 0; n < m; ++n) {
    const double p = spectrum.weights[static_cast<Eigen::Index>(n)];
    for (std::size_t i = 0; i < times.size(); ++i) tr.rho[i] += p * branches[n][i];
  }
  fill_quality_measures(tr, system_hamiltonian, projector(psi0));
  return tr;
}

}  // namespace

Trajectory exact_reduced_trajectory(const ModelHamiltonians& model, const BathSpectrum& spectrum,
                                    const Vector& psi0, const std::vector<double>& times,
                                    const ExactOptions& options) {
  if (spectrum.dim() != (std::size_t{1} << model.n_bath)) {
    throw ShapeError("spectrum dimension does not match the model bath");
  }
  const PauliKernel kernel(model.total_terms);
  return exact_impl(
      [&](const Matrix& v0, const BlockObserver& obs) {
        propagate_block(kernel, v0, times, options.propagation, obs);
      },
      model.system.data, spectrum, psi0, times, options);
}

Trajectory exact_reduced_trajectory(const OperatorMatrix& total, const Matrix& system_hamiltonian,
                                    const BathSpectrum& spectrum, const Vector& psi0,
                                    const std::vector<double>& times,
                                    const ExactOptions& options) {
  if (static_cast<std::size_t>(total.data.rows()) != 2 * spectrum.dim()) {
    throw ShapeError("total Hamiltonian does not match qubit (x) bath spectrum");
  }
  return exact_impl(
      [&](const Matrix& v0, const BlockObserver& obs) {
        propagate_block(total, v0, times, options.propagation, obs);
      },
      system_hamiltonian, spectrum, psi0, times, options);
}

}  // namespace chaoskraus
