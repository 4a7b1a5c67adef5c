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
#include <functional>
#include <vector>

#include "chaoskraus/model.hpp"
#include "chaoskraus/ode.hpp"
#include "chaoskraus/pauli.hpp"
#include "chaoskraus/spectral.hpp"
#include "chaoskraus/types.hpp"

namespace chaoskraus {

struct PropagationOptions {
  /// Mixed absolute/relative local error tolerance per step.
  double tol = 1e-10;
  /// Integrate in a frame rotating at <v0|H|v0>; the phase is restored on
  /// output. Exact, and removes the dominant oscillation from the error
  /// control.
  bool shift_energy = true;
  double max_step = std::numeric_limits<double>::infinity();
};

/// Solves dv/dt = -i H v from v(0) = v0 and samples v at `times` (t >= 0,
/// nondecreasing). Throws ValidationError if |‖v0‖ - 1| > 1e-8, DomainError
/// for tol <= 0, ShapeError for a dimension mismatch, StiffnessError on step
/// underflow.
std::vector<Vector> propagate(const PauliKernel& hamiltonian, const Vector& v0,
                              const std::vector<double>& times,
                              const PropagationOptions& options = {},
                              IntegratorStats* stats = nullptr);
std::vector<Vector> propagate(const OperatorMatrix& hamiltonian, const Vector& v0,
                              const std::vector<double>& times,
                              const PropagationOptions& options = {},
                              IntegratorStats* stats = nullptr);

/// Receives the dim x k block state at times[index].
using BlockObserver = std::function<void(std::size_t index, const Matrix& block)>;

/// Propagates the k unit columns of `v0` together, with one shared step
/// sequence and the error norm taken over the whole block (so each column is
/// held to at least the single-vector tolerance). Each column gets its own
/// energy shift.
void propagate_block(const PauliKernel& hamiltonian, const Matrix& v0,
                     const std::vector<double>& times, const PropagationOptions& options,
                     const BlockObserver& observer, IntegratorStats* stats = nullptr);
void propagate_block(const OperatorMatrix& hamiltonian, const Matrix& v0,
                     const std::vector<double>& times, const PropagationOptions& options,
                     const BlockObserver& observer, IntegratorStats* stats = nullptr);

/// rho_{ss'} = sum_b v[s, b] conj(v[s', b]) / ‖v‖^2 for a state on
/// system (x) bath, system index most significant. `system_dim` defaults to
/// one qubit. Throws ValidationError if ‖v‖ is off by more than 1e-6.
DensityMatrix partial_trace_bath(const Vector& v, std::size_t system_dim = 2);

struct ExactOptions {
  PropagationOptions propagation;
  std::size_t workers = 0;  // 0: worker_count()
  /// Branches propagated together in one block ODE (0: all m). Fixes the
  /// step sequence independently of the worker count.
  std::size_t block_columns = 0;
};

/// Thermal reference trajectory: propagate psi0 (x) |n> for each retained
/// bath state, trace out the bath, and sum with weights p_n in index order.
/// Errors from branch n are rethrown with n in the message.
Trajectory exact_reduced_trajectory(const ModelHamiltonians& model, const BathSpectrum& spectrum,
                                    const Vector& psi0, const std::vector<double>& times,
                                    const ExactOptions& options = {});

/// Same, for an explicit dense total Hamiltonian on qubit (x) bath (e.g. a
/// synthetic coupling that has no Pauli form).
Trajectory exact_reduced_trajectory(const OperatorMatrix& total, const Matrix& system_hamiltonian,
                                    const BathSpectrum& spectrum, const Vector& psi0,
                                    const std::vector<double>& times,
                                    const ExactOptions& options = {});

}  // namespace chaoskraus
