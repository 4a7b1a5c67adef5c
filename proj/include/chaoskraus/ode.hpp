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
#include <limits>
#include <vector>

#include "chaoskraus/types.hpp"

namespace chaoskraus {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  /// Zero selects the step automatically.
  double first_step = 0.0;
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
};

/// dy/dt = f(t, y), written into `dydt` (already sized).
using ComplexRhs = std::function<void(double t, const Vector& y, Vector& dydt)>;

/// Dormand-Prince 8(5,3) explicit Runge-Kutta with step-size control and the
/// seventh-order continuous extension.
///
/// The local error estimate is measured in the Euclidean norm of err_k / w_k,
/// w_k = atol + rtol * max(|y_k|, |y_new,k|), so for a unit vector with
/// atol = rtol = tol the per-step error is bounded by roughly tol. Steps are
/// chosen independently of the output grid; samples come from the dense
/// interpolant, so refining the grid leaves shared sample values untouched.
///
/// `times` must be nondecreasing with times[0] >= t0. Throws StiffnessError
/// if the step size underflows or `max_steps` is exhausted.
std::vector<Vector> integrate_dop853(const ComplexRhs& rhs, double t0, const Vector& y0,
                                     const std::vector<double>& times,
                                     const IntegratorOptions& options,
                                     IntegratorStats* stats = nullptr);

/// Receives sample `index` (into `times`) as soon as it is available.
using SampleObserver = std::function<void(std::size_t index, const Vector& y)>;

/// Same integration, streaming samples instead of storing them.
void integrate_dop853(const ComplexRhs& rhs, double t0, const Vector& y0,
                      const std::vector<double>& times, const IntegratorOptions& options,
                      const SampleObserver& observer, IntegratorStats* stats = nullptr);

}  // namespace chaoskraus
