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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chaoskraus/diagnostics.hpp"
#include "chaoskraus/errors.hpp"
#include "chaoskraus/model.hpp"
#include "chaoskraus/pauli.hpp"
#include "chaoskraus/spectral.hpp"
#include "chaoskraus/types.hpp"

namespace chaoskraus {

/// Replaces the model coupling B = sum_i lambda_i sigma_x^(i) by
/// c1 H_B + c2 H_B^2, which commutes with H_B. Needs dense matrices.
struct PolynomialCoupling {
  double c1 = 0.0;
  double c2 = 0.0;
};

struct ExperimentSpec {
  ModelConfig model;
  double t_max = 300.0;
  std::size_t n_samples = 600;
  std::size_t m = 20;
  double tol = 1e-10;
  std::vector<double> jx_values{0.5, 1.0, 2.0};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::filesystem::path output_dir = "chaoskraus-out";

  // Chaos diagnostics.
  std::vector<double> chaos_jx_values{0.05, 0.5, 1.0, 2.0};
  std::size_t n_levels = 200;
  int unfold_degree = kDefaultUnfoldDegree;
  double echo_short_t = 2.0;
  double echo_long_t = 40.0;
  std::size_t echo_samples = 401;
  double echo_floor = 0.1;
  /// Energy window for the off-diagonal suppression diagnostic.
  double offdiag_window = 1.0;

  std::optional<PolynomialCoupling> polynomial_coupling;
  /// Worker threads for sweep points (0: worker_count()).
  std::size_t workers = 0;
};

/// Throws ConfigError on t_max <= 0, n_samples < 2, empty sweeps, m = 0,
/// tol <= 0 and invalid model settings.
void validate(const ExperimentSpec& spec);

/// Keys: the model keys (n_bath, b0z, delta, lambda, jx, kt, seed) plus
/// t_max, n_samples, m, tol, jx_values, seeds, output_dir, chaos_jx_values,
/// n_levels, unfold_degree, echo_short_t, echo_long_t, echo_samples,
/// echo_floor, offdiag_window, coupling (model | polynomial), coupling_c1,
/// coupling_c2. Lists are comma separated. Unknown keys are a ConfigError.
ExperimentSpec spec_from_key_values(const std::map<std::string, std::string>& kv);
ExperimentSpec read_experiment_spec(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentSpec& spec);

std::vector<double> parse_double_list(const std::string& key, const std::string& value);
std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& value);

/// Metrics for one (Jx, seed) sweep point.
struct SweepPoint {
  double jx = 0.0;
  std::uint64_t seed = 0;
  std::string tag;  // output subdirectory name
  bool ok = false;
  std::string error;
  ExitCode error_code = ExitCode::kSuccess;

  double mean_dp = 0.0;  // mean_t |P_exact - P_kraus|
  double mean_df = 0.0;
  double max_dp = 0.0;
  double max_df = 0.0;
  double min_p_exact = 0.0;
  double min_p_kraus = 0.0;
  double min_f_exact = 0.0;
  double min_f_kraus = 0.0;
  double max_rho_deviation = 0.0;  // max_t max_ij |rho_exact - rho_kraus|
  /// (1 - min F) / (1 - min P); infinite when the purity never drops.
  double error_ratio_exact = 0.0;
  double error_ratio_kraus = 0.0;

  DecayFit echo_fit;
  double d_poisson = 0.0;
  double d_wd = 0.0;
  double mean_spacing = 0.0;
  OffdiagSuppression offdiag;
  double tail_weight = 0.0;  // p[m-1]
  /// Adjacent retained levels closer than 1e-10 relative; B_nn is then
  /// basis dependent inside those subspaces.
  std::size_t degenerate_pairs = 0;
  std::vector<std::string> warnings;
};

struct ComparisonReport {
  ExperimentSpec spec;
  std::vector<SweepPoint> points;

  std::size_t failures() const;
  /// Exit code of the first failed point, kSuccess if none failed.
  ExitCode status() const;
};

/// Model, bath spectrum and couplings of one (Jx, seed) point.
struct PreparedPoint {
  ModelParameters params;
  ModelHamiltonians hamiltonians;
  BathSpectrum spectrum;   // weights and B_nn attached
  CouplingMatrix coupling;  // over the retained states
  OperatorMatrix total;     // dense H_total, polynomial coupling only
};

PreparedPoint prepare_point(const ExperimentSpec& spec, double jx, std::uint64_t seed);
Trajectory exact_trajectory(const ExperimentSpec& spec, const PreparedPoint& point);
Trajectory kraus_trajectory(const ExperimentSpec& spec, const PreparedPoint& point);

/// Full pipeline for one sweep point. Writes trajectories, spectrum and
/// couplings under `spec.output_dir / points / tag` when `write` is set.
/// Errors are captured in the returned point, never thrown.
SweepPoint run_sweep_point(const ExperimentSpec& spec, double jx, std::uint64_t seed,
                           bool write = true);

/// All (Jx, seed) points in a worker pool, then the report files. A failed
/// point is recorded and the remaining points still run.
ComparisonReport run_experiment(const ExperimentSpec& spec);

struct ChaosPoint {
  double jx = 0.0;
  std::uint64_t seed = 0;
  std::string tag;
  bool ok = false;
  std::string error;
  ExitCode error_code = ExitCode::kSuccess;
  SpacingStatistics spacing;
  EchoSeries echo_short;
  EchoSeries echo_long;
  DecayFit fit;
};

struct ChaosSuite {
  std::vector<ChaosPoint> points;
  ExitCode status() const;
};

/// Level statistics of the lowest n_levels bath eigenvalues, plus the echo
/// with H0 the Jx = 0 bath and V its exchange part, over the short and
/// long windows. The decay rate is fitted on the short window.
ChaosPoint chaos_point(const ExperimentSpec& spec, double jx, std::uint64_t seed);

/// chaos_point over chaos_jx_values x seeds; writes spacing and echo files
/// under `spec.output_dir / chaos` when `write` is set.
ChaosSuite run_chaos_suite(const ExperimentSpec& spec, bool write = true);

/// Directory-safe label, e.g. "jx0.5_seed3".
std::string point_tag(double jx, std::uint64_t seed);

}  // namespace chaoskraus
