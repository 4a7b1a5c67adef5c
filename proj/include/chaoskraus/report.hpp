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
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chaoskraus/diagnostics.hpp"
#include "chaoskraus/harness.hpp"
#include "chaoskraus/spectral.hpp"
#include "chaoskraus/types.hpp"

namespace chaoskraus {

// Numbers are written with 17 significant digits so files round-trip exactly
// and reruns are byte-identical.
std::string format_number(double x);

/// t,re_rho00,re_rho01,im_rho01,re_rho11,purity,fidelity
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// n,E_n,p_n,B_nn
void write_spectrum_csv(const std::filesystem::path& path, const BathSpectrum& spectrum);

/// {"energies": [...], "re": [[...]], "im": [[...]]}
void write_coupling_json(const std::filesystem::path& path, const CouplingMatrix& coupling);

/// bin_center,density
void write_histogram_csv(const std::filesystem::path& path, const SpacingStatistics& stats);
/// {D_poisson, D_wd, mean_spacing, n_levels, degree}
nlohmann::json spacing_summary(const SpacingStatistics& stats);

/// t,M
void write_echo_csv(const std::filesystem::path& path, const EchoSeries& echo);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

nlohmann::json to_json(const SweepPoint& point);
nlohmann::json to_json(const ComparisonReport& report);
ComparisonReport report_from_json(const nlohmann::json& j);

/// Per-Jx panels, one row per seed, exact and Kraus columns side by side.
std::string format_table(const ComparisonReport& report);

/// report.json, report.csv and report.txt in `dir`, plus metadata.json
/// (the only file carrying a timestamp). Throws ConfigError for an empty
/// report and IoError when a file cannot be written.
void emit_report(const ComparisonReport& report, const std::filesystem::path& dir);

nlohmann::json to_json(const ChaosSuite& suite);

struct ValidationSummary {
  std::size_t files = 0;
  std::size_t rows = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Re-reads every trajectory CSV below `dir` and checks the density-matrix
/// invariants (Hermitian by construction, unit trace, nonnegative spectrum)
/// and that the purity column equals Tr(rho^2) at each sample.
ValidationSummary validate_outputs(const std::filesystem::path& dir);

}  // namespace chaoskraus
