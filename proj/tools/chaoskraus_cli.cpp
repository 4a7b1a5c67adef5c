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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaoskraus/errors.hpp"
#include "chaoskraus/harness.hpp"
#include "chaoskraus/report.hpp"

namespace ck = chaoskraus;
namespace fs = std::filesystem;

namespace {

// Settings shared by every subcommand: an optional spec file plus
// key=value overrides applied on top of it.
struct SpecArgs {
  std::string spec_file;
  std::vector<std::string> overrides;
  std::string out;
};

void add_spec_options(CLI::App* cmd, SpecArgs& a, bool with_out = true) {
  cmd->add_option("-s,--spec", a.spec_file, "key = value spec file")->check(CLI::ExistingFile);
  cmd->add_option("--set", a.overrides, "override a spec key (key=value), repeatable");
  if (with_out) cmd->add_option("-o,--out", a.out, "output directory (default: output_dir)");
}

ck::ExperimentSpec load_spec(const SpecArgs& a) {
  std::map<std::string, std::string> kv;
  if (!a.spec_file.empty()) kv = ck::read_key_value_file(a.spec_file);
  for (const auto& o : a.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ck::ConfigError("--set expects key=value: " + o);
    kv[o.substr(0, eq)] = o.substr(eq + 1);
  }
  ck::ExperimentSpec spec = ck::spec_from_key_values(kv);
  if (!a.out.empty()) spec.output_dir = a.out;
  return spec;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int report_validation(const fs::path& dir) {
  const ck::ValidationSummary v = ck::validate_outputs(dir);
  std::cout << "validated " << v.rows << " samples in " << v.files << " trajectory files\n";
  for (const auto& f : v.failures) std::cerr << "invalid: " << f << '\n';
  return v.ok() ? 0 : static_cast<int>(ck::ExitCode::kNumeric);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chaotic Kraus decomposition vs exact dynamics for a qubit in a spin bath"};
  app.require_subcommand(1);

  SpecArgs sample_a, spectrum_a, exact_a, kraus_a, compare_a, chaos_a, echo_a, run_a;
  std::string report_dir;

  auto* sample = app.add_subcommand("sample", "draw model parameters (JSON on stdout)");
  add_spec_options(sample, sample_a, false);
  auto* spectrum = app.add_subcommand("spectrum", "bath eigenstates, weights and couplings");
  add_spec_options(spectrum, spectrum_a);
  auto* exact = app.add_subcommand("evolve-exact", "exact reduced trajectory");
  add_spec_options(exact, exact_a);
  auto* kraus = app.add_subcommand("evolve-kraus", "chaotic Kraus trajectory");
  add_spec_options(kraus, kraus_a);
  auto* compare = app.add_subcommand("compare", "exact vs Kraus for one (jx, seed)");
  add_spec_options(compare, compare_a);
  auto* chaos = app.add_subcommand("chaos-stats", "level-spacing statistics over the sweep");
  add_spec_options(chaos, chaos_a);
  auto* echo = app.add_subcommand("echo", "Loschmidt echo over the sweep");
  add_spec_options(echo, echo_a);
  auto* report = app.add_subcommand("report", "re-render and validate a finished run");
  report->add_option("dir", report_dir, "run output directory")->required();
  auto* run = app.add_subcommand("run", "full sweep: comparison, chaos suite, report");
  add_spec_options(run, run_a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ck::ExitCode::kConfig);
  }

  try {
    if (*sample) {
      const auto spec = load_spec(sample_a);
      print_json(ck::to_json(ck::sample_parameters(spec.model)));
    } else if (*spectrum) {
      const auto spec = load_spec(spectrum_a);
      const auto p = ck::prepare_point(spec, spec.model.jx_max, spec.model.seed);
      ck::write_spectrum_csv(spec.output_dir / "spectrum.csv", p.spectrum);
      ck::write_coupling_json(spec.output_dir / "coupling.json", p.coupling);
      for (const auto& w : p.spectrum.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "wrote " << (spec.output_dir / "spectrum.csv").string() << '\n';
    } else if (*exact || *kraus) {
      const bool is_exact = static_cast<bool>(*exact);
      const auto spec = load_spec(is_exact ? exact_a : kraus_a);
      const auto p = ck::prepare_point(spec, spec.model.jx_max, spec.model.seed);
      const auto tr = is_exact ? ck::exact_trajectory(spec, p) : ck::kraus_trajectory(spec, p);
      const auto path = spec.output_dir / (is_exact ? "exact.csv" : "kraus.csv");
      ck::write_trajectory_csv(path, tr);
      std::cout << "wrote " << path.string() << '\n';
    } else if (*compare) {
      const auto spec = load_spec(compare_a);
      const auto pt = ck::run_sweep_point(spec, spec.model.jx_max, spec.model.seed);
      print_json(ck::to_json(pt));
      if (!pt.ok) return static_cast<int>(pt.error_code);
    } else if (*chaos || *echo) {
      const auto spec = load_spec(*chaos ? chaos_a : echo_a);
      const auto suite = ck::run_chaos_suite(spec);
      for (const auto& p : suite.points) {
        if (!p.ok) {
          std::cerr << "failed: " << p.error << '\n';
          continue;
        }
        if (*chaos) {
          std::cout << p.tag << "  D_poisson " << p.spacing.d_poisson << "  D_wd "
                    << p.spacing.d_wd << "  -> "
                    << (p.spacing.d_wd < p.spacing.d_poisson ? "Wigner-Dyson" : "Poisson")
                    << '\n';
        } else {
          std::cout << p.tag << "  decay rate " << p.fit.rate << " (" << p.fit.points
                    << " points)\n";
        }
      }
      return static_cast<int>(suite.status());
    } else if (*report) {
      const auto r = ck::report_from_json(ck::read_json(fs::path(report_dir) / "report.json"));
      std::cout << ck::format_table(r);
      const int rc = report_validation(report_dir);
      return rc ? rc : static_cast<int>(r.status());
    } else if (*run) {
      const auto spec = load_spec(run_a);
      const auto r = ck::run_experiment(spec);
      const auto suite = ck::run_chaos_suite(spec);
      std::cout << ck::format_table(r);
      for (const auto& p : r.points) {
        if (!p.ok) std::cerr << "failed: " << p.error << '\n';
      }
      for (const auto& p : suite.points) {
        if (!p.ok) std::cerr << "failed: " << p.error << '\n';
      }
      const int rc = report_validation(spec.output_dir);
      if (rc) return rc;
      if (r.status() != ck::ExitCode::kSuccess) return static_cast<int>(r.status());
      return static_cast<int>(suite.status());
    }
  } catch (const ck::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ck::ExitCode::kNumeric);
  }
  return 0;
}
