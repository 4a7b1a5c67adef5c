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

#include "chaoskraus/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "chaoskraus/dynamics.hpp"
#include "chaoskraus/kraus.hpp"
#include "chaoskraus/linalg.hpp"
#include "chaoskraus/parallel.hpp"
#include "chaoskraus/report.hpp"

namespace chaoskraus {
namespace {

std::vector<std::string> split_list(const std::string& key, const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in list '" + key + "'");
    items.push_back(item.substr(b, e - b + 1));
  }
  if (items.empty()) throw ConfigError("list '" + key + "' is empty");
  return items;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  const long long v = parse_integer(key, value);
  if (v < 0) throw ConfigError("'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// Concatenated short + long echo grid, evaluated with one pair of
// diagonalizations and split afterwards.
void echo_windows(const ModelHamiltonians& h, const ExperimentSpec& spec, EchoSeries& short_w,
                  EchoSeries& long_w) {
  const OperatorMatrix h0{to_dense(h.bath_field_terms, kDefaultDenseCap), true};
  const OperatorMatrix v{to_dense(h.bath_exchange_terms, kDefaultDenseCap), true};
  const std::vector<double> ts = uniform_grid(spec.echo_short_t, spec.echo_samples);
  const std::vector<double> tl = uniform_grid(spec.echo_long_t, spec.echo_samples);
  std::vector<double> all = ts;
  all.insert(all.end(), tl.begin(), tl.end());
  const EchoSeries e = loschmidt_echo(h0, v, all);
  const auto mid = static_cast<std::ptrdiff_t>(ts.size());
  short_w.times = ts;
  short_w.m.assign(e.m.begin(), e.m.begin() + mid);
  short_w.warnings = e.warnings;
  long_w.times = tl;
  long_w.m.assign(e.m.begin() + mid, e.m.end());
  long_w.warnings = e.warnings;
}

void record_failure(const std::exception& e, bool& ok, std::string& msg, ExitCode& code) {
  ok = false;
  msg = e.what();
  const auto* err = dynamic_cast<const Error*>(&e);
  code = err ? err->code() : ExitCode::kNumeric;
}

ModelConfig point_config(const ExperimentSpec& spec, double jx, std::uint64_t seed) {
  ModelConfig cfg = spec.model;
  cfg.jx_max = jx;
  cfg.seed = seed;
  validate(cfg);
  return cfg;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  validate(spec.model);
  if (!(spec.t_max > 0.0) || !std::isfinite(spec.t_max)) throw ConfigError("t_max must be > 0");
  if (spec.n_samples < 2) throw ConfigError("n_samples must be >= 2");
  if (spec.m == 0) throw ConfigError("m must be >= 1");
  if (!(spec.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (spec.jx_values.empty() || spec.seeds.empty()) {
    throw ConfigError("sweep lists jx_values and seeds must be nonempty");
  }
  for (double jx : spec.jx_values) {
    if (!(jx >= 0.0) || !std::isfinite(jx)) throw ConfigError("jx_values must be finite and >= 0");
  }
  for (double jx : spec.chaos_jx_values) {
    if (!(jx >= 0.0) || !std::isfinite(jx)) {
      throw ConfigError("chaos_jx_values must be finite and >= 0");
    }
  }
  if (spec.n_levels < kMinUnfoldLevels) {
    throw ConfigError("n_levels must be >= " + std::to_string(kMinUnfoldLevels));
  }
  if (spec.unfold_degree < 3 || spec.unfold_degree > 15) {
    throw ConfigError("unfold_degree must lie in [3, 15]");
  }
  if (!(spec.echo_short_t > 0.0) || !(spec.echo_long_t > 0.0) || spec.echo_samples < 2) {
    throw ConfigError("echo windows need t > 0 and at least 2 samples");
  }
  if (!(spec.echo_floor > 0.0 && spec.echo_floor < 1.0)) {
    throw ConfigError("echo_floor must lie in (0, 1)");
  }
  if (!(spec.offdiag_window > 0.0)) throw ConfigError("offdiag_window must be > 0");
  if (spec.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(key, value)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& value) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(key, value)) {
    const long long v = parse_integer(key, item);
    if (v < 0) throw ConfigError("seeds must be nonnegative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

ExperimentSpec spec_from_key_values(const std::map<std::string, std::string>& kv) {
  ExperimentSpec spec;
  apply_model_keys(kv, spec.model);
  std::string coupling = "model";
  PolynomialCoupling poly;
  for (const auto& [key, value] : kv) {
    if (key == "n_bath" || key == "b0z" || key == "delta" || key == "lambda" || key == "jx" ||
        key == "kt" || key == "seed") {
      continue;
    } else if (key == "t_max") {
      spec.t_max = parse_double(key, value);
    } else if (key == "n_samples") {
      spec.n_samples = parse_count(key, value);
    } else if (key == "m") {
      spec.m = parse_count(key, value);
    } else if (key == "tol") {
      spec.tol = parse_double(key, value);
    } else if (key == "jx_values") {
      spec.jx_values = parse_double_list(key, value);
    } else if (key == "seeds") {
      spec.seeds = parse_seed_list(key, value);
    } else if (key == "output_dir") {
      spec.output_dir = value;
    } else if (key == "chaos_jx_values") {
      spec.chaos_jx_values = parse_double_list(key, value);
    } else if (key == "n_levels") {
      spec.n_levels = parse_count(key, value);
    } else if (key == "unfold_degree") {
      spec.unfold_degree = static_cast<int>(parse_integer(key, value));
    } else if (key == "echo_short_t") {
      spec.echo_short_t = parse_double(key, value);
    } else if (key == "echo_long_t") {
      spec.echo_long_t = parse_double(key, value);
    } else if (key == "echo_samples") {
      spec.echo_samples = parse_count(key, value);
    } else if (key == "echo_floor") {
      spec.echo_floor = parse_double(key, value);
    } else if (key == "offdiag_window") {
      spec.offdiag_window = parse_double(key, value);
    } else if (key == "coupling") {
      if (value != "model" && value != "polynomial") {
        throw ConfigError("coupling must be 'model' or 'polynomial', got '" + value + "'");
      }
      coupling = value;
    } else if (key == "coupling_c1") {
      poly.c1 = parse_double(key, value);
    } else if (key == "coupling_c2") {
      poly.c2 = parse_double(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (coupling == "polynomial") spec.polynomial_coupling = poly;
  validate(spec);
  return spec;
}

ExperimentSpec read_experiment_spec(const std::filesystem::path& path) {
  return spec_from_key_values(read_key_value_file(path));
}

nlohmann::json to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["n_bath"] = spec.model.n_bath;
  j["b0z"] = spec.model.b0z;
  j["delta"] = spec.model.delta;
  j["lambda"] = spec.model.lambda_max;
  j["kt"] = spec.model.kt;
  j["t_max"] = spec.t_max;
  j["n_samples"] = spec.n_samples;
  j["m"] = spec.m;
  j["tol"] = spec.tol;
  j["jx_values"] = spec.jx_values;
  j["seeds"] = spec.seeds;
  j["chaos_jx_values"] = spec.chaos_jx_values;
  j["n_levels"] = spec.n_levels;
  j["unfold_degree"] = spec.unfold_degree;
  j["echo_short_t"] = spec.echo_short_t;
  j["echo_long_t"] = spec.echo_long_t;
  j["echo_samples"] = spec.echo_samples;
  j["echo_floor"] = spec.echo_floor;
  j["offdiag_window"] = spec.offdiag_window;
  if (spec.polynomial_coupling) {
    j["coupling"] = "polynomial";
    j["coupling_c1"] = spec.polynomial_coupling->c1;
    j["coupling_c2"] = spec.polynomial_coupling->c2;
  } else {
    j["coupling"] = "model";
  }
  return j;
}

std::string point_tag(double jx, std::uint64_t seed) {
  std::ostringstream os;
  os << "jx" << std::setprecision(6) << jx << "_seed" << seed;
  return os.str();
}

std::size_t ComparisonReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return !p.ok; }));
}

ExitCode ComparisonReport::status() const {
  for (const auto& p : points) {
    if (!p.ok) return p.error_code;
  }
  return ExitCode::kSuccess;
}

ExitCode ChaosSuite::status() const {
  for (const auto& p : points) {
    if (!p.ok) return p.error_code;
  }
  return ExitCode::kSuccess;
}

PreparedPoint prepare_point(const ExperimentSpec& spec, double jx, std::uint64_t seed) {
  PreparedPoint p;
  const ModelConfig cfg = point_config(spec, jx, seed);
  p.params = sample_parameters(cfg);
  p.hamiltonians = assemble_hamiltonians(p.params);
  const ModelHamiltonians& h = p.hamiltonians;
  if (h.has_dense_bath() && spec.m > static_cast<std::size_t>(h.bath.data.rows())) {
    throw ConfigError("m = " + std::to_string(spec.m) + " exceeds the bath dimension");
  }
  p.spectrum = analyze_bath(h, spec.m, cfg.kt);
  p.coupling = coupling_matrix_elements(h.bath_coupling_terms, p.spectrum);
  if (spec.polynomial_coupling) {
    const Matrix& hb = h.bath.data;
    if (static_cast<std::size_t>(2 * hb.rows()) > kDefaultDenseCap) {
      throw CapacityError("polynomial coupling needs a dense total Hamiltonian");
    }
    const OperatorMatrix b{
        spec.polynomial_coupling->c1 * hb + spec.polynomial_coupling->c2 * hb * hb, true};
    p.coupling = coupling_matrix_elements(b, p.spectrum);
    attach_coupling(p.spectrum, p.coupling);
    const Matrix id_b = Matrix::Identity(hb.rows(), hb.cols());
    p.total.data = kron(h.system.data, id_b) + kron(h.system_coupling.data, b.data) +
                   kron(Matrix::Identity(2, 2), hb);
    p.total.hermitian = true;
  }
  return p;
}

Trajectory exact_trajectory(const ExperimentSpec& spec, const PreparedPoint& p) {
  const std::vector<double> times = uniform_grid(spec.t_max, spec.n_samples);
  ExactOptions eo;
  eo.propagation.tol = spec.tol;
  eo.workers = 1;
  if (spec.polynomial_coupling) {
    return exact_reduced_trajectory(p.total, p.hamiltonians.system.data, p.spectrum, plus_state(),
                                    times, eo);
  }
  return exact_reduced_trajectory(p.hamiltonians, p.spectrum, plus_state(), times, eo);
}

Trajectory kraus_trajectory(const ExperimentSpec& spec, const PreparedPoint& p) {
  const std::vector<double> times = uniform_grid(spec.t_max, spec.n_samples);
  const KrausEnsemble ensemble = build_ensemble(
      p.hamiltonians.system.data, p.hamiltonians.system_coupling.data, p.spectrum);
  return propagate_kraus(ensemble, projector(plus_state()), times);
}

SweepPoint run_sweep_point(const ExperimentSpec& spec, double jx, std::uint64_t seed,
                           bool write) {
  SweepPoint pt;
  pt.jx = jx;
  pt.seed = seed;
  pt.tag = point_tag(jx, seed);
  try {
    const PreparedPoint prep = prepare_point(spec, jx, seed);
    pt.tail_weight = prep.spectrum.weights[prep.spectrum.weights.size() - 1];
    pt.degenerate_pairs = prep.spectrum.degenerate_pairs;
    for (const auto& w : prep.spectrum.warnings) pt.warnings.push_back(w);
    const Trajectory exact = exact_trajectory(spec, prep);
    const Trajectory kraus = kraus_trajectory(spec, prep);
    const auto& spectrum = prep.spectrum;
    const auto& h = prep.hamiltonians;
    const auto& coupling = prep.coupling;
    const auto& params = prep.params;
    const std::vector<double>& times = exact.times;

    const std::size_t n = times.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double dp = std::abs(exact.purity[i] - kraus.purity[i]);
      const double df = std::abs(exact.fidelity[i] - kraus.fidelity[i]);
      pt.mean_dp += dp;
      pt.mean_df += df;
      pt.max_dp = std::max(pt.max_dp, dp);
      pt.max_df = std::max(pt.max_df, df);
      pt.max_rho_deviation =
          std::max(pt.max_rho_deviation, (exact.rho[i] - kraus.rho[i]).cwiseAbs().maxCoeff());
    }
    pt.mean_dp /= static_cast<double>(n);
    pt.mean_df /= static_cast<double>(n);
    pt.min_p_exact = min_of(exact.purity);
    pt.min_p_kraus = min_of(kraus.purity);
    pt.min_f_exact = min_of(exact.fidelity);
    pt.min_f_kraus = min_of(kraus.fidelity);
    const auto ratio = [](double min_f, double min_p) {
      const double dp = 1.0 - min_p;
      return dp > 0.0 ? (1.0 - min_f) / dp : std::numeric_limits<double>::infinity();
    };
    pt.error_ratio_exact = ratio(pt.min_f_exact, pt.min_p_exact);
    pt.error_ratio_kraus = ratio(pt.min_f_kraus, pt.min_p_kraus);

    if (spec.m >= 2) pt.offdiag = offdiag_suppression(coupling, spec.offdiag_window);

    // Chaos indicators are descriptive here; a failure is a warning, not a
    // failed comparison.
    SpacingStatistics spacing;
    bool have_spacing = false;
    try {
      const std::size_t levels =
          std::min(spec.n_levels, static_cast<std::size_t>(spectrum.all_energies.size()));
      spacing = level_statistics(spectrum.all_energies, levels, spec.unfold_degree, true);
      if (spacing.unfolding != "least-squares") {
        pt.warnings.push_back("level statistics: unconstrained fit not monotone; used the "
                              "monotone fit");
      }
      pt.d_poisson = spacing.d_poisson;
      pt.d_wd = spacing.d_wd;
      pt.mean_spacing = spacing.mean_spacing;
      have_spacing = true;
    } catch (const Error& e) {
      pt.d_poisson = pt.d_wd = pt.mean_spacing = std::numeric_limits<double>::quiet_NaN();
      pt.warnings.push_back(std::string("level statistics: ") + e.what());
    }
    EchoSeries echo_short, echo_long;
    echo_windows(h, spec, echo_short, echo_long);
    pt.echo_fit = fit_echo_decay(echo_short, spec.echo_floor);
    if (!pt.echo_fit.ok) pt.warnings.push_back("echo decay fit has fewer than 3 points");
    for (const auto& w : echo_short.warnings) pt.warnings.push_back(w);

    if (write) {
      const auto dir = spec.output_dir / "points" / pt.tag;
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
      write_json(dir / "parameters.json", to_json(params));
      write_spectrum_csv(dir / "spectrum.csv", spectrum);
      write_coupling_json(dir / "coupling.json", coupling);
      write_trajectory_csv(dir / "exact.csv", exact);
      write_trajectory_csv(dir / "kraus.csv", kraus);
      if (have_spacing) {
        write_histogram_csv(dir / "histogram.csv", spacing);
        write_json(dir / "spacing.json", spacing_summary(spacing));
      }
      write_echo_csv(dir / "echo_short.csv", echo_short);
    }
    pt.ok = true;
  } catch (const std::exception& e) {
    record_failure(e, pt.ok, pt.error, pt.error_code);
    pt.error = pt.tag + ": " + pt.error;
  }
  return pt;
}

ComparisonReport run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  ComparisonReport report;
  report.spec = spec;
  for (double jx : spec.jx_values) {
    for (std::uint64_t seed : spec.seeds) {
      SweepPoint p;
      p.jx = jx;
      p.seed = seed;
      report.points.push_back(p);
    }
  }
  const std::size_t workers = spec.workers ? spec.workers : worker_count();
  parallel_for(
      report.points.size(),
      [&](std::size_t i) {
        report.points[i] = run_sweep_point(spec, report.points[i].jx, report.points[i].seed);
      },
      workers);
  emit_report(report, spec.output_dir);
  return report;
}

ChaosPoint chaos_point(const ExperimentSpec& spec, double jx, std::uint64_t seed) {
  ChaosPoint cp;
  cp.jx = jx;
  cp.seed = seed;
  cp.tag = point_tag(jx, seed);
  try {
    const ModelConfig cfg = point_config(spec, jx, seed);
    const ModelHamiltonians h = assemble_hamiltonians(sample_parameters(cfg));
    if (!h.has_dense_bath()) throw CapacityError("level statistics need the dense bath spectrum");
    const BathSpectrum full = diagonalize_bath(h.bath, 1);
    const std::size_t levels =
        std::min(spec.n_levels, static_cast<std::size_t>(full.all_energies.size()));
    cp.spacing = level_statistics(full.all_energies, levels, spec.unfold_degree, true);
    echo_windows(h, spec, cp.echo_short, cp.echo_long);
    cp.fit = fit_echo_decay(cp.echo_short, spec.echo_floor);
    cp.ok = true;
  } catch (const std::exception& e) {
    record_failure(e, cp.ok, cp.error, cp.error_code);
    cp.error = cp.tag + ": " + cp.error;
  }
  return cp;
}

ChaosSuite run_chaos_suite(const ExperimentSpec& spec, bool write) {
  validate(spec);
  if (spec.chaos_jx_values.empty()) throw ConfigError("chaos_jx_values must be nonempty");
  ChaosSuite suite;
  for (double jx : spec.chaos_jx_values) {
    for (std::uint64_t seed : spec.seeds) {
      ChaosPoint p;
      p.jx = jx;
      p.seed = seed;
      suite.points.push_back(p);
    }
  }
  const std::size_t workers = spec.workers ? spec.workers : worker_count();
  parallel_for(
      suite.points.size(),
      [&](std::size_t i) {
        suite.points[i] = chaos_point(spec, suite.points[i].jx, suite.points[i].seed);
      },
      workers);
  if (write) {
    const auto root = spec.output_dir / "chaos";
    for (const auto& p : suite.points) {
      if (!p.ok) continue;
      const auto dir = root / p.tag;
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
      write_histogram_csv(dir / "histogram.csv", p.spacing);
      write_json(dir / "spacing.json", spacing_summary(p.spacing));
      write_echo_csv(dir / "echo_short.csv", p.echo_short);
      write_echo_csv(dir / "echo_long.csv", p.echo_long);
    }
    write_json(root / "summary.json", to_json(suite));
  }
  return suite;
}

}  // namespace chaoskraus
