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

#include "chaoskraus/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "chaoskraus/errors.hpp"
#include "chaoskraus/linalg.hpp"
#include "chaoskraus/parallel.hpp"

namespace chaoskraus {
namespace {

constexpr const char* kTrajectoryHeader = "t,re_rho00,re_rho01,im_rho01,re_rho11,purity,fidelity";
constexpr const char* kVersion = "0.1.0";

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

// JSON has no NaN or infinity; they are stored as null and read back as NaN.
double number_or_nan(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.at(key).get<double>();
}

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

std::string fixed(double x, int precision, int width) {
  std::ostringstream os;
  if (std::isfinite(x)) {
    os << std::fixed << std::setprecision(precision) << std::setw(width) << x;
  } else {
    os << std::setw(width) << (std::isnan(x) ? "n/a" : "inf");
  }
  return os.str();
}

std::string sci(double x, int width) {
  std::ostringstream os;
  if (std::isfinite(x)) {
    os << std::scientific << std::setprecision(3) << std::setw(width) << x;
  } else {
    os << std::setw(width) << (std::isnan(x) ? "n/a" : "inf");
  }
  return os.str();
}

ExperimentSpec spec_from_report_json(const nlohmann::json& j) {
  ExperimentSpec s;
  s.model.n_bath = j.at("n_bath").get<int>();
  s.model.b0z = j.at("b0z").get<double>();
  s.model.delta = j.at("delta").get<double>();
  s.model.lambda_max = j.at("lambda").get<double>();
  s.model.kt = j.at("kt").get<double>();
  s.t_max = j.at("t_max").get<double>();
  s.n_samples = j.at("n_samples").get<std::size_t>();
  s.m = j.at("m").get<std::size_t>();
  s.tol = j.at("tol").get<double>();
  s.jx_values = j.at("jx_values").get<std::vector<double>>();
  s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  s.chaos_jx_values = j.at("chaos_jx_values").get<std::vector<double>>();
  s.n_levels = j.at("n_levels").get<std::size_t>();
  s.unfold_degree = j.at("unfold_degree").get<int>();
  s.echo_short_t = j.at("echo_short_t").get<double>();
  s.echo_long_t = j.at("echo_long_t").get<double>();
  s.echo_samples = j.at("echo_samples").get<std::size_t>();
  s.echo_floor = j.at("echo_floor").get<double>();
  s.offdiag_window = j.at("offdiag_window").get<double>();
  if (j.value("coupling", std::string("model")) == "polynomial") {
    s.polynomial_coupling = PolynomialCoupling{j.at("coupling_c1").get<double>(),
                                               j.at("coupling_c2").get<double>()};
  }
  return s;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  if (tr.rho.size() != tr.times.size() || tr.purity.size() != tr.times.size() ||
      tr.fidelity.size() != tr.times.size()) {
    throw ShapeError("trajectory series lengths differ");
  }
  auto out = open_for_write(path);
  out << kTrajectoryHeader << '\n';
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto& r = tr.rho[i];
    if (r.rows() != 2 || r.cols() != 2) throw ShapeError("trajectory CSV holds qubit states only");
    out << format_number(tr.times[i]) << ',' << format_number(r(0, 0).real()) << ','
        << format_number(r(0, 1).real()) << ',' << format_number(r(0, 1).imag()) << ','
        << format_number(r(1, 1).real()) << ',' << format_number(tr.purity[i]) << ','
        << format_number(tr.fidelity[i]) << '\n';
  }
  finish(out, path);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw ValidationError(path.string() + ": not a trajectory CSV");
  }
  Trajectory tr;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ":" + std::to_string(row) + ": bad number '" +
                              cell + "'");
      }
    }
    if (v.size() != 7) {
      throw ValidationError(path.string() + ":" + std::to_string(row) + ": expected 7 columns");
    }
    DensityMatrix r(2, 2);
    r(0, 0) = v[1];
    r(0, 1) = Complex(v[2], v[3]);
    r(1, 0) = Complex(v[2], -v[3]);
    r(1, 1) = v[4];
    tr.times.push_back(v[0]);
    tr.rho.push_back(r);
    tr.purity.push_back(v[5]);
    tr.fidelity.push_back(v[6]);
  }
  return tr;
}

void write_spectrum_csv(const std::filesystem::path& path, const BathSpectrum& s) {
  auto out = open_for_write(path);
  out << "n,E_n,p_n,B_nn\n";
  for (Eigen::Index n = 0; n < s.energies.size(); ++n) {
    out << n << ',' << format_number(s.energies[n]) << ','
        << format_number(n < s.weights.size() ? s.weights[n] : std::nan("")) << ','
        << format_number(n < s.bdiag.size() ? s.bdiag[n] : std::nan("")) << '\n';
  }
  finish(out, path);
}

void write_coupling_json(const std::filesystem::path& path, const CouplingMatrix& c) {
  nlohmann::json j;
  j["energies"] = std::vector<double>(c.energies.data(), c.energies.data() + c.energies.size());
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < c.elements.rows(); ++r) {
    std::vector<double> rr, ii;
    for (Eigen::Index k = 0; k < c.elements.cols(); ++k) {
      rr.push_back(c.elements(r, k).real());
      ii.push_back(c.elements(r, k).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  j["re"] = re;
  j["im"] = im;
  write_json(path, j);
}

void write_histogram_csv(const std::filesystem::path& path, const SpacingStatistics& s) {
  auto out = open_for_write(path);
  out << "bin_center,density\n";
  for (std::size_t b = 0; b < s.densities.size(); ++b) {
    out << format_number(0.5 * (s.bin_edges[b] + s.bin_edges[b + 1])) << ','
        << format_number(s.densities[b]) << '\n';
  }
  finish(out, path);
}

nlohmann::json spacing_summary(const SpacingStatistics& s) {
  return {{"D_poisson", s.d_poisson},
          {"D_wd", s.d_wd},
          {"mean_spacing", s.mean_spacing},
          {"n_levels", s.raw_energies.size()},
          {"degree", s.degree},
          {"unfolding", s.unfolding}};
}

void write_echo_csv(const std::filesystem::path& path, const EchoSeries& echo) {
  auto out = open_for_write(path);
  out << "t,M\n";
  for (std::size_t i = 0; i < echo.times.size(); ++i) {
    out << format_number(echo.times[i]) << ',' << format_number(echo.m[i]) << '\n';
  }
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const SweepPoint& p) {
  nlohmann::json j;
  j["jx"] = p.jx;
  j["seed"] = p.seed;
  j["tag"] = p.tag;
  j["ok"] = p.ok;
  if (!p.ok) {
    j["error"] = p.error;
    j["exit_code"] = static_cast<int>(p.error_code);
    return j;
  }
  j["mean_dP"] = p.mean_dp;
  j["mean_dF"] = p.mean_df;
  j["max_dP"] = p.max_dp;
  j["max_dF"] = p.max_df;
  j["min_P_exact"] = p.min_p_exact;
  j["min_P_kraus"] = p.min_p_kraus;
  j["min_F_exact"] = p.min_f_exact;
  j["min_F_kraus"] = p.min_f_kraus;
  j["max_rho_deviation"] = p.max_rho_deviation;
  j["error_ratio_exact"] = finite_or_null(p.error_ratio_exact);
  j["error_ratio_kraus"] = finite_or_null(p.error_ratio_kraus);
  j["echo_rate"] = finite_or_null(p.echo_fit.rate);
  j["echo_fit_points"] = p.echo_fit.points;
  j["echo_fit_ok"] = p.echo_fit.ok;
  j["D_poisson"] = finite_or_null(p.d_poisson);
  j["D_wd"] = finite_or_null(p.d_wd);
  j["mean_spacing"] = finite_or_null(p.mean_spacing);
  j["offdiag_ratio"] = finite_or_null(p.offdiag.ratio);
  j["offdiag_pairs"] = p.offdiag.pairs_in_window;
  j["tail_weight"] = p.tail_weight;
  j["degenerate_pairs"] = p.degenerate_pairs;
  j["warnings"] = p.warnings;
  return j;
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json j;
  j["spec"] = to_json(r.spec);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) pts.push_back(to_json(p));
  j["points"] = pts;
  j["failures"] = r.failures();
  return j;
}

ComparisonReport report_from_json(const nlohmann::json& j) {
  try {
    ComparisonReport r;
    r.spec = spec_from_report_json(j.at("spec"));
    for (const auto& pj : j.at("points")) {
      SweepPoint p;
      p.jx = pj.at("jx").get<double>();
      p.seed = pj.at("seed").get<std::uint64_t>();
      p.tag = pj.at("tag").get<std::string>();
      p.ok = pj.at("ok").get<bool>();
      if (!p.ok) {
        p.error = pj.value("error", std::string());
        p.error_code = static_cast<ExitCode>(pj.value("exit_code", 2));
        r.points.push_back(p);
        continue;
      }
      p.mean_dp = number_or_nan(pj, "mean_dP");
      p.mean_df = number_or_nan(pj, "mean_dF");
      p.max_dp = number_or_nan(pj, "max_dP");
      p.max_df = number_or_nan(pj, "max_dF");
      p.min_p_exact = number_or_nan(pj, "min_P_exact");
      p.min_p_kraus = number_or_nan(pj, "min_P_kraus");
      p.min_f_exact = number_or_nan(pj, "min_F_exact");
      p.min_f_kraus = number_or_nan(pj, "min_F_kraus");
      p.max_rho_deviation = number_or_nan(pj, "max_rho_deviation");
      p.error_ratio_exact = number_or_nan(pj, "error_ratio_exact");
      p.error_ratio_kraus = number_or_nan(pj, "error_ratio_kraus");
      p.echo_fit.rate = number_or_nan(pj, "echo_rate");
      p.echo_fit.points = pj.value("echo_fit_points", std::size_t{0});
      p.echo_fit.ok = pj.value("echo_fit_ok", false);
      p.d_poisson = number_or_nan(pj, "D_poisson");
      p.d_wd = number_or_nan(pj, "D_wd");
      p.mean_spacing = number_or_nan(pj, "mean_spacing");
      p.offdiag.ratio = number_or_nan(pj, "offdiag_ratio");
      p.offdiag.pairs_in_window = pj.value("offdiag_pairs", std::size_t{0});
      p.tail_weight = number_or_nan(pj, "tail_weight");
      p.degenerate_pairs = pj.value("degenerate_pairs", std::size_t{0});
      p.warnings = pj.value("warnings", std::vector<std::string>{});
      r.points.push_back(p);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string format_table(const ComparisonReport& r) {
  std::ostringstream os;
  std::vector<double> jxs;
  for (const auto& p : r.points) {
    if (std::find(jxs.begin(), jxs.end(), p.jx) == jxs.end()) jxs.push_back(p.jx);
  }
  char panel = 'a';
  for (double jx : jxs) {
    os << "(" << panel++ << ") Jx = " << jx << "\n";
    os << "  seed |   min P exact   min P kraus   <|dP|>    |"
          "   min F exact   min F kraus   <|dF|>    | (1-minF)/(1-minP)\n";
    for (const auto& p : r.points) {
      if (p.jx != jx) continue;
      os << std::setw(6) << p.seed << " |";
      if (!p.ok) {
        os << " FAILED: " << p.error << "\n";
        continue;
      }
      os << fixed(p.min_p_exact, 6, 14) << fixed(p.min_p_kraus, 6, 14) << sci(p.mean_dp, 11)
         << " |" << fixed(p.min_f_exact, 6, 14) << fixed(p.min_f_kraus, 6, 14)
         << sci(p.mean_df, 11) << " |" << fixed(p.error_ratio_exact, 3, 9) << " /"
         << fixed(p.error_ratio_kraus, 3, 8) << "\n";
    }
    os << "\n";
  }
  return os.str();
}

void emit_report(const ComparisonReport& r, const std::filesystem::path& dir) {
  if (r.points.empty()) throw ConfigError("empty sweep: nothing to report");
  write_json(dir / "report.json", to_json(r));

  auto csv = open_for_write(dir / "report.csv");
  csv << "jx,seed,ok,mean_dP,mean_dF,max_dP,max_dF,min_P_exact,min_P_kraus,min_F_exact,"
         "min_F_kraus,max_rho_deviation,error_ratio_exact,error_ratio_kraus,echo_rate,"
         "D_poisson,D_wd,offdiag_ratio,tail_weight\n";
  for (const auto& p : r.points) {
    csv << format_number(p.jx) << ',' << p.seed << ',' << (p.ok ? 1 : 0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto v = [&](double x) { return format_number(p.ok ? x : nan); };
    csv << ',' << v(p.mean_dp) << ',' << v(p.mean_df) << ',' << v(p.max_dp) << ','
        << v(p.max_df) << ',' << v(p.min_p_exact) << ',' << v(p.min_p_kraus) << ','
        << v(p.min_f_exact) << ',' << v(p.min_f_kraus) << ',' << v(p.max_rho_deviation) << ','
        << v(p.error_ratio_exact) << ',' << v(p.error_ratio_kraus) << ','
        << v(p.echo_fit.rate) << ',' << v(p.d_poisson) << ',' << v(p.d_wd) << ','
        << v(p.offdiag.ratio) << ',' << v(p.tail_weight) << '\n';
  }
  finish(csv, dir / "report.csv");

  auto txt = open_for_write(dir / "report.txt");
  txt << format_table(r);
  finish(txt, dir / "report.txt");

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  write_json(dir / "metadata.json", {{"created", stamp.str()},
                                     {"version", kVersion},
                                     {"workers", worker_count()}});
}

nlohmann::json to_json(const ChaosSuite& suite) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : suite.points) {
    nlohmann::json j{{"jx", p.jx}, {"seed", p.seed}, {"tag", p.tag}, {"ok", p.ok}};
    if (!p.ok) {
      j["error"] = p.error;
      j["exit_code"] = static_cast<int>(p.error_code);
    } else {
      j["spacing"] = spacing_summary(p.spacing);
      j["echo_rate"] = finite_or_null(p.fit.rate);
      j["echo_fit_points"] = p.fit.points;
      j["echo_fit_ok"] = p.fit.ok;
      j["echo_warnings"] = p.echo_short.warnings;
    }
    pts.push_back(j);
  }
  return {{"points", pts}};
}

ValidationSummary validate_outputs(const std::filesystem::path& dir) {
  ValidationSummary v;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    v.failures.push_back(dir.string() + ": not a directory");
    return v;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    std::ifstream in(e.path());
    std::string header;
    std::getline(in, header);
    if (header == kTrajectoryHeader) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    ++v.files;
    Trajectory tr;
    try {
      tr = read_trajectory_csv(f);
    } catch (const Error& e) {
      v.failures.push_back(e.what());
      continue;
    }
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      ++v.rows;
      const DensityCheck c = check_density(tr.rho[i]);
      const double p = (tr.rho[i] * tr.rho[i]).trace().real();
      std::ostringstream os;
      os << f.string() << " t=" << tr.times[i] << ": ";
      if (!c.ok) {
        os << "trace error " << c.trace_error << ", min eigenvalue " << c.min_eigenvalue;
        v.failures.push_back(os.str());
      } else if (std::abs(p - tr.purity[i]) > 1e-10) {
        os << "purity column " << tr.purity[i] << " != Tr(rho^2) " << p;
        v.failures.push_back(os.str());
      } else if (tr.fidelity[i] < -1e-10 || tr.fidelity[i] > 1.0 + 1e-10) {
        os << "fidelity " << tr.fidelity[i] << " outside [0, 1]";
        v.failures.push_back(os.str());
      }
    }
  }
  return v;
}

}  // namespace chaoskraus
