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

#include "chaoskraus/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "chaoskraus/errors.hpp"
#include "chaoskraus/rng.hpp"

namespace chaoskraus {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

PauliTerm one_body(double c, int site, PauliAxis axis) { return {c, {{site, axis}}}; }

PauliTerm two_body(double c, int a, PauliAxis axis_a, int b, PauliAxis axis_b) {
  return {c, {{a, axis_a}, {b, axis_b}}};
}

// Appends the bath terms with every site shifted by `offset`.
void add_bath_terms(const ModelParameters& p, int offset, PauliSum& fields, PauliSum& exchange) {
  const int n = p.n_bath();
  for (int i = 0; i < n; ++i) {
    fields.terms.push_back(one_body(-0.5 * p.bx[i], i + offset, PauliAxis::kX));
    fields.terms.push_back(one_body(-0.5 * p.bz[i], i + offset, PauliAxis::kZ));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      exchange.terms.push_back(
          two_body(p.coupling(i, j), i + offset, PauliAxis::kX, j + offset, PauliAxis::kX));
    }
  }
}

OperatorMatrix hermitian_dense(const PauliSum& sum, std::size_t cap) {
  return {to_dense(sum, cap), true};
}

}  // namespace

void validate(const ModelConfig& c) {
  if (c.n_bath < 1) throw ConfigError("n_bath must be >= 1, got " + std::to_string(c.n_bath));
  if (!(c.delta >= 0.0)) throw ConfigError("delta must be >= 0");
  if (!(c.lambda_max >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(c.jx_max >= 0.0)) throw ConfigError("jx must be >= 0");
  if (!(c.kt >= 0.0)) throw ConfigError("kt must be >= 0");
  if (!std::isfinite(c.b0z)) throw ConfigError("b0z must be finite");
}

std::size_t pair_index(int i, int j, int n) {
  const auto ii = static_cast<std::size_t>(i);
  return ii * static_cast<std::size_t>(n) - ii * (ii + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

double ModelParameters::coupling(int i, int j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  return jxx[pair_index(i, j, n_bath())];
}

ModelParameters sample_parameters(const ModelConfig& config, std::uint64_t seed) {
  validate(config);
  ModelParameters p;
  p.config = config;
  p.config.seed = seed;
  const int n = config.n_bath;
  UniformStream rng(seed);
  const double lo = config.b0z - 0.5 * config.delta;
  const double hi = config.b0z + 0.5 * config.delta;
  p.bz.resize(n);
  p.bx.resize(n);
  p.lambda.resize(n);
  for (auto& v : p.bz) v = rng.uniform(lo, hi);
  for (auto& v : p.bx) v = rng.uniform(lo, hi);
  for (auto& v : p.lambda) v = rng.uniform(-config.lambda_max, config.lambda_max);
  p.jxx.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (auto& v : p.jxx) v = rng.uniform(-config.jx_max, config.jx_max);
  // -0.0 from zero-width intervals centred on zero; keep the arrays canonical.
  for (auto* arr : {&p.lambda, &p.jxx}) {
    for (auto& v : *arr) v += 0.0;
  }
  return p;
}

nlohmann::json to_json(const ModelParameters& p) {
  const auto& c = p.config;
  return {
      {"n_bath", c.n_bath}, {"b0z", c.b0z},   {"delta", c.delta},
      {"lambda", c.lambda_max}, {"jx", c.jx_max}, {"kt", c.kt},
      {"seed", c.seed},     {"draw_order", {"bz", "bx", "lambda", "jxx"}},
      {"bz", p.bz},         {"bx", p.bx},     {"lambda_i", p.lambda},
      {"jxx", p.jxx},
  };
}

ModelParameters parameters_from_json(const nlohmann::json& j) {
  ModelParameters p;
  try {
    p.config.n_bath = j.at("n_bath").get<int>();
    p.config.b0z = j.at("b0z").get<double>();
    p.config.delta = j.at("delta").get<double>();
    p.config.lambda_max = j.at("lambda").get<double>();
    p.config.jx_max = j.at("jx").get<double>();
    p.config.kt = j.at("kt").get<double>();
    p.config.seed = j.at("seed").get<std::uint64_t>();
    p.bz = j.at("bz").get<std::vector<double>>();
    p.bx = j.at("bx").get<std::vector<double>>();
    p.lambda = j.at("lambda_i").get<std::vector<double>>();
    p.jxx = j.at("jxx").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("parameter document: ") + e.what());
  }
  validate(p.config);
  const auto n = static_cast<std::size_t>(p.config.n_bath);
  if (p.bz.size() != n || p.bx.size() != n || p.lambda.size() != n ||
      p.jxx.size() != n * (n - 1) / 2) {
    throw ConfigError("parameter document: array lengths inconsistent with n_bath");
  }
  return p;
}

OperatorMatrix ModelHamiltonians::total_dense(std::size_t dim_cap) const {
  return hermitian_dense(total_terms, dim_cap);
}

ModelHamiltonians assemble_hamiltonians(const ModelParameters& p, const AssemblyOptions& options) {
  const int n = p.n_bath();
  if (n + 1 > options.max_total_qubits) {
    throw CapacityError("model needs " + std::to_string(n + 1) + " qubits, cap is " +
                        std::to_string(options.max_total_qubits));
  }
  if (p.bz.size() != static_cast<std::size_t>(n) || p.bx.size() != p.bz.size() ||
      p.lambda.size() != p.bz.size() ||
      p.jxx.size() != static_cast<std::size_t>(n) * (n - 1) / 2) {
    throw ShapeError("model parameters: array lengths inconsistent with n_bath");
  }

  ModelHamiltonians h;
  h.n_bath = n;

  Matrix sz(2, 2), sx(2, 2);
  sz << 1.0, 0.0, 0.0, -1.0;
  sx << 0.0, 1.0, 1.0, 0.0;
  h.system = {-0.5 * p.config.b0z * sz, true};
  h.system_coupling = {sx, true};

  h.bath_coupling_terms.n_sites = n;
  for (int i = 0; i < n; ++i) {
    h.bath_coupling_terms.terms.push_back(one_body(p.lambda[i], i, PauliAxis::kX));
  }
  h.bath_field_terms.n_sites = n;
  h.bath_exchange_terms.n_sites = n;
  add_bath_terms(p, 0, h.bath_field_terms, h.bath_exchange_terms);
  h.bath_terms.n_sites = n;
  h.bath_terms.terms = h.bath_field_terms.terms;
  h.bath_terms.terms.insert(h.bath_terms.terms.end(), h.bath_exchange_terms.terms.begin(),
                            h.bath_exchange_terms.terms.end());

  PauliSum& total = h.total_terms;
  total.n_sites = n + 1;
  total.terms.push_back(one_body(-0.5 * p.config.b0z, 0, PauliAxis::kZ));
  for (int i = 0; i < n; ++i) {
    total.terms.push_back(two_body(p.lambda[i], 0, PauliAxis::kX, i + 1, PauliAxis::kX));
  }
  PauliSum fields{n + 1, {}}, exchange{n + 1, {}};
  add_bath_terms(p, 1, fields, exchange);
  total.terms.insert(total.terms.end(), fields.terms.begin(), fields.terms.end());
  total.terms.insert(total.terms.end(), exchange.terms.begin(), exchange.terms.end());
  validate(total);

  const std::size_t bath_dim = std::size_t{1} << n;
  if (bath_dim <= options.dense_dim_cap) {
    h.bath_coupling = hermitian_dense(h.bath_coupling_terms, options.dense_dim_cap);
    h.bath = hermitian_dense(h.bath_terms, options.dense_dim_cap);
  }
  return h;
}

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (kv.count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    kv.emplace(std::move(key), std::move(value));
  }
  return kv;
}

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_value_text(buf.str());
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': not a finite number: '" + value + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError("key '" + key + "': not an integer: '" + value + "'");
  }
  return v;
}

void apply_model_keys(const std::map<std::string, std::string>& kv, ModelConfig& c) {
  for (const auto& [key, value] : kv) {
    if (key == "n_bath") {
      c.n_bath = static_cast<int>(parse_integer(key, value));
    } else if (key == "b0z") {
      c.b0z = parse_double(key, value);
    } else if (key == "delta") {
      c.delta = parse_double(key, value);
    } else if (key == "lambda") {
      c.lambda_max = parse_double(key, value);
    } else if (key == "jx") {
      c.jx_max = parse_double(key, value);
    } else if (key == "kt") {
      c.kt = parse_double(key, value);
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    }
  }
  validate(c);
}

}  // namespace chaoskraus
