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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chaoskraus/pauli.hpp"
#include "chaoskraus/types.hpp"

namespace chaoskraus {

/// Largest dense matrix dimension built by default (2^12).
inline constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 12;

/// Defining constants of the detector-qubit + flawed-register model.
/// Energies in units of epsilon; defaults reproduce the reference regime.
struct ModelConfig {
  int n_bath = 10;
  double b0z = 1.0;
  double delta = 0.4;
  double lambda_max = 0.05;
  double jx_max = 2.0;
  double kt = 0.25;
  std::uint64_t seed = 1;
};

/// Throws ConfigError when n_bath < 1 or any width/temperature is negative.
void validate(const ModelConfig& config);

/// Sampled couplings. Bath qubits are indexed 0..n_bath-1 here; they occupy
/// sites 1..n_bath of the total register.
struct ModelParameters {
  ModelConfig config;
  std::vector<double> bz;
  std::vector<double> bx;
  std::vector<double> lambda;
  /// Upper triangle (i < j), row-major: (0,1), (0,2), ..., (1,2), ...
  std::vector<double> jxx;

  int n_bath() const { return config.n_bath; }
  double coupling(int i, int j) const;
};

std::size_t pair_index(int i, int j, int n);

/// Draw order: bz[0..N), bx[0..N), lambda[0..N), then jxx in row-major
/// upper-triangle order, all from one UniformStream seeded with `seed`.
ModelParameters sample_parameters(const ModelConfig& config, std::uint64_t seed);
inline ModelParameters sample_parameters(const ModelConfig& config) {
  return sample_parameters(config, config.seed);
}

nlohmann::json to_json(const ModelParameters& p);
ModelParameters parameters_from_json(const nlohmann::json& j);

struct AssemblyOptions {
  /// Dense matrices above this dimension are not materialized.
  std::size_t dense_dim_cap = kDefaultDenseCap;
  /// Hard limit on total qubits (system + bath), Pauli path included.
  int max_total_qubits = 20;
};

/// All operators of H = H_S (x) I + S (x) B + I (x) H_B.
///
/// Pauli forms are always present. Bath-side dense matrices are built when
/// 2^N <= dense_dim_cap and are empty otherwise.
struct ModelHamiltonians {
  int n_bath = 0;

  OperatorMatrix system;           // -(1/2) B0z sigma_z
  OperatorMatrix system_coupling;  // sigma_x
  OperatorMatrix bath_coupling;    // sum_i lambda_i sigma_x^(i)
  OperatorMatrix bath;             // H_B

  PauliSum total_terms;        // N + 1 sites, site 0 = detector
  PauliSum bath_terms;         // N sites
  PauliSum bath_coupling_terms;
  PauliSum bath_field_terms;   // one-body part of H_B
  PauliSum bath_exchange_terms;  // two-body sigma_x sigma_x part of H_B

  std::size_t total_dim() const { return std::size_t{1} << (n_bath + 1); }
  bool has_dense_bath() const { return bath.data.size() > 0; }

  /// Dense H_total; CapacityError above `dim_cap`.
  OperatorMatrix total_dense(std::size_t dim_cap = kDefaultDenseCap) const;
};

ModelHamiltonians assemble_hamiltonians(const ModelParameters& p,
                                        const AssemblyOptions& options = {});

/// Reads `key = value` lines (# starts a comment). Returns the raw map.
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_key_value_text(const std::string& text);

/// Applies recognised model keys (n_bath, b0z, delta, lambda, jx, kt, seed)
/// from `kv` onto `config`. Unknown keys are left for the caller.
void apply_model_keys(const std::map<std::string, std::string>& kv, ModelConfig& config);

double parse_double(const std::string& key, const std::string& value);
long long parse_integer(const std::string& key, const std::string& value);

}  // namespace chaoskraus
