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

#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "chaoskraus/errors.hpp"
#include "chaoskraus/model.hpp"
#include "chaoskraus/pauli.hpp"
#include "chaoskraus/rng.hpp"
#include "oracles.hpp"

using namespace chaoskraus;
using Catch::Matchers::WithinAbs;

namespace {

ModelConfig reference_config(std::uint64_t seed) {
  ModelConfig c;
  c.seed = seed;
  return c;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("sampled parameters stay inside their intervals", "[model]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = sample_parameters(reference_config(seed));
    REQUIRE(p.bz.size() == 10);
    REQUIRE(p.jxx.size() == 45);
    for (int i = 0; i < 10; ++i) {
      CHECK(p.bz[i] >= 0.8);
      CHECK(p.bz[i] <= 1.2);
      CHECK(p.bx[i] >= 0.8);
      CHECK(p.bx[i] <= 1.2);
      CHECK(std::abs(p.lambda[i]) <= 0.05);
    }
    for (double j : p.jxx) CHECK(std::abs(j) <= 2.0);
  }
}

TEST_CASE("zero widths give exactly the centre values", "[model]") {
  ModelConfig c;
  c.delta = 0.0;
  c.lambda_max = 0.0;
  c.jx_max = 0.0;
  for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
    const auto p = sample_parameters(c, seed);
    for (int i = 0; i < c.n_bath; ++i) {
      CHECK(p.bz[i] == c.b0z);
      CHECK(p.bx[i] == c.b0z);
      CHECK(p.lambda[i] == 0.0);
      CHECK_FALSE(std::signbit(p.lambda[i]));
    }
    for (double j : p.jxx) CHECK(j == 0.0);
  }
}

TEST_CASE("sampling is deterministic in the seed and follows the draw order", "[model]") {
  const auto a = sample_parameters(reference_config(5));
  const auto b = sample_parameters(reference_config(5));
  CHECK(std::memcmp(a.bz.data(), b.bz.data(), a.bz.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.jxx.data(), b.jxx.data(), a.jxx.size() * sizeof(double)) == 0);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(to_json(a).dump() != to_json(sample_parameters(reference_config(6))).dump());

  // Replaying the documented stream reproduces every array.
  ModelConfig c = reference_config(11);
  const auto p = sample_parameters(c);
  UniformStream s(11);
  const double lo = c.b0z - c.delta / 2, hi = c.b0z + c.delta / 2;
  for (int i = 0; i < 10; ++i) CHECK(p.bz[i] == s.uniform(lo, hi));
  for (int i = 0; i < 10; ++i) CHECK(p.bx[i] == s.uniform(lo, hi));
  for (int i = 0; i < 10; ++i) CHECK(p.lambda[i] == s.uniform(-c.lambda_max, c.lambda_max));
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) CHECK(p.coupling(i, j) == s.uniform(-c.jx_max, c.jx_max));
}

TEST_CASE("invalid configurations are rejected", "[model]") {
  ModelConfig c;
  c.n_bath = 0;
  CHECK_THROWS_AS(sample_parameters(c), ConfigError);
  c = ModelConfig{};
  c.delta = -0.1;
  CHECK_THROWS_AS(sample_parameters(c), ConfigError);
  c = ModelConfig{};
  c.lambda_max = -1;
  CHECK_THROWS_AS(sample_parameters(c), ConfigError);
  c = ModelConfig{};
  c.jx_max = -1;
  CHECK_THROWS_AS(sample_parameters(c), ConfigError);
  c = ModelConfig{};
  c.kt = -0.25;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("parameter JSON round-trips", "[model]") {
  const auto p = sample_parameters(reference_config(3));
  const auto q = parameters_from_json(to_json(p));
  CHECK(q.bz == p.bz);
  CHECK(q.bx == p.bx);
  CHECK(q.lambda == p.lambda);
  CHECK(q.jxx == p.jxx);
  CHECK(q.config.seed == 3);
  auto broken = to_json(p);
  broken["bz"].erase(0);
  CHECK_THROWS_AS(parameters_from_json(broken), ConfigError);
}

TEST_CASE("one bath qubit: hand-assembled 4x4 Hamiltonian", "[model]") {
  ModelConfig c;
  c.n_bath = 1;
  auto p = sample_parameters(c, 2);
  p.lambda[0] = 0.03;
  const auto h = assemble_hamiltonians(p);
  const double bx = p.bx[0], bz = p.bz[0], b0 = c.b0z, l = 0.03;
  // Basis |s b>, s most significant.
  Matrix ref = Matrix::Zero(4, 4);
  ref(0, 0) = -0.5 * b0 - 0.5 * bz;
  ref(1, 1) = -0.5 * b0 + 0.5 * bz;
  ref(2, 2) = 0.5 * b0 - 0.5 * bz;
  ref(3, 3) = 0.5 * b0 + 0.5 * bz;
  ref(0, 1) = ref(1, 0) = ref(2, 3) = ref(3, 2) = -0.5 * bx;
  ref(0, 3) = ref(3, 0) = ref(1, 2) = ref(2, 1) = l;  // lambda sigma_x (x) sigma_x
  CHECK(max_abs(h.total_dense().data - ref) < 1e-15);
}

TEST_CASE("assembled operators match the Kronecker-product oracle", "[model]") {
  for (int n : {2, 3, 4}) {
    ModelConfig c;
    c.n_bath = n;
    const auto p = sample_parameters(c, 40 + n);
    const auto h = assemble_hamiltonians(p);
    CHECK(max_abs(h.bath.data - oracle::bath_hamiltonian(p)) < 1e-13);
    CHECK(max_abs(h.bath_coupling.data - oracle::bath_coupling(p)) < 1e-13);
    CHECK(max_abs(h.total_dense().data - oracle::total_hamiltonian(p)) < 1e-13);
    CHECK(max_abs(h.system.data - (-0.5 * c.b0z * oracle::pauli('z'))) == 0.0);
    CHECK(max_abs(h.system_coupling.data - oracle::pauli('x')) == 0.0);
    CHECK(max_abs(to_dense(h.bath_terms, 4096) - h.bath.data) < 1e-13);
    CHECK(max_abs(to_dense(h.bath_field_terms, 4096) + to_dense(h.bath_exchange_terms, 4096) -
                  h.bath.data) < 1e-13);
  }
}

TEST_CASE("assembled operators are Hermitian", "[model]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto h = assemble_hamiltonians(sample_parameters(reference_config(seed)));
    const Matrix& hb = h.bath.data;
    CHECK(hermiticity_defect(hb) < 1e-14 * hb.cwiseAbs().maxCoeff());
    CHECK(hermiticity_defect(h.bath_coupling.data) < 1e-14);
  }
  ModelConfig c;
  c.n_bath = 4;
  const auto h = assemble_hamiltonians(sample_parameters(c, 9));
  const Matrix t = h.total_dense().data;
  CHECK(hermiticity_defect(t) < 1e-14 * t.cwiseAbs().maxCoeff());
}

TEST_CASE("no coupling: total Hamiltonian is block diagonal in the system basis", "[model]") {
  ModelConfig c;
  c.n_bath = 3;
  c.lambda_max = 0.0;
  const auto h = assemble_hamiltonians(sample_parameters(c, 4));
  const Matrix t = h.total_dense().data;
  CHECK(max_abs(t.block(0, 8, 8, 8)) == 0.0);
  CHECK(max_abs(t.block(8, 0, 8, 8)) == 0.0);
  const Matrix id = Matrix::Identity(8, 8);
  CHECK(max_abs(t.block(0, 0, 8, 8) - (h.bath.data - 0.5 * c.b0z * id)) < 1e-15);
  CHECK(max_abs(t.block(8, 8, 8, 8) - (h.bath.data + 0.5 * c.b0z * id)) < 1e-15);
}

TEST_CASE("capacity limits", "[model]") {
  ModelConfig c;
  c.n_bath = 13;  // 2^13 bath states: above the dense cap
  const auto p = sample_parameters(c, 1);
  const auto h = assemble_hamiltonians(p);
  CHECK_FALSE(h.has_dense_bath());
  CHECK_THROWS_AS(h.total_dense(), CapacityError);
  AssemblyOptions tight;
  tight.max_total_qubits = 8;
  CHECK_THROWS_AS(assemble_hamiltonians(p, tight), CapacityError);
}

TEST_CASE("key-value configuration", "[model]") {
  const auto kv = parse_key_value_text(
      "# reference regime\n"
      "n_bath = 6\n"
      "jx = 0.5   # trailing comment\n"
      "seed=42\n"
      "\n"
      "kt = 0.1\n");
  ModelConfig c;
  apply_model_keys(kv, c);
  CHECK(c.n_bath == 6);
  CHECK(c.jx_max == 0.5);
  CHECK(c.seed == 42);
  CHECK(c.kt == 0.1);
  CHECK(c.b0z == 1.0);

  CHECK_THROWS_AS(parse_key_value_text("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_value_text("just words\n"), ConfigError);
  ModelConfig d;
  CHECK_THROWS_AS(apply_model_keys({{"delta", "wide"}}, d), ConfigError);
  CHECK_THROWS_AS(apply_model_keys({{"n_bath", "2.5"}}, d), ConfigError);
  CHECK_THROWS_AS(read_key_value_file("/nonexistent/spec.txt"), ConfigError);

  const auto path = std::filesystem::temp_directory_path() / "chaoskraus_model_kv.txt";
  std::ofstream(path) << "delta = 0.2\nlambda = 0.01\n";
  ModelConfig e;
  apply_model_keys(read_key_value_file(path), e);
  CHECK(e.delta == 0.2);
  CHECK(e.lambda_max == 0.01);
  std::filesystem::remove(path);
}
