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

#include <cmath>
#include <random>
#include <string>

#include "chaoskraus/diagnostics.hpp"
#include "chaoskraus/dynamics.hpp"
#include "chaoskraus/errors.hpp"
#include "chaoskraus/kraus.hpp"
#include "chaoskraus/linalg.hpp"
#include "chaoskraus/spectral.hpp"
#include "oracles.hpp"

using namespace chaoskraus;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

ModelParameters instance(int n, std::uint64_t seed, double lambda = 0.05) {
  ModelConfig c;
  c.n_bath = n;
  c.seed = seed;
  c.lambda_max = lambda;
  return sample_parameters(c);
}

// Bath with the synthetic coupling B = c1 H_B + c2 H_B^2, which commutes with H_B.
struct CommutingCase {
  Matrix hs, hb, b;
  OperatorMatrix total;
};

CommutingCase commuting_case(int n, std::uint64_t seed) {
  const auto p = instance(n, seed);
  CommutingCase c;
  c.hs = -0.5 * p.config.b0z * oracle::pauli('z');
  c.hb = oracle::bath_hamiltonian(p);
  c.b = 0.02 * c.hb + 0.01 * c.hb * c.hb;
  const Matrix ib = Matrix::Identity(c.hb.rows(), c.hb.cols());
  c.total = OperatorMatrix{oracle::kron(c.hs, ib) + oracle::kron(oracle::pauli('x'), c.b) +
                               oracle::kron(Matrix::Identity(2, 2), c.hb),
                           true};
  return c;
}

}  // namespace

TEST_CASE("partial trace of a product state", "[dynamics]") {
  std::mt19937_64 rng(1);
  const Vector psi = oracle::random_state(2, rng);
  const Vector chi = oracle::random_state(8, rng);
  Vector v(16);
  for (int s = 0; s < 2; ++s) v.segment(8 * s, 8) = psi[s] * chi;
  const auto rho = partial_trace_bath(v);
  CHECK(max_abs(rho - projector(psi)) < 1e-15);
}

TEST_CASE("partial trace of a maximally entangled state", "[dynamics]") {
  Vector v = Vector::Zero(8);
  v[1] = 1.0 / std::sqrt(2.0);      // |0>|chi_0>, chi_0 = |01>
  v[4 + 2] = 1.0 / std::sqrt(2.0);  // |1>|chi_1>, chi_1 = |10>
  const auto rho = partial_trace_bath(v);
  CHECK(max_abs(rho - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("partial trace matches the outer-product oracle", "[dynamics]") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector v = oracle::random_state(16, rng);
    CHECK(max_abs(partial_trace_bath(v) - oracle::partial_trace(v, 2)) < 1e-14);
    CHECK(max_abs(partial_trace_bath(v, 4) - oracle::partial_trace(v, 4)) < 1e-14);
  }
  CHECK_THROWS_AS(partial_trace_bath(Vector::Ones(8)), ValidationError);
  CHECK_THROWS_AS(partial_trace_bath(Vector::Unit(9, 0), 2), ShapeError);
}

TEST_CASE("no coupling: exact dynamics is the bare system evolution", "[dynamics]") {
  const auto p = instance(4, 3, 0.0);
  const auto h = assemble_hamiltonians(p);
  const auto spectrum = analyze_bath(h, 6, 0.25);
  const auto times = uniform_grid(60.0, 61);
  const auto tr = exact_reduced_trajectory(h, spectrum, plus_state(), times);
  const HermitianPropagator ideal(h.system.data);
  const Matrix rho0 = projector(plus_state());
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(max_abs(tr.rho[i] - ideal.evolve(rho0, times[i])) < 1e-8);
    CHECK(std::abs(tr.purity[i] - 1.0) < 1e-8);
    CHECK(std::abs(tr.fidelity[i] - 1.0) < 1e-8);
  }
}

TEST_CASE("t = 0 returns the initial reduced state", "[dynamics]") {
  const auto p = instance(3, 8);
  const auto h = assemble_hamiltonians(p);
  const auto spectrum = analyze_bath(h, 4, 0.25);
  const auto tr = exact_reduced_trajectory(h, spectrum, plus_state(), {0.0});
  CHECK(max_abs(tr.rho[0] - projector(plus_state())) < 1e-15);
}

TEST_CASE("exact trajectory matches a dense expm oracle", "[dynamics]") {
  const auto p = instance(3, 4, 0.3);
  const auto h = assemble_hamiltonians(p);
  const auto spectrum = analyze_bath(h, 3, 0.25);
  const auto times = uniform_grid(15.0, 16);
  const auto tr = exact_reduced_trajectory(h, spectrum, plus_state(), times);
  const Matrix full = oracle::total_hamiltonian(p);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Matrix u = oracle::expm_i(full, times[i]);
    Matrix ref = Matrix::Zero(2, 2);
    for (int n = 0; n < 3; ++n) {
      Vector v(16);
      for (int s = 0; s < 2; ++s) v.segment(8 * s, 8) = plus_state()[s] * spectrum.vectors.col(n);
      ref += spectrum.weights[n] * oracle::partial_trace(u * v, 2);
    }
    CHECK(max_abs(tr.rho[i] - ref) < 1e-8);
  }
}

TEST_CASE("commuting coupling: exact equals Kraus", "[dynamics][kraus]") {
  const auto c = commuting_case(4, 5);
  const auto times = uniform_grid(80.0, 81);
  for (std::size_t m : {std::size_t{1}, std::size_t{5}}) {
    auto spectrum = diagonalize_bath(OperatorMatrix{c.hb, true}, m);
    assign_weights(spectrum, 0.25);
    attach_coupling(spectrum, coupling_matrix_elements(OperatorMatrix{c.b, true}, spectrum));
    const auto exact = exact_reduced_trajectory(c.total, c.hs, spectrum, plus_state(), times);
    const auto kr = propagate_kraus(build_ensemble(c.hs, oracle::pauli('x'), spectrum),
                                    projector(plus_state()), times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, max_abs(exact.rho[i] - kr.rho[i]));
    }
    CHECK(worst < 1e-7);
    if (m == 1) {
      for (double pur : exact.purity) CHECK(std::abs(pur - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("branch sum is linear in the weights", "[dynamics]") {
  const auto p = instance(3, 2, 0.2);
  const auto h = assemble_hamiltonians(p);
  auto spectrum = analyze_bath(h, 2, 0.25);
  const auto times = uniform_grid(10.0, 6);
  RealVector w(2);
  w << 1.0, 0.0;
  spectrum.weights = w;
  const auto a = exact_reduced_trajectory(h, spectrum, plus_state(), times);
  w << 0.0, 1.0;
  spectrum.weights = w;
  const auto b = exact_reduced_trajectory(h, spectrum, plus_state(), times);
  w << 0.3, 0.7;
  spectrum.weights = w;
  const auto mix = exact_reduced_trajectory(h, spectrum, plus_state(), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(max_abs(mix.rho[i] - (0.3 * a.rho[i] + 0.7 * b.rho[i])) < 1e-12);
  }
}

TEST_CASE("block partition and worker count do not change the result", "[dynamics]") {
  const auto p = instance(4, 9, 0.1);
  const auto h = assemble_hamiltonians(p);
  const auto spectrum = analyze_bath(h, 6, 0.25);
  const auto times = uniform_grid(20.0, 21);
  ExactOptions one;
  one.workers = 1;
  ExactOptions split;
  split.workers = 3;
  split.block_columns = 2;
  const auto a = exact_reduced_trajectory(h, spectrum, plus_state(), times, one);
  const auto b = exact_reduced_trajectory(h, spectrum, plus_state(), times, split);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(max_abs(a.rho[i] - b.rho[i]) < 1e-8);
  // Same partition, different worker count: bitwise identical.
  ExactOptions split1 = split;
  split1.workers = 1;
  const auto c = exact_reduced_trajectory(h, spectrum, plus_state(), times, split1);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(max_abs(b.rho[i] - c.rho[i]) == 0.0);
}

TEST_CASE("branch errors name the offending bath state", "[dynamics]") {
  const auto p = instance(3, 2);
  const auto h = assemble_hamiltonians(p);
  auto spectrum = analyze_bath(h, 3, 0.25);
  spectrum.vectors.col(2) *= 2.0;
  try {
    exact_reduced_trajectory(h, spectrum, plus_state(), {1.0});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("n=") != std::string::npos);
  }
  CHECK_THROWS_AS(exact_reduced_trajectory(h, spectrum, Vector::Ones(2), {1.0}), ValidationError);
}
