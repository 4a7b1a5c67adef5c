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

#include "chaoskraus/dynamics.hpp"
#include "chaoskraus/errors.hpp"
#include "chaoskraus/linalg.hpp"
#include "chaoskraus/ode.hpp"
#include "oracles.hpp"

using namespace chaoskraus;

namespace {

ComplexRhs schroedinger(const Matrix& h) {
  return [h](double, const Vector& y, Vector& dy) { dy.noalias() = Complex(0.0, -1.0) * (h * y); };
}

}  // namespace

TEST_CASE("free qubit picks up the analytic phases", "[ode][dynamics]") {
  // H = (w/2) sigma_z: c_0(t) = c_0 exp(-i w t / 2), c_1(t) = c_1 exp(+i w t / 2).
  const double w = 1.3;
  const OperatorMatrix h{0.5 * w * oracle::pauli('z'), true};
  const Vector y0 = plus_state();
  const auto times = uniform_grid(20.0, 81);
  PropagationOptions o;
  o.tol = 1e-10;
  const auto ys = propagate(h, y0, times, o);
  REQUIRE(ys.size() == times.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const Complex e0 = y0[0] * std::exp(Complex(0.0, -0.5 * w * t));
    const Complex e1 = y0[1] * std::exp(Complex(0.0, 0.5 * w * t));
    worst = std::max({worst, std::abs(ys[i][0] - e0), std::abs(ys[i][1] - e1)});
  }
  CHECK(worst < 10.0 * o.tol);
}

TEST_CASE("raw integrator on a fixed-phase rotation", "[ode]") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = -0.5;
  h(1, 1) = 0.5;
  IntegratorOptions o;
  const auto ys = integrate_dop853(schroedinger(h), 0.0, plus_state(), uniform_grid(10.0, 11), o);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double t = static_cast<double>(i);
    CHECK(std::abs(ys[i][0] - plus_state()[0] * std::exp(Complex(0.0, 0.5 * t))) < 1e-8);
  }
}

TEST_CASE("scalar exponential decay", "[ode]") {
  const ComplexRhs rhs = [](double, const Vector& y, Vector& dy) { dy = -y; };
  Vector y0(1);
  y0[0] = 1.0;
  IntegratorStats st;
  const auto ys = integrate_dop853(rhs, 0.0, y0, {0.0, 1.0, 5.0}, IntegratorOptions{}, &st);
  CHECK(std::abs(ys[0][0] - 1.0) == 0.0);
  CHECK(std::abs(ys[1][0] - std::exp(-1.0)) < 1e-9);
  CHECK(std::abs(ys[2][0] - std::exp(-5.0)) < 1e-9);
  CHECK(st.accepted > 0);
  CHECK(st.rhs_evaluations > st.accepted);
}

TEST_CASE("random Hamiltonian on three qubits matches expm", "[ode][dynamics]") {
  std::mt19937_64 rng(7);
  const Matrix h = oracle::random_hermitian(8, rng, 0.7);
  const Vector v0 = oracle::random_state(8, rng);
  OperatorMatrix op{h, true};
  const auto times = uniform_grid(20.0, 41);
  const auto vs = propagate(op, v0, times);
  double worst = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Vector ref = oracle::expm_i(h, times[i]) * v0;
    worst = std::max(worst, (vs[i] - ref).cwiseAbs().maxCoeff());
    drift = std::max(drift, std::abs(vs[i].norm() - 1.0));
  }
  CHECK(worst < 1e-8);
  CHECK(drift < 1e-8);
}

TEST_CASE("energy shift frame and plain frame agree", "[ode][dynamics]") {
  std::mt19937_64 rng(11);
  Matrix h = oracle::random_hermitian(4, rng);
  h += 25.0 * Matrix::Identity(4, 4);  // large offset the shift removes
  const Vector v0 = oracle::random_state(4, rng);
  OperatorMatrix op{h, true};
  const auto times = uniform_grid(5.0, 11);
  PropagationOptions shifted, plain;
  plain.shift_energy = false;
  const auto a = propagate(op, v0, times, shifted);
  const auto b = propagate(op, v0, times, plain);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Vector ref = oracle::expm_i(h, times[i]) * v0;
    CHECK((a[i] - ref).norm() < 1e-8);
    CHECK((b[i] - ref).norm() < 1e-7);
  }
}

TEST_CASE("refining the output grid leaves shared samples unchanged", "[ode]") {
  std::mt19937_64 rng(3);
  const Matrix h = oracle::random_hermitian(4, rng);
  const Vector v0 = oracle::random_state(4, rng);
  OperatorMatrix op{h, true};
  const auto coarse = uniform_grid(10.0, 11);
  const auto fine = uniform_grid(10.0, 101);
  const auto a = propagate(op, v0, coarse);
  const auto b = propagate(op, v0, fine);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    CHECK((a[i] - b[10 * i]).norm() < 1e-13);
  }
}

TEST_CASE("block propagation equals column-by-column propagation", "[ode][dynamics]") {
  std::mt19937_64 rng(5);
  const Matrix h = oracle::random_hermitian(8, rng);
  OperatorMatrix op{h, true};
  Matrix v0(8, 3);
  for (int c = 0; c < 3; ++c) v0.col(c) = oracle::random_state(8, rng);
  const auto times = uniform_grid(8.0, 17);
  std::vector<Matrix> blocks(times.size());
  propagate_block(op, v0, times, PropagationOptions{},
                  [&](std::size_t i, const Matrix& b) { blocks[i] = b; });
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Matrix u = oracle::expm_i(h, times[i]);
    CHECK((blocks[i] - u * v0).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("Pauli-kernel and dense propagation agree", "[ode][dynamics]") {
  ModelConfig c;
  c.n_bath = 3;
  c.seed = 4;
  const auto p = sample_parameters(c);
  const auto h = assemble_hamiltonians(p);
  const PauliKernel kernel(h.total_terms);
  const OperatorMatrix dense = h.total_dense();
  std::mt19937_64 rng(9);
  const Vector v0 = oracle::random_state(16, rng);
  const auto times = uniform_grid(30.0, 31);
  const auto a = propagate(kernel, v0, times);
  const auto b = propagate(dense, v0, times);
  const Matrix full = oracle::total_hamiltonian(p);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK((a[i] - b[i]).norm() < 1e-8);
    CHECK((a[i] - oracle::expm_i(full, times[i]) * v0).norm() < 1e-8);
  }
}

TEST_CASE("integrator rejects bad input", "[ode]") {
  const ComplexRhs rhs = [](double, const Vector& y, Vector& dy) { dy = y; };
  Vector y0 = Vector::Ones(2);
  IntegratorOptions bad;
  bad.rtol = 0.0;
  CHECK_THROWS_AS(integrate_dop853(rhs, 0.0, y0, {1.0}, bad), DomainError);
  CHECK_THROWS_AS(integrate_dop853(rhs, 0.0, y0, {2.0, 1.0}, IntegratorOptions{}), DomainError);
  CHECK_THROWS_AS(integrate_dop853(rhs, 1.0, y0, {0.5}, IntegratorOptions{}), DomainError);
  CHECK_THROWS_AS(
      integrate_dop853(rhs, 0.0, y0, {std::nan("")}, IntegratorOptions{}), DomainError);

  OperatorMatrix op{Matrix::Identity(2, 2), true};
  Vector unnormalized = Vector::Ones(2);
  CHECK_THROWS_AS(propagate(op, unnormalized, {1.0}), ValidationError);
  PropagationOptions zero_tol;
  zero_tol.tol = 0.0;
  CHECK_THROWS_AS(propagate(op, Vector::Unit(2, 0), {1.0}, zero_tol), DomainError);
  CHECK_THROWS_AS(propagate(op, Vector::Unit(4, 0), {1.0}), ShapeError);
}

TEST_CASE("step-size underflow and budget exhaustion raise StiffnessError", "[ode]") {
  // y' = y^2 blows up at t = 1.
  const ComplexRhs blowup = [](double, const Vector& y, Vector& dy) { dy = y.cwiseProduct(y); };
  Vector y0(1);
  y0[0] = 1.0;
  CHECK_THROWS_AS(integrate_dop853(blowup, 0.0, y0, {2.0}, IntegratorOptions{}), StiffnessError);

  const ComplexRhs fast = [](double, const Vector& y, Vector& dy) {
    dy = Complex(0.0, -1000.0) * y;
  };
  IntegratorOptions budget;
  budget.max_steps = 10;
  CHECK_THROWS_AS(integrate_dop853(fast, 0.0, y0, {100.0}, budget), StiffnessError);
}
