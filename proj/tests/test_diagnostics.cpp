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
#include <numeric>
#include <random>

#include "chaoskraus/diagnostics.hpp"
#include "chaoskraus/errors.hpp"
#include "chaoskraus/linalg.hpp"
#include "chaoskraus/model.hpp"
#include "chaoskraus/spectral.hpp"
#include "oracles.hpp"

using namespace chaoskraus;

namespace {

std::vector<double> cumulative(const std::vector<double>& steps) {
  std::vector<double> e(steps.size() + 1, 0.0);
  std::partial_sum(steps.begin(), steps.end(), e.begin() + 1);
  return e;
}

RealVector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("purity examples", "[diagnostics]") {
  CHECK(std::abs(purity(projector(plus_state())) - 1.0) < 1e-15);
  CHECK(std::abs(purity(0.5 * Matrix::Identity(2, 2)) - 0.5) < 1e-15);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const Matrix rho = oracle::random_density(2, rng);
    const Matrix u = oracle::expm_i(oracle::random_hermitian(2, rng), 1.0);
    CHECK(std::abs(purity(u * rho * u.adjoint()) - purity(rho)) < 1e-14);
  }
}

TEST_CASE("fidelity examples", "[diagnostics]") {
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK(std::abs(fidelity(zero, projector(plus_state())) - 0.5) < 1e-15);
  CHECK(std::abs(fidelity(zero, zero) - 1.0) < 1e-15);
  std::mt19937_64 rng(5);
  const Matrix a = oracle::random_density(2, rng), b = oracle::random_density(2, rng);
  CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) < 1e-15);
  CHECK_THROWS_AS(fidelity(a, Matrix::Identity(3, 3)), ShapeError);
}

TEST_CASE("linear staircase unfolds to unit spacing", "[diagnostics][unfold]") {
  std::vector<double> e(120);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = -3.0 + 0.25 * static_cast<double>(i);
  const auto u = unfold_spectrum(e);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(std::abs(u[i] - (static_cast<double>(i) + 0.5)) < 1e-9);
  }
  const auto m = unfold_spectrum_monotone(e);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(std::abs(m[i] - (static_cast<double>(i) + 0.5)) < 1e-8);
  }
}

TEST_CASE("unfolding removes a quadratic density", "[diagnostics][unfold]") {
  // rho(E) proportional to E^2, so N(E) ~ E^3: E_i = cbrt(i), i = 1..400.
  std::vector<double> e(400);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::cbrt(static_cast<double>(i + 1));
  const auto st = spacing_distribution(unfold_spectrum(e));
  CHECK(std::abs(st.mean_spacing - 1.0) < 0.02);
  // Local spacings are flat after unfolding: first vs last quarter.
  const auto& u = st.unfolded;
  const double first = (u[100] - u[0]) / 100.0, last = (u[399] - u[299]) / 100.0;
  CHECK(std::abs(first - last) < 0.02);
}

TEST_CASE("unfolding is idempotent on an already uniform spectrum", "[diagnostics][unfold]") {
  std::vector<double> e(200);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 1.7 + 0.03 * static_cast<double>(i);
  const auto once = spacing_distribution(unfold_spectrum(e));
  const auto twice = spacing_distribution(unfold_spectrum(once.unfolded));
  for (std::size_t i = 0; i < once.spacings.size(); ++i) {
    CHECK(std::abs(once.spacings[i] - twice.spacings[i]) < 1e-10);
  }
}

TEST_CASE("unfolding input errors", "[diagnostics][unfold]") {
  std::vector<double> few(10);
  std::iota(few.begin(), few.end(), 0.0);
  CHECK_THROWS_AS(unfold_spectrum(few), DomainError);
  std::vector<double> e(60);
  std::iota(e.begin(), e.end(), 0.0);
  CHECK_THROWS_AS(unfold_spectrum(e, 2), DomainError);
  CHECK_THROWS_AS(unfold_spectrum(e, 16), DomainError);
  std::swap(e[3], e[4]);
  CHECK_THROWS_AS(unfold_spectrum(e), DomainError);
}

TEST_CASE("gapped spectrum: unconstrained fit fails, monotone fit succeeds", "[diagnostics][unfold]") {
  // Two dense clusters separated by a wide gap.
  std::vector<double> e;
  for (int i = 0; i < 100; ++i) e.push_back(0.01 * i);
  for (int i = 0; i < 100; ++i) e.push_back(50.0 + 0.01 * i);
  CHECK_THROWS_AS(unfold_spectrum(e), UnfoldingError);
  const auto m = unfold_spectrum_monotone(e);
  for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i] >= m[i - 1]);
  CHECK_THROWS_AS(level_statistics(to_eigen(e), 200), UnfoldingError);
  const auto st = level_statistics(to_eigen(e), 200, kDefaultUnfoldDegree, true);
  CHECK(st.unfolding == "monotone");
  CHECK(st.spacings.size() == 199);
}

TEST_CASE("nonnegative least squares", "[diagnostics]") {
  // Unconstrained optimum (1, -1) is clipped to (x1, 0).
  RealMatrix a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  RealVector b(3);
  b << 1, -1, 0;
  const auto x = nonnegative_least_squares(a, b);
  CHECK(x[1] == 0.0);
  CHECK(std::abs(x[0] - 0.5) < 1e-14);
  // Feasible optimum is returned unchanged.
  b << 2, 3, 5;
  const auto y = nonnegative_least_squares(a, b);
  CHECK(std::abs(y[0] - 2.0) < 1e-12);
  CHECK(std::abs(y[1] - 3.0) < 1e-12);
}

TEST_CASE("Poisson and Wigner-Dyson samples are told apart", "[diagnostics][levels]") {
  std::mt19937_64 rng(2024);
  int poisson_right = 0, wd_right = 0;
  for (int trial = 0; trial < 9; ++trial) {
    const auto p = spacing_distribution(cumulative(oracle::exponential_samples(199, rng)));
    const auto w = spacing_distribution(cumulative(oracle::wigner_samples(199, rng)));
    poisson_right += p.d_poisson < p.d_wd;
    wd_right += w.d_wd < w.d_poisson;
  }
  CHECK(poisson_right >= 5);
  CHECK(wd_right >= 5);
}

TEST_CASE("picket fence spectrum", "[diagnostics][levels]") {
  std::vector<double> e(101);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 2.0 * static_cast<double>(i);
  const auto st = spacing_distribution(e);
  CHECK(st.mean_spacing == 2.0);
  for (double s : st.spacings) CHECK(s == 1.0);
  // All mass in the bin [1, 1 + 1/6).
  const double width = kHistogramMax / kHistogramBins;
  CHECK(std::abs(st.densities[6] - 1.0 / width) < 1e-12);
  CHECK(std::abs(st.d_poisson - (1.0 - std::exp(-1.0))) < 1e-12);
  CHECK(std::abs(st.d_wd - (1.0 - std::exp(-M_PI / 4.0))) < 1e-12);
}

TEST_CASE("histogram counts large spacings in the last bin", "[diagnostics][levels]") {
  // Spacings 0.5 x 9 and one of 5.5: mean 1 after rescaling.
  std::vector<double> steps(9, 0.5);
  steps.push_back(5.5);
  const auto st = spacing_distribution(cumulative(steps));
  const double width = kHistogramMax / kHistogramBins;
  double mass = 0.0;
  for (double d : st.densities) mass += d * width;
  CHECK(std::abs(mass - 1.0) < 1e-12);
  CHECK(st.densities.back() > 0.0);
}

TEST_CASE("reference CDFs", "[diagnostics]") {
  CHECK(poisson_cdf(0.0) == 0.0);
  CHECK(wigner_dyson_cdf(0.0) == 0.0);
  CHECK(std::abs(poisson_cdf(1.0) - (1.0 - std::exp(-1.0))) < 1e-15);
  CHECK(std::abs(wigner_dyson_cdf(1.0) - (1.0 - std::exp(-M_PI / 4.0))) < 1e-15);
  CHECK(sup_cdf_distance({0.5}, poisson_cdf) > 0.0);
}

TEST_CASE("echo without perturbation stays at one", "[diagnostics][echo]") {
  ModelConfig c;
  c.n_bath = 3;
  const auto h = assemble_hamiltonians(sample_parameters(c));
  const OperatorMatrix h0{to_dense(h.bath_field_terms, 64), true};
  const OperatorMatrix zero{Matrix::Zero(8, 8), true};
  const auto echo = loschmidt_echo(h0, zero, uniform_grid(40.0, 81));
  for (double m : echo.m) CHECK(std::abs(m - 1.0) < 1e-12);
  // A perturbation that commutes with H0 only adds a phase.
  const OperatorMatrix commuting{0.3 * h0.data * h0.data, true};
  const auto e2 = loschmidt_echo(h0, commuting, uniform_grid(40.0, 81));
  for (double m : e2.m) CHECK(std::abs(m - 1.0) < 1e-10);
}

TEST_CASE("echo matches a dense matrix-exponential oracle", "[diagnostics][echo]") {
  ModelConfig c;
  c.n_bath = 3;
  c.jx_max = 1.0;
  c.seed = 6;
  const auto h = assemble_hamiltonians(sample_parameters(c));
  const Matrix h0 = to_dense(h.bath_field_terms, 64);
  const Matrix v = to_dense(h.bath_exchange_terms, 64);
  const auto times = uniform_grid(10.0, 21);
  const auto echo = loschmidt_echo(OperatorMatrix{h0, true}, OperatorMatrix{v, true}, times);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h0);
  const Vector psi0 = es.eigenvectors().col(0);
  CHECK(std::abs(echo.m[0] - 1.0) < 1e-10);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex amp =
        psi0.dot(oracle::expm_i(-h0, times[i]) * oracle::expm_i(h0 + v, times[i]) * psi0);
    CHECK(std::abs(echo.m[i] - std::norm(amp)) < 1e-8);
  }
  CHECK_THROWS_AS(loschmidt_echo(OperatorMatrix{h0, true}, OperatorMatrix{Matrix::Zero(4, 4), true},
                                 times),
                  ShapeError);
}

TEST_CASE("echo decay fit recovers a known rate", "[diagnostics][echo]") {
  EchoSeries e;
  e.times = uniform_grid(10.0, 101);
  for (double t : e.times) e.m.push_back(0.98 * std::exp(-0.45 * t));
  const auto fit = fit_echo_decay(e, 0.1);
  REQUIRE(fit.ok);
  CHECK(std::abs(fit.rate - 0.45) < 1e-12);
  CHECK(std::abs(fit.intercept - std::log(0.98)) < 1e-12);
  CHECK(fit.t_end < -std::log(0.1 / 0.98) / 0.45);
  EchoSeries fast;
  fast.times = {0.0, 1.0, 2.0};
  fast.m = {1.0, 0.01, 0.001};
  CHECK_FALSE(fit_echo_decay(fast).ok);
}

TEST_CASE("strong intra-bath coupling shows level repulsion", "[diagnostics][levels][slow]") {
  // Fraction of unit-mean spacings below 0.1, against 1 - e^{-0.1} for Poisson.
  int repelled = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ModelConfig c;
    c.seed = seed;
    const auto h = assemble_hamiltonians(sample_parameters(c));
    const auto full = diagonalize_bath(h.bath, h.bath.dim());
    const auto st = level_statistics(full.all_energies, 200, kDefaultUnfoldDegree, true);
    std::size_t small = 0;
    for (double s : st.spacings) small += s < 0.1;
    repelled += static_cast<double>(small) / static_cast<double>(st.spacings.size()) <
                1.0 - std::exp(-0.1);
  }
  CHECK(repelled >= 3);
}
