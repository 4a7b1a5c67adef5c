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

#include "chaoskraus/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "chaoskraus/errors.hpp"
#include "chaoskraus/linalg.hpp"

namespace chaoskraus {

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.cwiseAbs2().sum();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& rho_ideal) {
  if (rho.rows() != rho_ideal.rows() || rho.cols() != rho_ideal.cols()) {
    throw ShapeError("fidelity: density matrices differ in dimension");
  }
  const Complex f = (rho * rho_ideal).trace();
  if (std::abs(f.imag()) > 1e-10) {
    throw NumericError("fidelity: Tr(rho rho_ideal) has imaginary part " +
                       std::to_string(f.imag()));
  }
  return f.real();
}

void fill_quality_measures(Trajectory& tr, const Matrix& system_hamiltonian,
                           const DensityMatrix& rho0) {
  const HermitianPropagator ideal(system_hamiltonian);
  tr.purity.resize(tr.rho.size());
  tr.fidelity.resize(tr.rho.size());
  for (std::size_t i = 0; i < tr.rho.size(); ++i) {
    tr.purity[i] = purity(tr.rho[i]);
    tr.fidelity[i] = fidelity(tr.rho[i], ideal.evolve(rho0, tr.times[i]));
  }
}

namespace {

void check_unfolding_input(const std::vector<double>& energies, int degree) {
  if (energies.size() < kMinUnfoldLevels) {
    throw DomainError("unfolding needs at least " + std::to_string(kMinUnfoldLevels) +
                      " levels, got " + std::to_string(energies.size()));
  }
  if (degree < 3 || degree > 15) {
    throw DomainError("unfolding degree must be in [3, 15], got " + std::to_string(degree));
  }
  if (!std::is_sorted(energies.begin(), energies.end())) {
    throw DomainError("unfolding needs ascending eigenvalues");
  }
  if (!(energies.back() > energies.front())) {
    throw DomainError("unfolding needs a nonzero spectral range");
  }
}

}  // namespace

std::vector<double> unfold_spectrum(const std::vector<double>& energies, int degree) {
  check_unfolding_input(energies, degree);
  const std::size_t n = energies.size();
  const double lo = energies.front(), hi = energies.back();
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  const auto cols = static_cast<Eigen::Index>(degree + 1);

  auto chebyshev_row = [&](double e, Eigen::Ref<RealVector> row) {
    const double x = (e - mid) / half;
    row[0] = 1.0;
    row[1] = x;
    for (Eigen::Index k = 2; k < cols; ++k) row[k] = 2.0 * x * row[k - 1] - row[k - 2];
  };

  RealMatrix design(static_cast<Eigen::Index>(n), cols);
  RealVector staircase(static_cast<Eigen::Index>(n));
  RealVector row(cols);
  for (std::size_t i = 0; i < n; ++i) {
    chebyshev_row(energies[i], row);
    design.row(static_cast<Eigen::Index>(i)) = row.transpose();
    staircase[static_cast<Eigen::Index>(i)] = static_cast<double>(i) + 0.5;
  }
  const RealVector coef = design.colPivHouseholderQr().solve(staircase);

  // Monotonicity on a grid 20x finer than the level count.
  const std::size_t probes = 20 * n;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= probes; ++i) {
    chebyshev_row(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(probes), row);
    const double val = row.dot(coef);
    if (val < prev - 1e-9) {
      throw UnfoldingError("smoothed staircase of degree " + std::to_string(degree) +
                           " is not monotone on the data range; try a lower degree");
    }
    prev = val;
  }

  const RealVector fitted = design * coef;
  return {fitted.data(), fitted.data() + fitted.size()};
}

RealVector nonnegative_least_squares(const RealMatrix& a, const RealVector& b) {
  const Eigen::Index k = a.cols();
  if (b.size() != a.rows()) throw ShapeError("nnls: right-hand side has the wrong length");
  RealVector x = RealVector::Zero(k);
  std::vector<bool> passive(static_cast<std::size_t>(k), false);
  const double tol = 1e-12 * std::max(1.0, (a.transpose() * b).cwiseAbs().maxCoeff());

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    RealMatrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    const RealVector zs = sub.colPivHouseholderQr().solve(b);
    RealVector z = RealVector::Zero(k);
    for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zs[static_cast<Eigen::Index>(c)];
    return z;
  };

  for (Eigen::Index outer = 0; outer < 3 * k + 10; ++outer) {
    const RealVector w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > wmax) {
        wmax = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (Eigen::Index inner = 0; inner < 3 * k + 10; ++inner) {
      const RealVector z = solve_passive();
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x[j] / (x[j] - z[j]));
        }
      }
      if (feasible) {
        x = z;
        break;
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0.0;
        }
      }
    }
  }
  return x;
}

std::vector<double> unfold_spectrum_monotone(const std::vector<double>& energies, int degree) {
  check_unfolding_input(energies, degree);
  const std::size_t n = energies.size();
  const double lo = energies.front(), hi = energies.back();
  const auto d = static_cast<Eigen::Index>(degree);

  // Column 0 and 1 carry the free offset (+1 and -1); column 1 + j holds
  // C_j(x) = sum_{k >= j} B_{k,d}(x), nondecreasing in x, for j = 1..d.
  RealMatrix design(static_cast<Eigen::Index>(n), d + 2);
  RealVector staircase(static_cast<Eigen::Index>(n));
  RealVector bern(d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (energies[i] - lo) / (hi - lo);
    for (Eigen::Index k = 0; k <= d; ++k) {
      double binom = 1.0;
      for (Eigen::Index r = 1; r <= k; ++r) {
        binom *= static_cast<double>(d - k + r) / static_cast<double>(r);
      }
      bern[k] = binom * std::pow(x, static_cast<double>(k)) *
                std::pow(1.0 - x, static_cast<double>(d - k));
    }
    const auto r = static_cast<Eigen::Index>(i);
    design(r, 0) = 1.0;
    design(r, 1) = -1.0;
    double tail = 0.0;
    for (Eigen::Index j = d; j >= 1; --j) {
      tail += bern[j];
      design(r, 1 + j) = tail;
    }
    staircase[r] = static_cast<double>(i) + 0.5;
  }
  const RealVector coef = nonnegative_least_squares(design, staircase);
  const RealVector fitted = design * coef;
  std::vector<double> out(fitted.data(), fitted.data() + fitted.size());
  // Nondecreasing by construction; enforce it against round-off.
  for (std::size_t i = 1; i < n; ++i) out[i] = std::max(out[i], out[i - 1]);
  return out;
}

double poisson_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-s); }

double wigner_dyson_cdf(double s) {
  return s <= 0.0 ? 0.0 : 1.0 - std::exp(-0.25 * std::numbers::pi * s * s);
}

double sup_cdf_distance(std::vector<double> samples, double (*cdf)(double)) {
  if (samples.empty()) throw DomainError("CDF distance of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

SpacingStatistics spacing_distribution(const std::vector<double>& unfolded) {
  if (unfolded.size() < 2) throw DomainError("spacing distribution needs at least two levels");
  SpacingStatistics st;
  st.unfolded = unfolded;
  st.spacings.resize(unfolded.size() - 1);
  for (std::size_t i = 0; i + 1 < unfolded.size(); ++i) {
    st.spacings[i] = unfolded[i + 1] - unfolded[i];
    if (st.spacings[i] < 0.0) throw DomainError("unfolded levels are not ascending");
  }
  double sum = 0.0;
  for (double s : st.spacings) sum += s;
  st.mean_spacing = sum / static_cast<double>(st.spacings.size());
  if (!(st.mean_spacing > 0.0)) throw DomainError("all unfolded levels coincide");
  for (double& s : st.spacings) s /= st.mean_spacing;

  const double width = kHistogramMax / kHistogramBins;
  st.bin_edges.resize(kHistogramBins + 1);
  for (int b = 0; b <= kHistogramBins; ++b) st.bin_edges[b] = width * b;
  std::vector<std::size_t> counts(kHistogramBins, 0);
  for (double s : st.spacings) {
    const auto b = std::min<std::size_t>(static_cast<std::size_t>(s / width), kHistogramBins - 1);
    ++counts[b];
  }
  const double norm = static_cast<double>(st.spacings.size()) * width;
  st.densities.resize(kHistogramBins);
  for (int b = 0; b < kHistogramBins; ++b) st.densities[b] = static_cast<double>(counts[b]) / norm;

  st.d_poisson = sup_cdf_distance(st.spacings, poisson_cdf);
  st.d_wd = sup_cdf_distance(st.spacings, wigner_dyson_cdf);
  return st;
}

SpacingStatistics level_statistics(const RealVector& energies, std::size_t n_levels, int degree,
                                   bool monotone_fallback) {
  if (static_cast<std::size_t>(energies.size()) < n_levels) {
    throw DomainError("spectrum has " + std::to_string(energies.size()) + " levels, " +
                      std::to_string(n_levels) + " requested");
  }
  std::vector<double> lowest(energies.data(), energies.data() + n_levels);
  std::vector<double> unfolded;
  std::string method = "least-squares";
  try {
    unfolded = unfold_spectrum(lowest, degree);
  } catch (const UnfoldingError&) {
    if (!monotone_fallback) throw;
    unfolded = unfold_spectrum_monotone(lowest, degree);
    method = "monotone";
  }
  SpacingStatistics st = spacing_distribution(unfolded);
  st.unfolding = method;
  st.raw_energies = std::move(lowest);
  st.degree = degree;
  return st;
}

namespace {

struct RealSpectrum {
  RealVector values;
  Matrix vectors;
};

RealSpectrum hermitian_eigen(const Matrix& h) {
  RealSpectrum r;
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> s(h.real());
    if (s.info() != Eigen::Success) throw NumericError("echo: eigensolver failed");
    r.values = s.eigenvalues();
    r.vectors = s.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> s(h);
    if (s.info() != Eigen::Success) throw NumericError("echo: eigensolver failed");
    r.values = s.eigenvalues();
    r.vectors = s.eigenvectors();
  }
  return r;
}

}  // namespace

EchoSeries loschmidt_echo(const OperatorMatrix& h0, const OperatorMatrix& v,
                          const std::vector<double>& times) {
  if (h0.data.rows() != v.data.rows() || h0.data.cols() != v.data.cols() ||
      h0.data.rows() != h0.data.cols()) {
    throw ShapeError("echo: H0 and V must be square matrices of equal size");
  }
  const double scale = std::max(1.0, h0.data.cwiseAbs().maxCoeff() + v.data.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h0.data) > 1e-12 * scale || hermiticity_defect(v.data) > 1e-12 * scale) {
    throw ValidationError("echo: H0 and V must be Hermitian");
  }

  EchoSeries echo;
  echo.times = times;
  const RealSpectrum unperturbed = hermitian_eigen(h0.data);
  if (unperturbed.values.size() > 1 &&
      unperturbed.values[1] - unperturbed.values[0] <=
          1e-10 * std::max(1.0, std::abs(unperturbed.values[0]))) {
    echo.warnings.push_back("H0 ground state is degenerate; using the lowest eigensolver index");
  }
  const Vector psi0 = unperturbed.vectors.col(0);
  const double e0 = unperturbed.values[0];
  const RealSpectrum perturbed = hermitian_eigen(h0.data + v.data);
  const RealVector weights = (perturbed.vectors.adjoint() * psi0).cwiseAbs2();

  echo.m.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    // e^{i H0 t}|psi0> contributes only the phase e^{i E0 t}, which drops out
    // of the modulus; kept for fidelity to the definition.
    Complex amp{0.0, 0.0};
    for (Eigen::Index l = 0; l < weights.size(); ++l) {
      amp += weights[l] * std::polar(1.0, -perturbed.values[l] * t);
    }
    amp *= std::polar(1.0, e0 * t);
    echo.m[i] = std::norm(amp);
  }
  return echo;
}

DecayFit fit_echo_decay(const EchoSeries& echo, double floor) {
  DecayFit fit;
  std::size_t n = 0;
  while (n < echo.m.size() && echo.m[n] >= floor) ++n;
  fit.points = n;
  if (n < 3) {
    fit.rate = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = echo.times[i], y = std::log(echo.m[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * stt - st * st;
  const double slope = (dn * sty - st * sy) / denom;
  fit.rate = -slope;
  fit.intercept = (sy - slope * st) / dn;
  fit.t_end = echo.times[n - 1];
  fit.ok = std::isfinite(fit.rate);
  return fit;
}

}  // namespace chaoskraus
