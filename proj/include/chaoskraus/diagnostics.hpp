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
#include <string>
#include <vector>

#include "chaoskraus/types.hpp"

namespace chaoskraus {

// ---------------------------------------------------------------------------
// Open-system quality measures
// ---------------------------------------------------------------------------

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

/// Re Tr(rho rho_ideal). Throws ShapeError on mismatched dimensions and
/// NumericError if the imaginary part exceeds 1e-10.
double fidelity(const DensityMatrix& rho, const DensityMatrix& rho_ideal);

/// Fills purity and fidelity from trajectory.rho, with the ideal reference
/// exp(-i H_S t) rho0 exp(+i H_S t).
void fill_quality_measures(Trajectory& trajectory, const Matrix& system_hamiltonian,
                           const DensityMatrix& rho0);

// ---------------------------------------------------------------------------
// Level-spacing statistics
// ---------------------------------------------------------------------------

inline constexpr int kDefaultUnfoldDegree = 7;
inline constexpr std::size_t kMinUnfoldLevels = 50;
inline constexpr int kHistogramBins = 24;
inline constexpr double kHistogramMax = 4.0;

/// Maps ascending eigenvalues through a least-squares polynomial fit of the
/// staircase N(E_i) = i - 1/2 (Chebyshev basis on the data range). Requires
/// at least 50 levels and degree in [3, 15]; throws UnfoldingError if the
/// fitted staircase decreases anywhere on the data range.
std::vector<double> unfold_spectrum(const std::vector<double>& energies,
                                    int degree = kDefaultUnfoldDegree);

/// Least-squares polynomial of the same degree constrained to be
/// nondecreasing: a Bernstein expansion on the data range with nondecreasing
/// coefficients, fitted by nonnegative least squares. Used when the
/// unconstrained fit fails its monotonicity check (gapped or sparse spectra).
std::vector<double> unfold_spectrum_monotone(const std::vector<double>& energies,
                                             int degree = kDefaultUnfoldDegree);

/// min ||A x - b|| subject to x >= 0 (Lawson-Hanson active set).
RealVector nonnegative_least_squares(const RealMatrix& a, const RealVector& b);

double poisson_cdf(double s);
double wigner_dyson_cdf(double s);

struct SpacingStatistics {
  std::vector<double> raw_energies;
  std::vector<double> unfolded;
  /// Nearest-neighbour spacings rescaled to unit mean.
  std::vector<double> spacings;
  /// Mean spacing of the unfolded levels before rescaling.
  double mean_spacing = 0.0;
  int degree = 0;
  /// "least-squares" or "monotone" (see unfold_spectrum_monotone).
  std::string unfolding = "least-squares";
  /// Equal bins on [0, 4]; spacings beyond 4 are counted in the last bin.
  std::vector<double> bin_edges;
  std::vector<double> densities;
  /// Sup-norm distance of the empirical spacing CDF to each reference law.
  double d_poisson = 0.0;
  double d_wd = 0.0;
};

/// Throws DomainError with fewer than two levels.
SpacingStatistics spacing_distribution(const std::vector<double>& unfolded);

/// Lowest `n_levels` of an ascending spectrum, unfolded, then spacing stats.
/// With `monotone_fallback`, an UnfoldingError from the unconstrained fit is
/// answered with the monotone fit instead of being thrown.
SpacingStatistics level_statistics(const RealVector& energies, std::size_t n_levels,
                                   int degree = kDefaultUnfoldDegree,
                                   bool monotone_fallback = false);

/// Kolmogorov-Smirnov style sup distance between the empirical CDF of
/// `samples` and `cdf`.
double sup_cdf_distance(std::vector<double> samples, double (*cdf)(double));

// ---------------------------------------------------------------------------
// Loschmidt echo
// ---------------------------------------------------------------------------

struct EchoSeries {
  std::vector<double> times;
  std::vector<double> m;
  std::vector<std::string> warnings;
};

/// M(t) = |<psi0| e^{i H0 t} e^{-i (H0 + V) t} |psi0>|^2 with psi0 the ground
/// state of H0 (lowest eigensolver index if degenerate; a warning is
/// recorded). Both propagators are evaluated spectrally.
EchoSeries loschmidt_echo(const OperatorMatrix& h0, const OperatorMatrix& v,
                          const std::vector<double>& times);

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  double t_end = 0.0;
  bool ok = false;
};

/// Least-squares fit ln M(t) = a - rate * t over the leading samples, up to
/// (excluding) the first one with M < floor. Needs at least three points.
DecayFit fit_echo_decay(const EchoSeries& echo, double floor = 0.1);

}  // namespace chaoskraus
