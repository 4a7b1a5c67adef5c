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

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace chaoskraus {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Dense operator on a 2^n-dimensional space.
struct OperatorMatrix {
  Matrix data;
  bool hermitian = false;

  Eigen::Index dim() const { return data.rows(); }
};

/// Largest element of |A - A^dagger|.
inline double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Reduced system state; 2x2 for the detector-qubit model.
using DensityMatrix = Matrix;

/// Time grid plus per-sample reduced densities and quality measures.
struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> rho;
  std::vector<double> purity;
  std::vector<double> fidelity;
};

/// Uniform grid of `n_samples` points on [0, t_max], endpoints included.
std::vector<double> uniform_grid(double t_max, std::size_t n_samples);

}  // namespace chaoskraus
