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

#include "chaoskraus/pauli.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "chaoskraus/errors.hpp"

namespace chaoskraus {
namespace {

struct Masks {
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  int n_y = 0;
};

Masks masks_of(const PauliTerm& term, int n_sites) {
  Masks m;
  for (const auto& f : term.factors) {
    const std::uint64_t bit = std::uint64_t{1} << (n_sites - 1 - f.site);
    switch (f.axis) {
      case PauliAxis::kX:
        m.flip |= bit;
        break;
      case PauliAxis::kY:
        m.flip |= bit;
        m.sign |= bit;
        ++m.n_y;
        break;
      case PauliAxis::kZ:
        m.sign |= bit;
        break;
    }
  }
  return m;
}

// i^k for integer k >= 0
Complex i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double parity_sign(std::uint64_t x) { return (std::popcount(x) & 1) ? -1.0 : 1.0; }

}  // namespace

void validate(const PauliSum& sum) {
  if (sum.n_sites < 1 || sum.n_sites > 30) {
    throw ValidationError("Pauli sum: site count " + std::to_string(sum.n_sites) +
                          " outside [1, 30]");
  }
  for (const auto& term : sum.terms) {
    std::uint64_t seen = 0;
    for (const auto& f : term.factors) {
      if (f.site < 0 || f.site >= sum.n_sites) {
        throw ValidationError("Pauli term " + to_string(term) + ": site " +
                              std::to_string(f.site) + " out of range");
      }
      const std::uint64_t bit = std::uint64_t{1} << f.site;
      if (seen & bit) {
        throw ValidationError("Pauli term " + to_string(term) +
                              ": more than one factor on site " + std::to_string(f.site));
      }
      seen |= bit;
    }
  }
}

std::string to_string(const PauliTerm& term) {
  std::ostringstream os;
  os << term.coefficient;
  if (term.factors.empty()) os << "*I";
  for (const auto& f : term.factors) {
    const char axis = f.axis == PauliAxis::kX ? 'X' : f.axis == PauliAxis::kY ? 'Y' : 'Z';
    os << '*' << axis << f.site;
  }
  return os.str();
}

Matrix to_dense(const PauliSum& sum, std::size_t dim_cap) {
  validate(sum);
  const std::size_t dim = sum.dim();
  if (dim > dim_cap) {
    throw CapacityError("dense matrix of dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(dim_cap));
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& term : sum.terms) {
    const Masks m = masks_of(term, sum.n_sites);
    const Complex phase = term.coefficient * i_power(m.n_y);
    for (std::size_t j = 0; j < dim; ++j) {
      out(static_cast<Eigen::Index>(j ^ m.flip), static_cast<Eigen::Index>(j)) +=
          phase * parity_sign(j & m.sign);
    }
  }
  return out;
}

PauliKernel::PauliKernel(const PauliSum& sum) : n_sites_(sum.n_sites), dim_(sum.dim()) {
  validate(sum);
  // Ordered map keeps group order (and hence floating-point summation order)
  // independent of term order within a flip class.
  std::map<std::uint64_t, std::vector<std::pair<Masks, double>>> by_flip;
  for (const auto& term : sum.terms) {
    if (term.coefficient == 0.0) continue;
    const Masks m = masks_of(term, n_sites_);
    by_flip[m.flip].emplace_back(m, term.coefficient);
  }
  for (const auto& [flip, members] : by_flip) {
    Group g;
    g.flip = flip;
    g.uniform = std::all_of(members.begin(), members.end(),
                            [](const auto& mc) { return mc.first.sign == 0; });
    if (g.uniform) {
      for (const auto& [m, c] : members) g.scalar += c * i_power(m.n_y);
    } else {
      g.table.assign(dim_, Complex{0.0, 0.0});
      for (const auto& [m, c] : members) {
        const Complex phase = c * i_power(m.n_y);
        for (std::size_t j = 0; j < dim_; ++j) g.table[j] += phase * parity_sign(j & m.sign);
      }
    }
    g.real = g.uniform ? g.scalar.imag() == 0.0
                       : std::all_of(g.table.begin(), g.table.end(),
                                     [](const Complex& c) { return c.imag() == 0.0; });
    groups_.push_back(std::move(g));
  }
}

void PauliKernel::apply_add(const Complex* in, Complex* out, Complex alpha) const {
  apply_add_block(in, out, alpha, 1);
}

void PauliKernel::apply_add_block(const Complex* in, Complex* out, Complex alpha,
                                  std::size_t ncols) const {
  // Explicit real arithmetic: std::complex operator* goes through the
  // Annex G NaN-recovery path under default GCC flags.
  const double* x = reinterpret_cast<const double*>(in);
  double* y = reinterpret_cast<double*>(out);
  const std::size_t stride = 2 * ncols;
  const bool imaginary_alpha = alpha.real() == 0.0;
  for (const auto& g : groups_) {
    const std::size_t f = g.flip;
    if (imaginary_alpha && g.real) {
      // alpha * coefficient = i * k with k real: y += i k x.
      const double ai = alpha.imag();
      if (ncols == 1) {
        for (std::size_t j = 0; j < dim_; ++j) {
          const double k = ai * (g.uniform ? g.scalar.real() : g.table[j].real());
          const std::size_t t = j ^ f;
          y[2 * t] -= k * x[2 * j + 1];
          y[2 * t + 1] += k * x[2 * j];
        }
        continue;
      }
      for (std::size_t j = 0; j < dim_; ++j) {
        const double k = ai * (g.uniform ? g.scalar.real() : g.table[j].real());
        const double* xs = x + j * stride;
        double* ys = y + (j ^ f) * stride;
        for (std::size_t q = 0; q < stride; q += 2) {
          ys[q] -= k * xs[q + 1];
          ys[q + 1] += k * xs[q];
        }
      }
      continue;
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      const Complex c = alpha * (g.uniform ? g.scalar : g.table[j]);
      const double cr = c.real(), ci = c.imag();
      const double* xs = x + j * stride;
      double* ys = y + (j ^ f) * stride;
      for (std::size_t q = 0; q < stride; q += 2) {
        const double xr = xs[q], xi = xs[q + 1];
        ys[q] += cr * xr - ci * xi;
        ys[q + 1] += cr * xi + ci * xr;
      }
    }
  }
}

void PauliKernel::apply(const Vector& in, Vector& out) const {
  if (static_cast<std::size_t>(in.size()) != dim_) {
    throw ShapeError("Pauli kernel: vector of size " + std::to_string(in.size()) +
                     ", expected " + std::to_string(dim_));
  }
  if (&in == &out) {
    Vector tmp = Vector::Zero(static_cast<Eigen::Index>(dim_));
    apply_add(in.data(), tmp.data(), Complex{1.0, 0.0});
    out = std::move(tmp);
    return;
  }
  out.setZero(static_cast<Eigen::Index>(dim_));
  apply_add(in.data(), out.data(), Complex{1.0, 0.0});
}

Vector PauliKernel::apply(const Vector& in) const {
  Vector out;
  apply(in, out);
  return out;
}

Vector apply_hamiltonian(const PauliSum& sum, const Vector& v) {
  return PauliKernel(sum).apply(v);
}

}  // namespace chaoskraus
