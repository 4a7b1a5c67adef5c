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
#include <string>
#include <vector>

#include "chaoskraus/types.hpp"

namespace chaoskraus {

enum class PauliAxis : std::uint8_t { kX, kY, kZ };

struct PauliFactor {
  int site;
  PauliAxis axis;
};

/// Real-weighted tensor product of single-site Pauli matrices.
struct PauliTerm {
  double coefficient = 0.0;
  std::vector<PauliFactor> factors;
};

/// Sum of Pauli strings on `n_sites` qubits.
///
/// Basis convention: site 0 is the most significant bit of the basis index,
/// site n_sites - 1 the least significant. sigma_z|0> = +|0>.
struct PauliSum {
  int n_sites = 0;
  std::vector<PauliTerm> terms;

  std::size_t dim() const { return std::size_t{1} << n_sites; }
};

/// Throws ValidationError on out-of-range sites or repeated sites in a term.
void validate(const PauliSum& sum);

std::string to_string(const PauliTerm& term);

/// Materializes the sum as a dense matrix. Throws CapacityError if the
/// dimension exceeds `dim_cap`.
Matrix to_dense(const PauliSum& sum, std::size_t dim_cap);

/// Matrix-free application of a Pauli sum.
///
/// Terms sharing the same bit-flip pattern are merged at construction. A
/// group whose strings carry no Z/Y factor reduces to one scalar; otherwise a
/// per-basis-state coefficient table is precomputed.
class PauliKernel {
 public:
  PauliKernel() = default;
  explicit PauliKernel(const PauliSum& sum);

  std::size_t dim() const { return dim_; }
  int n_sites() const { return n_sites_; }
  std::size_t group_count() const { return groups_.size(); }

  /// out = H in. Throws ShapeError on dimension mismatch.
  void apply(const Vector& in, Vector& out) const;
  Vector apply(const Vector& in) const;

  /// out += alpha * H in, without bounds checks. `in` and `out` must not alias.
  void apply_add(const Complex* in, Complex* out, Complex alpha) const;

  /// Same for a block of `ncols` states stored row-major (basis index major,
  /// column minor), i.e. element (j, c) at in[j * ncols + c].
  void apply_add_block(const Complex* in, Complex* out, Complex alpha, std::size_t ncols) const;

 private:
  struct Group {
    std::uint64_t flip = 0;
    bool uniform = true;
    bool real = true;  // all coefficients real
    Complex scalar{0.0, 0.0};
    std::vector<Complex> table;  // used when !uniform
  };

  int n_sites_ = 0;
  std::size_t dim_ = 0;
  std::vector<Group> groups_;
};

/// Convenience wrapper: H v for a list of terms on `n_sites` qubits.
Vector apply_hamiltonian(const PauliSum& sum, const Vector& v);

}  // namespace chaoskraus
