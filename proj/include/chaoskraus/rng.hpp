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

#include <cstdint>
#include <random>

namespace chaoskraus {

/// Seeded uniform stream used for parameter draws.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so draws are identical on every conforming toolchain. Each raw
/// 64-bit word w maps to the open interval (0, 1) as ((w >> 11) + 0.5) / 2^53;
/// std::uniform_real_distribution is avoided because its algorithm is
/// implementation-defined.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next_open01() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
  }

  /// Uniform draw on (lo, hi). A zero-width interval returns lo exactly.
  double uniform(double lo, double hi) {
    const double u = next_open01();
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chaoskraus
