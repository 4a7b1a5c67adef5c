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

#include "chaoskraus/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "chaoskraus/errors.hpp"
#include "dop853_tableau.hpp"

namespace chaoskraus {
namespace {

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kErrorExponent = -1.0 / 8.0;

double weighted_norm(const Vector& v, const RealVector& scale) {
  return std::sqrt((v.cwiseAbs2().array() / scale.array().square()).sum());
}

// Starting step after Hairer, Norsett & Wanner, Sec. II.4.
double initial_step(const ComplexRhs& rhs, double t0, const Vector& y0, const Vector& f0,
                    double span, const IntegratorOptions& o, std::size_t& n_rhs) {
  const RealVector scale = (o.atol + o.rtol * y0.cwiseAbs().array()).matrix();
  const double d0 = weighted_norm(y0, scale);
  const double d1 = weighted_norm(f0, scale);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const Vector y1 = y0 + h0 * f0;
  Vector f1(y0.size());
  rhs(t0 + h0, y1, f1);
  ++n_rhs;
  const double d2 = weighted_norm(f1 - f0, scale) / h0;
  double h1 = 0.0;
  if (d1 <= 1e-15 && d2 <= 1e-15) {
    h1 = std::max(1e-6, h0 * 1e-3);
  } else {
    h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
  }
  return std::min({100.0 * h0, h1, o.max_step, span});
}

}  // namespace

namespace {

constexpr std::size_t kChunk = 512;  // doubles per cache block

struct Combination {
  std::array<const double*, dop853::kStagesExtended> src{};
  std::array<double, dop853::kStagesExtended> coef{};
  int count = 0;

  void add(const Vector& v, double c) {
    if (c == 0.0) return;
    src[count] = reinterpret_cast<const double*>(v.data());
    coef[count] = c;
    ++count;
  }
};

// out = base + sum_j coef_j src_j, in one cache-blocked pass. `base` may be
// null (treated as zero).
void combine(Vector& out, const Vector* base, const Combination& comb) {
  double* o = reinterpret_cast<double*>(out.data());
  const double* b = base ? reinterpret_cast<const double*>(base->data()) : nullptr;
  const std::size_t len = 2 * static_cast<std::size_t>(out.size());
  for (std::size_t lo = 0; lo < len; lo += kChunk) {
    const std::size_t hi = std::min(len, lo + kChunk);
    if (b) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = b[i];
    } else {
      for (std::size_t i = lo; i < hi; ++i) o[i] = 0.0;
    }
    for (int j = 0; j < comb.count; ++j) {
      const double c = comb.coef[j];
      const double* s = comb.src[j];
      for (std::size_t i = lo; i < hi; ++i) o[i] += c * s[i];
    }
  }
}

}  // namespace

std::vector<Vector> integrate_dop853(const ComplexRhs& rhs, double t0, const Vector& y0,
                                     const std::vector<double>& times,
                                     const IntegratorOptions& options,
                                     IntegratorStats* stats) {
  std::vector<Vector> out(times.size());
  integrate_dop853(
      rhs, t0, y0, times, options, [&](std::size_t i, const Vector& y) { out[i] = y; }, stats);
  return out;
}

void integrate_dop853(const ComplexRhs& rhs, double t0, const Vector& y0,
                      const std::vector<double>& times, const IntegratorOptions& options,
                      const SampleObserver& observer, IntegratorStats* stats) {
  using namespace dop853;
  if (!(options.rtol > 0.0) || !(options.atol > 0.0)) {
    throw DomainError("integrator tolerances must be positive");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < t0 || (i > 0 && times[i] < times[i - 1])) {
      throw DomainError("output times must be finite, nondecreasing and >= t0");
    }
  }

  IntegratorStats local;
  IntegratorStats& st = stats ? *stats : local;
  st = IntegratorStats{};

  std::size_t next = 0;
  while (next < times.size() && times[next] == t0) {
    observer(next, y0);
    ++next;
  }
  if (next == times.size()) return;

  const Eigen::Index n = y0.size();
  const double t_end = times.back();
  std::array<Vector, kStagesExtended> k;
  for (auto& ki : k) ki.resize(n);
  std::array<Vector, 7> dense;
  for (auto& d : dense) d.resize(n);
  Vector y = y0, y_new(n), stage(n), err5(n), err3(n);

  double t = t0;
  rhs(t, y, k[0]);
  st.rhs_evaluations = 1;
  double h = options.first_step > 0.0
                 ? options.first_step
                 : initial_step(rhs, t0, y0, k[0], t_end - t0, options, st.rhs_evaluations);

  while (next < times.size()) {
    const double min_step = 10.0 * std::abs(std::nextafter(t, t_end + 1.0) - t);
    h = std::min(h, options.max_step);
    bool rejected_once = false;
    double err = 0.0;
    double t_new = 0.0;
    for (;;) {
      if (h < min_step) {
        std::ostringstream os;
        os << "step size underflow at t=" << t << " (h=" << h << ", last error ratio=" << err
           << ", accepted=" << st.accepted << ", rejected=" << st.rejected << ")";
        throw StiffnessError(os.str());
      }
      if (st.accepted + st.rejected >= options.max_steps) {
        std::ostringstream os;
        os << "step budget of " << options.max_steps << " exhausted at t=" << t;
        throw StiffnessError(os.str());
      }
      t_new = t + h;
      if (t_new >= t_end) {
        t_new = t_end;
        h = t_end - t;
      }
      for (int s = 1; s < kStages; ++s) {
        Combination comb;
        for (int j = 0; j < s; ++j) comb.add(k[j], h * kA[s][j]);
        combine(stage, &y, comb);
        rhs(t + kC[s] * h, stage, k[s]);
      }
      st.rhs_evaluations += kStages - 1;
      {
        Combination cb, c5, c3;
        for (int j = 0; j < kStages; ++j) {
          cb.add(k[j], h * kB[j]);
          c5.add(k[j], kE5[j]);
          c3.add(k[j], kE3[j]);
        }
        combine(y_new, &y, cb);
        combine(err5, nullptr, c5);
        combine(err3, nullptr, c3);
      }

      double e5 = 0.0, e3 = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double w = options.atol + options.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        e5 += std::norm(err5[i]) / (w * w);
        e3 += std::norm(err3[i]) / (w * w);
      }
      err = (e5 == 0.0 && e3 == 0.0) ? 0.0 : std::abs(h) * e5 / std::sqrt(e5 + 0.01 * e3);

      if (err < 1.0) {
        double factor = err == 0.0 ? kMaxFactor
                                   : std::min(kMaxFactor, kSafety * std::pow(err, kErrorExponent));
        if (rejected_once) factor = std::min(1.0, factor);
        ++st.accepted;
        st.min_step = std::min(st.min_step, h);
        st.max_step = std::max(st.max_step, h);
        rhs(t_new, y_new, k[kStages]);
        ++st.rhs_evaluations;
        // The next step is proposed before any sample handling, so the step
        // sequence does not depend on where samples fall.
        const double h_next = h * factor;

        if (next < times.size() && times[next] <= t_new) {
          for (int s = kStages + 1; s < kStagesExtended; ++s) {
            Combination comb;
            for (int j = 0; j < s; ++j) comb.add(k[j], h * kA[s][j]);
            combine(stage, &y, comb);
            rhs(t + kC[s] * h, stage, k[s]);
            ++st.rhs_evaluations;
          }
          dense[0] = y_new - y;
          dense[1] = h * k[0] - dense[0];
          dense[2] = 2.0 * dense[0] - h * (k[kStages] + k[0]);
          for (int r = 0; r < 4; ++r) {
            Combination comb;
            for (int j = 0; j < kStagesExtended; ++j) comb.add(k[j], h * kD[r][j]);
            combine(dense[3 + r], nullptr, comb);
          }
          while (next < times.size() && times[next] <= t_new) {
            if (times[next] == t_new) {
              observer(next, y_new);
            } else {
              const double x = (times[next] - t) / h;
              stage.setZero();
              for (int i = 0; i < 7; ++i) {
                stage += dense[6 - i];
                stage *= (i % 2 == 0) ? x : (1.0 - x);
              }
              stage += y;
              observer(next, stage);
            }
            ++next;
          }
        }

        t = t_new;
        y.swap(y_new);
        k[0].swap(k[kStages]);
        h = h_next;
        break;
      }
      ++st.rejected;
      rejected_once = true;
      h *= std::max(kMinFactor, kSafety * std::pow(err, kErrorExponent));
    }
  }
}

}  // namespace chaoskraus
