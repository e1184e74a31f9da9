// Copyright 2026 The oddata Authors
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

#include "oddata/pwl.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace oddata {
namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Line {
  double slope;
  double at_zero;
  double operator()(double x) const { return slope * x + at_zero; }
};

Line line_of(const PwlFunction& f, int piece) {
  const double s = f.slope(piece);
  return {s, f.values()[piece] - s * f.breakpoints()[piece]};
}

// Integral of |g| for g affine on [a, b] with g(a) = ga, g(b) = gb.
double abs_affine_integral(double a, double b, double ga, double gb) {
  const double w = b - a;
  if (w <= 0.0) return 0.0;
  if ((ga >= 0.0 && gb >= 0.0) || (ga <= 0.0 && gb <= 0.0)) {
    return 0.5 * w * std::abs(ga + gb);
  }
  const double root = w * ga / (ga - gb);  // offset of the sign change
  return 0.5 * (std::abs(ga) * root + std::abs(gb) * (w - root));
}

}  // namespace

PwlFunction::PwlFunction(std::vector<double> breakpoints, std::vector<double> values)
    : x_(std::move(breakpoints)), v_(std::move(values)) {
  if (x_.size() < 2 || x_.size() != v_.size()) {
    throw std::invalid_argument("PwlFunction needs >= 2 breakpoints with one value each");
  }
  for (size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(v_[i])) {
      throw std::invalid_argument("PwlFunction: non-finite breakpoint or value");
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      throw std::invalid_argument("PwlFunction: breakpoints must be strictly ascending");
    }
  }
}

double PwlFunction::slope(int piece) const {
  return (v_[piece + 1] - v_[piece]) / (x_[piece + 1] - x_[piece]);
}

double PwlFunction::max_width() const {
  double w = 0.0;
  for (int k = 0; k < pieces(); ++k) w = std::max(w, width(k));
  return w;
}

double PwlFunction::operator()(double x) const {
  if (x <= x_.front()) return v_.front() + slope(0) * (x - x_.front());
  if (x >= x_.back()) return v_.back() + slope(pieces() - 1) * (x - x_.back());
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const int k = static_cast<int>(it - x_.begin()) - 1;
  return v_[k] + slope(k) * (x - x_[k]);
}

double slope_total_variation(const PwlFunction& f) {
  double tv = 0.0;
  for (int k = 0; k + 1 < f.pieces(); ++k) tv += std::abs(f.slope(k + 1) - f.slope(k));
  return tv;
}

double l1_distance(const PwlFunction& f, const PwlFunction& g) {
  const double lo = std::max(f.lo(), g.lo());
  const double hi = std::min(f.hi(), g.hi());
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts = {lo, hi};
  for (double x : f.breakpoints()) if (x > lo && x < hi) cuts.push_back(x);
  for (double x : g.breakpoints()) if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    total += abs_affine_integral(a, b, f(a) - g(a), f(b) - g(b));
  }
  return total;
}

void check_admissible(const PwlFunction& fp, const PwlFunction& fq) {
  if (!close(fp.lo(), fq.lo()) || !close(fp.hi(), fq.hi())) {
    throw std::invalid_argument("approximant must share the domain of f_p");
  }
  if (fq.pieces() > fp.pieces()) {
    throw std::invalid_argument("approximant has more pieces than f_p");
  }
  const auto& xp = fp.breakpoints();
  const auto& xq = fq.breakpoints();
  for (int q = 0; q < fq.pieces(); ++q) {
    const double a = xq[q], b = xq[q + 1];
    std::vector<int> overlapped;
    for (int k = 0; k < fp.pieces(); ++k) {
      const double lo = std::max(a, xp[k]);
      const double hi = std::min(b, xp[k + 1]);
      if (hi - lo > 1e-12 * std::max(1.0, b - a)) overlapped.push_back(k);
    }
    if (overlapped.size() > 2) {
      throw std::invalid_argument("approximant piece " + std::to_string(q) +
                                  " overlaps more than two pieces of f_p");
    }
    const Line lq = line_of(fq, q);
    const bool coincides = std::any_of(overlapped.begin(), overlapped.end(), [&](int k) {
      const Line lk = line_of(fp, k);
      return close(lk.slope, lq.slope) && close(lk(a), lq(a)) && close(lk(b), lq(b));
    });
    if (!coincides) {
      throw std::invalid_argument("approximant piece " + std::to_string(q) +
                                  " does not lie on any piece of f_p it overlaps");
    }
  }
}

ApproximationBound approximation_bound(const PwlFunction& fp, const PwlFunction& fq) {
  check_admissible(fp, fq);
  const double h = fp.max_width();
  return {0.5 * h * h * slope_total_variation(fp), l1_distance(fp, fq)};
}

PwlPair random_admissible_pair(std::uint64_t seed, int max_pieces) {
  if (max_pieces < 1) throw std::invalid_argument("max_pieces must be >= 1");
  std::mt19937_64 rng(seed);
  const int p = std::uniform_int_distribution<int>(1, max_pieces)(rng);
  std::uniform_real_distribution<double> width(0.1, 2.0);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  std::vector<double> x = {std::uniform_real_distribution<double>(-3.0, 3.0)(rng)};
  std::vector<double> v = {value(rng)};
  for (int k = 0; k < p; ++k) {
    x.push_back(x.back() + width(rng));
    v.push_back(value(rng));
  }
  const PwlFunction fp(x, v);

  // A piece can go when its neighbors' lines meet inside it: always at the
  // ends, and in the interior when f_p bends the same way on both sides.
  auto removable = [&](int r) {
    if (r == 0 || r == p - 1) return p > 1;
    const double left = fp.slope(r) - fp.slope(r - 1);
    const double right = fp.slope(r + 1) - fp.slope(r);
    return (left > 0 && right > 0) || (left < 0 && right < 0);
  };
  std::vector<int> candidates;
  for (int r = 0; r < p; ++r) if (removable(r)) candidates.push_back(r);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::set<int> removed;
  std::bernoulli_distribution take(0.6);
  for (int r : candidates) {
    // Gaps of three keep every surviving piece spanning at most two of f_p.
    const bool spaced = std::all_of(removed.begin(), removed.end(),
                                    [&](int o) { return std::abs(o - r) >= 3; });
    if (spaced && take(rng)) removed.insert(r);
  }

  std::vector<int> kept;
  for (int r = 0; r < p; ++r) if (!removed.count(r)) kept.push_back(r);
  std::vector<double> qx = {x.front()};
  std::vector<double> qv = {line_of(fp, kept.front())(x.front())};
  for (size_t i = 1; i < kept.size(); ++i) {
    const int left = kept[i - 1];
    const int right = kept[i];
    if (right == left + 1) {
      qx.push_back(x[right]);
      qv.push_back(v[right]);
      continue;
    }
    // Piece left + 1 is gone; the neighbors meet inside it.
    const Line a = line_of(fp, left);
    const Line b = line_of(fp, right);
    const double c = std::clamp((b.at_zero - a.at_zero) / (a.slope - b.slope),
                                x[left + 1], x[right]);
    qx.push_back(c);
    qv.push_back(a(c));
  }
  qx.push_back(x.back());
  qv.push_back(line_of(fp, kept.back())(x.back()));
  return {fp, PwlFunction(qx, qv)};
}

ReluCapacity relu_capacity(double pieces, int k) {
  if (!(pieces >= 1.0) || k < 1) {
    throw std::invalid_argument("relu_capacity needs p >= 1 and k >= 1");
  }
  ReluCapacity c;
  c.min_size = 0.5 * k * std::pow(pieces, 1.0 / k) - 1.0;
  c.max_pieces = [k](double s) { return std::pow(2.0 * s / k, k); };
  return c;
}

std::uint64_t lipschitz_capacity(int n, double lipschitz, double eps) {
  if (n < 1 || !(lipschitz >= 0.0) || !(eps > 0.0) || !std::isfinite(lipschitz)) {
    throw std::invalid_argument("lipschitz_capacity needs n >= 1, L >= 0, eps > 0");
  }
  const double q = 3.0 * lipschitz / eps;
  if (!std::isfinite(q) || q > 1e18) throw std::overflow_error("3L/eps is too large");
  const double nearest = std::round(q);
  const double m_real = close(q, nearest) ? nearest : std::ceil(q);
  const auto m = static_cast<std::uint64_t>(m_real);
  // binomial(n + m, n) = prod_{i=1..min} (n + m - min + i) / i, exact at each step.
  const std::uint64_t r = std::min<std::uint64_t>(m, static_cast<std::uint64_t>(n));
  const std::uint64_t top = m + static_cast<std::uint64_t>(n);
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    const std::uint64_t factor = top - r + i;
    const std::uint64_t g = std::gcd(acc, i);
    const std::uint64_t a = acc / g;
    const std::uint64_t b = factor / (i / g);
    if (a > std::numeric_limits<std::uint64_t>::max() / b) {
      throw std::overflow_error("lipschitz_capacity overflows 64 bits");
    }
    acc = a * b;
  }
  return acc;
}

double trajectory_slope_variation(const Dataset& ds) {
  if (ds.entries.size() < 2) {
    throw std::invalid_argument("trajectory needs at least two entries");
  }
  const size_t n = ds.entries.size();
  const size_t dims = ds.entries[0].solution.starts().size();
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
  double total = 0.0;
  for (size_t c = 0; c < dims; ++c) {
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) {
      v[i] = static_cast<double>(ds.entries[i].solution.starts()[c]);
    }
    total += slope_total_variation(PwlFunction(x, std::move(v)));
  }
  return total;
}

}  // namespace oddata
