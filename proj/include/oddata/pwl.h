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

#ifndef ODDATA_PWL_H_
#define ODDATA_PWL_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "oddata/dataset.h"

namespace oddata {

// Continuous piecewise linear function interpolating (x_i, v_i) on strictly
// ascending breakpoints.
class PwlFunction {
 public:
  // Throws std::invalid_argument unless there are >= 2 finite, strictly
  // ascending breakpoints with one value each.
  PwlFunction(std::vector<double> breakpoints, std::vector<double> values);

  int pieces() const { return static_cast<int>(x_.size()) - 1; }
  double slope(int piece) const;
  double width(int piece) const { return x_[piece + 1] - x_[piece]; }
  double max_width() const;
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  double operator()(double x) const;

  const std::vector<double>& breakpoints() const { return x_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> x_;
  std::vector<double> v_;
};

// Sum of |L_{k+1} - L_k| over interior breakpoints.
double slope_total_variation(const PwlFunction& f);

struct ApproximationBound {
  double bound = 0.0;   // h_max^2 / 2 * slope_total_variation(f_p)
  double actual = 0.0;  // exact |f_p - f_q|_1
};

// Throws std::invalid_argument unless f_q may stand in for f_p: same domain,
// no more pieces, every f_q piece overlaps at most two f_p pieces and lies
// on the line of one of them.
void check_admissible(const PwlFunction& fp, const PwlFunction& fq);

// h_max is the widest piece of f_p.
ApproximationBound approximation_bound(const PwlFunction& fp,
                                       const PwlFunction& fq);

// Exact L1 distance over the common domain.
double l1_distance(const PwlFunction& f, const PwlFunction& g);

struct PwlPair {
  PwlFunction fp;
  PwlFunction fq;
};

// Random f_p with 1..max_pieces pieces, and f_q obtained by deleting a
// random set of removable pieces, letting each neighbor extend to the
// intersection of their lines.
PwlPair random_admissible_pair(std::uint64_t seed, int max_pieces = 8);

struct ReluCapacity {
  double min_size = 0.0;                       // k p^(1/k) / 2 - 1
  std::function<double(double)> max_pieces;    // s -> (2s/k)^k
};
ReluCapacity relu_capacity(double pieces, int k);

// binomial(n + ceil(3L/eps), n). A ratio within 1e-9 of an integer counts
// as that integer. Throws std::overflow_error past 2^64 - 1.
std::uint64_t lipschitz_capacity(int n, double lipschitz, double eps);

// Sum over start-time coordinates of the slope variation of the solution
// trajectory against the family index.
double trajectory_slope_variation(const Dataset& ds);

}  // namespace oddata

#endif  // ODDATA_PWL_H_
