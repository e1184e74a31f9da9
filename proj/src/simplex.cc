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

#include "simplex.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oddata::internal {

namespace {
constexpr double kEps = 1e-9;
constexpr int kDegenerateRunBeforeBland = 32;
}  // namespace

LpSolution solve_simplex(StandardFormLp lp) {
  const int m = lp.rows;
  const int n = lp.cols;
  if (static_cast<int>(lp.basis.size()) != m ||
      static_cast<int>(lp.b.size()) != m ||
      static_cast<int>(lp.c.size()) != n) {
    throw std::invalid_argument("solve_simplex: inconsistent dimensions");
  }
  std::vector<double>& t = lp.a;
  std::vector<double>& rhs = lp.b;
  std::vector<int>& basis = lp.basis;
  auto cell = [&](int r, int col) -> double& {
    return t[static_cast<size_t>(r) * n + col];
  };

  // Reduced costs: c_j - c_B' A_j (A is B^-1 A since B = I initially).
  std::vector<double> reduced(lp.c);
  double objective = 0.0;
  for (int r = 0; r < m; ++r) {
    const double cb = lp.c[basis[r]];
    if (cb == 0.0) continue;
    for (int col = 0; col < n; ++col) reduced[col] -= cb * cell(r, col);
    objective += cb * rhs[r];
  }

  int degenerate_run = 0;
  bool bland = false;
  const long max_iterations = 50L * (m + n) + 1000;
  for (long iter = 0;; ++iter) {
    if (iter > max_iterations) {
      throw std::runtime_error("solve_simplex: iteration limit exceeded");
    }
    int enter = -1;
    if (bland) {
      for (int col = 0; col < n; ++col) {
        if (reduced[col] < -kEps) {
          enter = col;
          break;
        }
      }
    } else {
      double most_negative = -kEps;
      for (int col = 0; col < n; ++col) {
        if (reduced[col] < most_negative) {
          most_negative = reduced[col];
          enter = col;
        }
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      const double coef = cell(r, enter);
      if (coef <= kEps) continue;
      const double ratio = rhs[r] / coef;
      if (ratio < best_ratio - kEps ||
          (ratio <= best_ratio + kEps && leave >= 0 &&
           basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) {
      LpSolution out;
      out.bounded = false;
      return out;
    }

    if (best_ratio <= kEps) {
      if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
    }

    const double pivot = cell(leave, enter);
    for (int col = 0; col < n; ++col) cell(leave, col) /= pivot;
    rhs[leave] /= pivot;
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double factor = cell(r, enter);
      if (factor == 0.0) continue;
      for (int col = 0; col < n; ++col) {
        cell(r, col) -= factor * cell(leave, col);
      }
      rhs[r] -= factor * rhs[leave];
    }
    const double rfactor = reduced[enter];
    for (int col = 0; col < n; ++col) {
      reduced[col] -= rfactor * cell(leave, col);
    }
    objective += rfactor * rhs[leave];
    basis[leave] = enter;
  }

  LpSolution out;
  out.objective = objective;
  out.z.assign(n, 0.0);
  for (int r = 0; r < m; ++r) out.z[basis[r]] = rhs[r];
  return out;
}

}  // namespace oddata::internal
