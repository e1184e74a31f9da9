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

#ifndef ODDATA_SRC_SIMPLEX_H_
#define ODDATA_SRC_SIMPLEX_H_

#include <vector>

namespace oddata::internal {

// Dense standard-form LP: minimize c'z subject to A z = b, z >= 0, with
// b >= 0 and basis[i] naming a column equal to the i-th unit vector, so the
// starting basis is primal feasible and no phase one is needed.
struct StandardFormLp {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major rows x cols
  std::vector<double> b;
  std::vector<double> c;
  std::vector<int> basis;

  double& at(int r, int col) { return a[static_cast<size_t>(r) * cols + col]; }
};

struct LpSolution {
  bool bounded = true;
  double objective = 0.0;
  std::vector<double> z;
};

// Primal simplex on the tableau. Dantzig pricing, falling back to Bland's
// rule after a run of degenerate pivots.
LpSolution solve_simplex(StandardFormLp lp);

}  // namespace oddata::internal

#endif  // ODDATA_SRC_SIMPLEX_H_
