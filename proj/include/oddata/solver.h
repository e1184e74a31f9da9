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

#ifndef ODDATA_SOLVER_H_
#define ODDATA_SOLVER_H_

#include <chrono>
#include <cstdint>
#include <optional>

#include "oddata/instance.h"
#include "oddata/lp_kernel.h"

namespace oddata {

using Seconds = std::chrono::duration<double>;

struct SolveBudget {
  Seconds time_limit{60.0};
  std::optional<std::int64_t> node_limit;
  std::uint64_t seed = 0;

  // Effectively unlimited; only the tree size bounds the search.
  static SolveBudget exhaustive(std::uint64_t seed = 0) {
    return {Seconds(1e9), std::nullopt, seed};
  }
};

struct SolveResult {
  Schedule schedule;
  // Makespan for solve_makespan, L1 distance for solve_proximal.
  Time objective = 0;
  // True when the search tree was exhausted.
  bool optimal = false;
  std::int64_t nodes_explored = 0;
  Seconds elapsed{0.0};
};

// Disjunctive branch-and-bound on makespan. The seed permutes branching
// among equally ranked pairs and the order of the two children, so different
// seeds can return different co-optimal schedules. `hotstart`, when given,
// must be feasible and seeds the incumbent. Throws std::invalid_argument for
// an infeasible hotstart.
SolveResult solve_makespan(const JssInstance& inst, const SolveBudget& budget,
                           const std::optional<Schedule>& hotstart = {});

// Branch-and-bound over machine orderings for the schedule closest in L1 to
// `reference` among feasible schedules with makespan <= makespan_cap. Each
// node solves the proximal LP with the disjunctions fixed so far; the node's
// LP optimum is a valid lower bound. nullopt when no schedule meets the cap.
// `hotstart`, when given, must be feasible and respect the cap.
std::optional<SolveResult> solve_proximal(
    const JssInstance& inst, const Schedule& reference, Time makespan_cap,
    const SolveBudget& budget, const std::optional<Schedule>& hotstart = {});

// Enumerates every machine ordering (at most 9 tasks). Returns the minimal
// makespan earliest-start schedule, lexicographically smallest on ties.
Schedule brute_force_optimal(const JssInstance& inst);

}  // namespace oddata

#endif  // ODDATA_SOLVER_H_
