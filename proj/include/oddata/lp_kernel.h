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

#ifndef ODDATA_LP_KERNEL_H_
#define ODDATA_LP_KERNEL_H_

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "oddata/instance.h"
#include "oddata/precedence_graph.h"

namespace oddata {

// Sentinel for "no makespan cap".
inline constexpr Time kNoCap = std::numeric_limits<Time>::max();

// Processing order on every machine.
class Ordering {
 public:
  Ordering() = default;
  explicit Ordering(std::vector<std::vector<TaskRef>> per_machine)
      : sequences_(std::move(per_machine)) {}

  int machines() const { return static_cast<int>(sequences_.size()); }
  const std::vector<TaskRef>& sequence(int machine) const {
    return sequences_[machine];
  }
  // Arcs between consecutive positive-duration tasks on each machine (a
  // zero-duration task never occupies its machine). Throws
  // std::invalid_argument if the ordering does not cover `inst` exactly.
  std::vector<PrecedenceEdge> arcs(const JssInstance& inst) const;

  friend bool operator==(const Ordering&, const Ordering&) = default;

 private:
  std::vector<std::vector<TaskRef>> sequences_;
};

// Earliest (componentwise minimal) start times under the job chains and the
// machine ordering; nullopt when the precedences contain a cycle.
std::optional<Schedule> earliest_start_schedule(const JssInstance& inst,
                                                const Ordering& ord);

// Same, for an arbitrary set of extra machine arcs.
std::optional<Schedule> earliest_starts(const JssInstance& inst,
                                        std::span<const PrecedenceEdge> arcs);

struct ProximalSolution {
  Schedule schedule;
  Time distance = 0;  // L1 distance to the reference
};

// Minimizes sum |s - reference| over integral starts satisfying the job
// chains, the given arcs, s >= 0 and s + d <= makespan_cap. Among minimizers
// returns the componentwise (hence lexicographically) smallest one. nullopt
// when the system is infeasible (cyclic arcs or cap too small).
std::optional<ProximalSolution> proximal_starts(
    const JssInstance& inst, std::span<const PrecedenceEdge> arcs,
    const Schedule& reference, Time makespan_cap);

std::optional<Schedule> l1_proximal_schedule(const JssInstance& inst,
                                             const Ordering& ord,
                                             const Schedule& reference,
                                             Time makespan_cap);

}  // namespace oddata

#endif  // ODDATA_LP_KERNEL_H_
