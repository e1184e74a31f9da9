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

#ifndef ODDATA_PRECEDENCE_GRAPH_H_
#define ODDATA_PRECEDENCE_GRAPH_H_

#include <optional>
#include <utility>
#include <vector>

#include "oddata/instance.h"

namespace oddata {

// Arc `from -> to` meaning start[to] >= start[from] + duration[from].
struct PrecedenceEdge {
  int from = 0;
  int to = 0;

  friend bool operator==(const PrecedenceEdge&, const PrecedenceEdge&) = default;
};

// Task-level precedence DAG over an instance: job chains plus any number of
// added machine arcs. Edge weights are the duration of the source task.
class PrecedenceGraph {
 public:
  explicit PrecedenceGraph(const JssInstance& inst);

  int size() const { return static_cast<int>(succ_.size()); }
  const std::vector<int>& successors(int v) const { return succ_[v]; }
  const std::vector<int>& predecessors(int v) const { return pred_[v]; }
  Time duration(int v) const { return duration_[v]; }

  void add(PrecedenceEdge e);
  // Removes the most recently added arc; must match `e`.
  void pop(PrecedenceEdge e);

  // True when `to` is reachable from `from` (from == to counts).
  bool reaches(int from, int to) const;

  // Kahn order; nullopt when the graph has a cycle.
  std::optional<std::vector<int>> topological_order() const;
  // Earliest start of every task (longest path from a zero source).
  std::optional<std::vector<Time>> heads() const;
  // Longest path from the start of each task to the sink, including its
  // own duration.
  std::optional<std::vector<Time>> tails() const;

  std::vector<PrecedenceEdge> edges() const;

 private:
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<int>> pred_;
  std::vector<Time> duration_;
};

std::vector<PrecedenceEdge> job_chain_edges(const JssInstance& inst);

}  // namespace oddata

#endif  // ODDATA_PRECEDENCE_GRAPH_H_
