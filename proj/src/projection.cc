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

#include "oddata/projection.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "oddata/precedence_graph.h"

namespace oddata {
namespace {

void check_prediction(const JssInstance& inst, std::span<const double> p) {
  if (static_cast<int>(p.size()) != inst.task_count()) {
    throw std::invalid_argument("prediction has " + std::to_string(p.size()) +
                                " values, instance has " +
                                std::to_string(inst.task_count()) + " tasks");
  }
  for (double v : p) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("prediction contains a non-finite value");
    }
  }
}

// Flat task indices on each machine in predicted order.
std::vector<std::vector<int>> sorted_tasks(const JssInstance& inst,
                                           std::span<const double> p) {
  std::vector<std::vector<int>> out(inst.machines());
  for (int m = 0; m < inst.machines(); ++m) {
    out[m] = inst.tasks_on_machine(m);
    // Flat index order is (job, step) order.
    std::stable_sort(out[m].begin(), out[m].end(),
                     [&](int a, int b) { return p[a] < p[b]; });
  }
  return out;
}

Ordering to_ordering(const JssInstance& inst,
                     const std::vector<std::vector<int>>& seqs) {
  std::vector<std::vector<TaskRef>> refs(seqs.size());
  for (size_t m = 0; m < seqs.size(); ++m) {
    for (int idx : seqs[m]) refs[m].push_back(inst.task(idx));
  }
  return Ordering(std::move(refs));
}

// Orients every positive-duration same-machine pair without creating a
// cycle, then reorders each machine's positive tasks topologically. Zero
// duration tasks keep their slots.
std::vector<std::vector<int>> repair(const JssInstance& inst,
                                     std::span<const double> p,
                                     std::vector<std::vector<int>> seqs) {
  std::vector<int> rank(inst.task_count());
  std::vector<std::tuple<int, int, int>> pairs;  // (rank(a), rank(b)), a, b
  {
    std::vector<int> all(inst.task_count());
    for (int i = 0; i < inst.task_count(); ++i) all[i] = i;
    std::stable_sort(all.begin(), all.end(),
                     [&](int a, int b) { return p[a] < p[b]; });
    for (int r = 0; r < inst.task_count(); ++r) rank[all[r]] = r;
  }
  for (const auto& seq : seqs) {
    for (size_t x = 0; x < seq.size(); ++x) {
      if (inst.duration(seq[x]) == 0) continue;
      for (size_t y = x + 1; y < seq.size(); ++y) {
        if (inst.duration(seq[y]) == 0) continue;
        pairs.emplace_back(rank[seq[x]], seq[x], seq[y]);
      }
    }
  }
  // seq is in predicted order, so within a pair the first task comes first.
  std::sort(pairs.begin(), pairs.end(), [&](const auto& l, const auto& r) {
    const int lb = rank[std::get<2>(l)];
    const int rb = rank[std::get<2>(r)];
    return std::tie(std::get<0>(l), lb) < std::tie(std::get<0>(r), rb);
  });

  PrecedenceGraph graph(inst);
  for (const auto& [r, a, b] : pairs) {
    if (graph.reaches(b, a)) {
      graph.add({b, a});
    } else {
      graph.add({a, b});
    }
  }
  const auto topo = graph.topological_order();
  if (!topo) throw std::logic_error("cycle repair left a cycle");
  std::vector<int> pos(inst.task_count());
  for (size_t k = 0; k < topo->size(); ++k) pos[(*topo)[k]] = static_cast<int>(k);

  for (auto& seq : seqs) {
    std::vector<int> positive;
    for (int idx : seq) {
      if (inst.duration(idx) > 0) positive.push_back(idx);
    }
    std::sort(positive.begin(), positive.end(),
              [&](int a, int b) { return pos[a] < pos[b]; });
    size_t next = 0;
    for (int& idx : seq) {
      if (inst.duration(idx) > 0) idx = positive[next++];
    }
  }
  return seqs;
}

}  // namespace

Ordering ordering_from_prediction(const JssInstance& inst,
                                  std::span<const double> predicted) {
  check_prediction(inst, predicted);
  return to_ordering(inst, sorted_tasks(inst, predicted));
}

Schedule project_feasible(const JssInstance& inst,
                          std::span<const double> predicted) {
  check_prediction(inst, predicted);
  auto seqs = sorted_tasks(inst, predicted);
  if (auto s = earliest_start_schedule(inst, to_ordering(inst, seqs))) {
    return *s;
  }
  seqs = repair(inst, predicted, std::move(seqs));
  auto s = earliest_start_schedule(inst, to_ordering(inst, seqs));
  if (!s) throw std::logic_error("repaired ordering is cyclic");
  return *s;
}

double projection_distance(const JssInstance& inst,
                           std::span<const double> predicted) {
  const Schedule s = project_feasible(inst, predicted);
  double d = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    d += std::abs(static_cast<double>(s[static_cast<int>(i)]) - predicted[i]);
  }
  return d;
}

}  // namespace oddata
