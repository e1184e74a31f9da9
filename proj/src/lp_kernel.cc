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

#include "oddata/lp_kernel.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "simplex.h"

namespace oddata {

std::vector<PrecedenceEdge> Ordering::arcs(const JssInstance& inst) const {
  if (machines() != inst.machines()) {
    throw std::invalid_argument("ordering covers " +
                                std::to_string(machines()) +
                                " machines, instance has " +
                                std::to_string(inst.machines()));
  }
  std::vector<PrecedenceEdge> out;
  std::vector<char> seen(inst.task_count(), 0);
  for (int m = 0; m < machines(); ++m) {
    const auto& seq = sequences_[m];
    int last = -1;
    if (static_cast<int>(seq.size()) != inst.jobs()) {
      throw std::invalid_argument("machine " + std::to_string(m) +
                                  " sequence has wrong length");
    }
    for (size_t k = 0; k < seq.size(); ++k) {
      const TaskRef ref = seq[k];
      if (ref.job < 0 || ref.job >= inst.jobs() || ref.step < 0 ||
          ref.step >= inst.steps()) {
        throw std::invalid_argument("ordering references unknown task");
      }
      const int idx = inst.index(ref);
      if (inst.machine(idx) != m || seen[idx]) {
        throw std::invalid_argument("machine " + std::to_string(m) +
                                    " sequence is not a permutation of its "
                                    "tasks");
      }
      seen[idx] = 1;
      if (inst.duration(idx) == 0) continue;
      if (last >= 0) out.push_back({last, idx});
      last = idx;
    }
  }
  return out;
}

std::optional<Schedule> earliest_starts(const JssInstance& inst,
                                        std::span<const PrecedenceEdge> arcs) {
  PrecedenceGraph graph(inst);
  for (const PrecedenceEdge& e : arcs) graph.add(e);
  auto head = graph.heads();
  if (!head) return std::nullopt;
  return Schedule(inst.jobs(), inst.steps(), std::move(*head));
}

std::optional<Schedule> earliest_start_schedule(const JssInstance& inst,
                                                const Ordering& ord) {
  const auto arcs = ord.arcs(inst);
  return earliest_starts(inst, arcs);
}

std::optional<ProximalSolution> proximal_starts(
    const JssInstance& inst, std::span<const PrecedenceEdge> arcs,
    const Schedule& reference, Time makespan_cap) {
  if (!reference.matches(inst)) {
    throw std::invalid_argument("reference schedule shape mismatch");
  }
  PrecedenceGraph graph(inst);
  for (const PrecedenceEdge& e : arcs) graph.add(e);
  auto head = graph.heads();
  if (!head) return std::nullopt;
  const std::vector<Time> lo = std::move(*head);
  const std::vector<Time> tail = *graph.tails();
  const int n = inst.task_count();

  Time cap = makespan_cap;
  if (cap == kNoCap) {
    // Some minimizer lies below lo + max(reference); capping there loses
    // nothing and keeps every variable bounded.
    Time earliest = 0;
    for (int v = 0; v < n; ++v) earliest = std::max(earliest, lo[v] + tail[v]);
    Time ref_max = 0;
    for (Time r : reference.starts()) ref_max = std::max(ref_max, r);
    cap = earliest + ref_max;
  }
  std::vector<Time> upper(n);
  for (int v = 0; v < n; ++v) {
    upper[v] = cap - tail[v] - lo[v];
    if (upper[v] < 0) return std::nullopt;
  }

  // Variables (shifted x = s - lo):
  //   x[0,n) | p[n,2n) | q[2n,3n) | edge slack | bound slack
  // Rows: x_a - x_b + e = lo_b - lo_a - d_a for each arc a -> b,
  //       +-(x_i - p_i + q_i) = +-(r_i - lo_i),
  //       x_i + y_i = upper_i.
  // The matrix is totally unimodular, so every tableau stays integral.
  const std::vector<PrecedenceEdge> all_edges = graph.edges();
  const int edges = static_cast<int>(all_edges.size());
  internal::StandardFormLp lp;
  lp.rows = edges + 2 * n;
  lp.cols = 3 * n + edges + n;
  lp.a.assign(static_cast<size_t>(lp.rows) * lp.cols, 0.0);
  lp.b.assign(lp.rows, 0.0);
  lp.c.assign(lp.cols, 0.0);
  lp.basis.assign(lp.rows, 0);

  Time weight = 1;
  for (Time u : upper) weight += u;
  for (int v = 0; v < n; ++v) {
    lp.c[v] = 1.0;
    lp.c[n + v] = static_cast<double>(weight);
    lp.c[2 * n + v] = static_cast<double>(weight);
  }
  int row = 0;
  for (int k = 0; k < edges; ++k, ++row) {
    const auto [a, b] = all_edges[k];
    lp.at(row, a) += 1.0;
    lp.at(row, b) -= 1.0;
    lp.at(row, 3 * n + k) = 1.0;
    lp.b[row] = static_cast<double>(lo[b] - lo[a] - graph.duration(a));
    lp.basis[row] = 3 * n + k;
  }
  for (int v = 0; v < n; ++v, ++row) {
    const Time h = reference[v] - lo[v];
    const double sign = h >= 0 ? 1.0 : -1.0;
    lp.at(row, v) = sign;
    lp.at(row, n + v) = -sign;
    lp.at(row, 2 * n + v) = sign;
    lp.b[row] = sign * static_cast<double>(h);
    lp.basis[row] = h >= 0 ? 2 * n + v : n + v;
  }
  for (int v = 0; v < n; ++v, ++row) {
    lp.at(row, v) = 1.0;
    lp.at(row, 3 * n + edges + v) = 1.0;
    lp.b[row] = static_cast<double>(upper[v]);
    lp.basis[row] = 3 * n + edges + v;
  }

  const internal::LpSolution sol = internal::solve_simplex(std::move(lp));
  if (!sol.bounded) {
    throw std::logic_error("proximal LP unbounded despite bounded variables");
  }
  std::vector<Time> starts(n);
  Time distance = 0;
  for (int v = 0; v < n; ++v) {
    starts[v] = lo[v] + static_cast<Time>(std::llround(sol.z[v]));
    distance += starts[v] > reference[v] ? starts[v] - reference[v]
                                         : reference[v] - starts[v];
  }
  return ProximalSolution{Schedule(inst.jobs(), inst.steps(), std::move(starts)),
                          distance};
}

std::optional<Schedule> l1_proximal_schedule(const JssInstance& inst,
                                             const Ordering& ord,
                                             const Schedule& reference,
                                             Time makespan_cap) {
  const auto arcs = ord.arcs(inst);
  auto sol = proximal_starts(inst, arcs, reference, makespan_cap);
  if (!sol) return std::nullopt;
  return std::move(sol->schedule);
}

}  // namespace oddata
