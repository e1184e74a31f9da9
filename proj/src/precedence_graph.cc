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

#include "oddata/precedence_graph.h"

#include <algorithm>
#include <stdexcept>

namespace oddata {

PrecedenceGraph::PrecedenceGraph(const JssInstance& inst)
    : succ_(inst.task_count()),
      pred_(inst.task_count()),
      duration_(inst.durations()) {
  for (const PrecedenceEdge& e : job_chain_edges(inst)) add(e);
}

void PrecedenceGraph::add(PrecedenceEdge e) {
  succ_[e.from].push_back(e.to);
  pred_[e.to].push_back(e.from);
}

void PrecedenceGraph::pop(PrecedenceEdge e) {
  if (succ_[e.from].empty() || succ_[e.from].back() != e.to ||
      pred_[e.to].empty() || pred_[e.to].back() != e.from) {
    throw std::logic_error("PrecedenceGraph::pop out of order");
  }
  succ_[e.from].pop_back();
  pred_[e.to].pop_back();
}

bool PrecedenceGraph::reaches(int from, int to) const {
  if (from == to) return true;
  std::vector<char> seen(size(), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : succ_[v]) {
      if (w == to) return true;
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

std::optional<std::vector<int>> PrecedenceGraph::topological_order() const {
  const int n = size();
  std::vector<int> indegree(n);
  for (int v = 0; v < n; ++v) indegree[v] = static_cast<int>(pred_[v].size());
  std::vector<int> order;
  order.reserve(n);
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (size_t i = 0; i < order.size(); ++i) {
    for (int w : succ_[order[i]]) {
      if (--indegree[w] == 0) order.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

std::optional<std::vector<Time>> PrecedenceGraph::heads() const {
  auto order = topological_order();
  if (!order) return std::nullopt;
  std::vector<Time> head(size(), 0);
  for (int v : *order) {
    for (int w : succ_[v]) head[w] = std::max(head[w], head[v] + duration_[v]);
  }
  return head;
}

std::optional<std::vector<Time>> PrecedenceGraph::tails() const {
  auto order = topological_order();
  if (!order) return std::nullopt;
  std::vector<Time> tail(duration_);
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    const int v = *it;
    for (int w : succ_[v]) tail[v] = std::max(tail[v], duration_[v] + tail[w]);
  }
  return tail;
}

std::vector<PrecedenceEdge> PrecedenceGraph::edges() const {
  std::vector<PrecedenceEdge> out;
  for (int v = 0; v < size(); ++v) {
    for (int w : succ_[v]) out.push_back({v, w});
  }
  return out;
}

std::vector<PrecedenceEdge> job_chain_edges(const JssInstance& inst) {
  std::vector<PrecedenceEdge> out;
  for (int j = 0; j < inst.jobs(); ++j) {
    for (int t = 0; t + 1 < inst.steps(); ++t) {
      out.push_back({inst.index(j, t), inst.index(j, t + 1)});
    }
  }
  return out;
}

}  // namespace oddata
