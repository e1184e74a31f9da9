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

#include "oddata/solver.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "oddata/precedence_graph.h"

namespace oddata {

namespace {

using Clock = std::chrono::steady_clock;
constexpr Time kInfinity = std::numeric_limits<Time>::max();

class BudgetClock {
 public:
  explicit BudgetClock(const SolveBudget& budget)
      : start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::min(budget.time_limit, Seconds(1e9)))),
        node_limit_(budget.node_limit) {
    if (budget.time_limit <= Seconds(0)) {
      throw std::invalid_argument("time_limit must be positive");
    }
  }

  // Counts a node; false once the budget is spent.
  bool admit() {
    if (node_limit_ && nodes_ >= *node_limit_) return false;
    // Checking the clock every node is cheap next to the LP/longest path.
    if (Clock::now() >= deadline_) return false;
    ++nodes_;
    return true;
  }
  std::int64_t nodes() const { return nodes_; }
  Seconds elapsed() const { return Clock::now() - start_; }

 private:
  Clock::time_point start_;
  Clock::time_point deadline_;
  std::optional<std::int64_t> node_limit_;
  std::int64_t nodes_ = 0;
};

// Same-machine pairs with positive durations: the disjunctions that matter.
struct Disjunctions {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> id;  // n * n lookup, -1 when not a pair
  int n = 0;

  explicit Disjunctions(const JssInstance& inst) : n(inst.task_count()) {
    id.assign(static_cast<size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (inst.machine(a) != inst.machine(b)) continue;
        if (inst.duration(a) == 0 || inst.duration(b) == 0) continue;
        id[a * n + b] = id[b * n + a] = static_cast<int>(pairs.size());
        pairs.emplace_back(a, b);
      }
    }
  }
};

bool intervals_overlap(Time s1, Time d1, Time s2, Time d2) {
  return s1 < s2 + d2 && s2 < s1 + d1;
}

class MakespanSearch {
 public:
  MakespanSearch(const JssInstance& inst, const SolveBudget& budget)
      : inst_(inst), graph_(inst), disj_(inst), clock_(budget) {
    std::mt19937_64 rng(budget.seed);
    priority_.resize(disj_.pairs.size());
    flip_.resize(disj_.pairs.size());
    for (size_t k = 0; k < disj_.pairs.size(); ++k) {
      priority_[k] = rng();
      flip_[k] = static_cast<char>(rng() & 1U);
    }
    machine_tasks_.resize(inst.machines());
    for (int m = 0; m < inst.machines(); ++m) {
      machine_tasks_[m] = inst.tasks_on_machine(m);
    }
  }

  void set_incumbent(Schedule s, Time value) {
    incumbent_ = std::move(s);
    best_ = value;
  }

  SolveResult run() {
    root_bound_ = -1;
    search();
    if (best_ == kInfinity) {
      // Budget ran out before any leaf: fall back to processing every
      // machine in job order, which is always acyclic.
      std::vector<PrecedenceEdge> arcs;
      for (const auto& tasks : machine_tasks_) {
        for (size_t k = 1; k < tasks.size(); ++k) {
          arcs.push_back({tasks[k - 1], tasks[k]});
        }
      }
      Schedule s = *earliest_starts(inst_, arcs);
      const Time value = makespan(inst_, s);
      set_incumbent(std::move(s), value);
    }
    SolveResult out;
    out.schedule = incumbent_;
    out.objective = best_;
    out.optimal = !truncated_;
    out.nodes_explored = clock_.nodes();
    out.elapsed = clock_.elapsed();
    return out;
  }

 private:
  Time lower_bound(const std::vector<Time>& head,
                   const std::vector<Time>& tail) const {
    Time lb = 0;
    for (int v = 0; v < inst_.task_count(); ++v) {
      lb = std::max(lb, head[v] + tail[v]);
    }
    // One-machine relaxation: the machine must process all its tasks between
    // the earliest head and the smallest remaining tail.
    for (const auto& tasks : machine_tasks_) {
      Time min_head = kInfinity;
      Time min_rest = kInfinity;
      Time load = 0;
      for (int v : tasks) {
        min_head = std::min(min_head, head[v]);
        min_rest = std::min(min_rest, tail[v] - inst_.duration(v));
        load += inst_.duration(v);
      }
      lb = std::max(lb, min_head + load + min_rest);
    }
    return lb;
  }

  void search() {
    if (done_) return;
    if (!clock_.admit()) {
      truncated_ = true;
      done_ = true;
      return;
    }
    const auto head = graph_.heads();
    const auto tail = graph_.tails();
    const Time lb = lower_bound(*head, *tail);
    if (root_bound_ < 0) root_bound_ = lb;
    if (lb >= best_) return;

    int chosen = -1;
    Time chosen_weight = -1;
    for (size_t k = 0; k < disj_.pairs.size(); ++k) {
      const auto [a, b] = disj_.pairs[k];
      if (!intervals_overlap((*head)[a], inst_.duration(a), (*head)[b],
                             inst_.duration(b))) {
        continue;
      }
      const Time weight = inst_.duration(a) + inst_.duration(b);
      if (weight > chosen_weight ||
          (weight == chosen_weight && priority_[k] < priority_[chosen])) {
        chosen = static_cast<int>(k);
        chosen_weight = weight;
      }
    }

    if (chosen < 0) {
      Time value = 0;
      for (int v = 0; v < inst_.task_count(); ++v) {
        value = std::max(value, (*head)[v] + inst_.duration(v));
      }
      if (value < best_) {
        set_incumbent(Schedule(inst_.jobs(), inst_.steps(), *head), value);
        if (best_ <= root_bound_) done_ = true;
      }
      return;
    }

    auto [a, b] = disj_.pairs[chosen];
    if (flip_[chosen]) std::swap(a, b);
    for (const PrecedenceEdge e : {PrecedenceEdge{a, b}, PrecedenceEdge{b, a}}) {
      graph_.add(e);
      search();
      graph_.pop(e);
      if (done_) return;
    }
  }

  const JssInstance& inst_;
  PrecedenceGraph graph_;
  Disjunctions disj_;
  BudgetClock clock_;
  std::vector<std::uint64_t> priority_;
  std::vector<char> flip_;
  std::vector<std::vector<int>> machine_tasks_;
  Schedule incumbent_;
  Time best_ = kInfinity;
  Time root_bound_ = -1;
  bool truncated_ = false;
  bool done_ = false;
};

class ProximalSearch {
 public:
  ProximalSearch(const JssInstance& inst, const Schedule& reference, Time cap,
                 const SolveBudget& budget)
      : inst_(inst),
        reference_(reference),
        cap_(cap),
        disj_(inst),
        clock_(budget) {}

  void set_incumbent(Schedule s, Time value) {
    incumbent_ = std::move(s);
    best_ = value;
  }

  std::optional<SolveResult> run() {
    search();
    if (best_ == kInfinity) return std::nullopt;
    SolveResult out;
    out.schedule = incumbent_;
    out.objective = best_;
    out.optimal = !truncated_;
    out.nodes_explored = clock_.nodes();
    out.elapsed = clock_.elapsed();
    return out;
  }

 private:
  void search() {
    if (done_) return;
    if (!clock_.admit()) {
      truncated_ = true;
      done_ = true;
      return;
    }
    const auto sol = proximal_starts(inst_, arcs_, reference_, cap_);
    if (!sol || sol->distance >= best_) return;

    const Schedule& s = sol->schedule;
    int chosen = -1;
    Time chosen_weight = -1;
    for (size_t k = 0; k < disj_.pairs.size(); ++k) {
      const auto [a, b] = disj_.pairs[k];
      if (!intervals_overlap(s[a], inst_.duration(a), s[b],
                             inst_.duration(b))) {
        continue;
      }
      const Time weight = inst_.duration(a) + inst_.duration(b);
      if (weight > chosen_weight) {
        chosen = static_cast<int>(k);
        chosen_weight = weight;
      }
    }
    if (chosen < 0) {
      set_incumbent(s, sol->distance);
      if (best_ == 0) done_ = true;
      return;
    }
    auto [a, b] = disj_.pairs[chosen];
    // Explore the orientation the relaxed optimum already leans towards.
    if (s[b] < s[a]) std::swap(a, b);
    for (const PrecedenceEdge e : {PrecedenceEdge{a, b}, PrecedenceEdge{b, a}}) {
      arcs_.push_back(e);
      search();
      arcs_.pop_back();
      if (done_) return;
    }
  }

  const JssInstance& inst_;
  const Schedule& reference_;
  Time cap_;
  Disjunctions disj_;
  BudgetClock clock_;
  std::vector<PrecedenceEdge> arcs_;
  Schedule incumbent_;
  Time best_ = kInfinity;
  bool truncated_ = false;
  bool done_ = false;
};

Time l1_distance(const Schedule& a, const Schedule& b) {
  Time d = 0;
  for (size_t i = 0; i < a.starts().size(); ++i) {
    const Time diff = a.starts()[i] - b.starts()[i];
    d += diff < 0 ? -diff : diff;
  }
  return d;
}

void enumerate_orderings(const JssInstance& inst, int machine,
                         std::vector<std::vector<int>>& seqs,
                         std::optional<Schedule>& best, Time& best_value) {
  if (machine == inst.machines()) {
    std::vector<PrecedenceEdge> arcs;
    for (const auto& seq : seqs) {
      for (size_t k = 1; k < seq.size(); ++k) arcs.push_back({seq[k - 1], seq[k]});
    }
    auto s = earliest_starts(inst, arcs);
    if (!s) return;
    const Time value = makespan(inst, *s);
    if (value < best_value || (value == best_value && *s < *best)) {
      best_value = value;
      best = std::move(s);
    }
    return;
  }
  std::vector<int>& seq = seqs[machine];
  std::sort(seq.begin(), seq.end());
  do {
    enumerate_orderings(inst, machine + 1, seqs, best, best_value);
  } while (std::next_permutation(seq.begin(), seq.end()));
}

}  // namespace

SolveResult solve_makespan(const JssInstance& inst, const SolveBudget& budget,
                           const std::optional<Schedule>& hotstart) {
  MakespanSearch search(inst, budget);
  if (hotstart) {
    if (!hotstart->matches(inst) || !is_feasible(inst, *hotstart)) {
      throw std::invalid_argument("hotstart schedule is not feasible");
    }
    search.set_incumbent(*hotstart, makespan(inst, *hotstart));
  }
  return search.run();
}

std::optional<SolveResult> solve_proximal(
    const JssInstance& inst, const Schedule& reference, Time makespan_cap,
    const SolveBudget& budget, const std::optional<Schedule>& hotstart) {
  if (!reference.matches(inst)) {
    throw std::invalid_argument("reference schedule shape mismatch");
  }
  ProximalSearch search(inst, reference, makespan_cap, budget);
  if (hotstart) {
    if (!hotstart->matches(inst) || !is_feasible(inst, *hotstart)) {
      throw std::invalid_argument("hotstart schedule is not feasible");
    }
    if (makespan_cap != kNoCap && makespan(inst, *hotstart) > makespan_cap) {
      throw std::invalid_argument("hotstart schedule exceeds makespan cap");
    }
    search.set_incumbent(*hotstart, l1_distance(*hotstart, reference));
  }
  return search.run();
}

Schedule brute_force_optimal(const JssInstance& inst) {
  if (inst.task_count() > 9) {
    throw std::invalid_argument("brute_force_optimal supports at most 9 tasks");
  }
  std::vector<std::vector<int>> seqs(inst.machines());
  for (int m = 0; m < inst.machines(); ++m) seqs[m] = inst.tasks_on_machine(m);
  std::optional<Schedule> best;
  Time best_value = kInfinity;
  enumerate_orderings(inst, 0, seqs, best, best_value);
  return *best;
}

}  // namespace oddata
