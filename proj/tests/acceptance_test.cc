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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Thresholds are fixed; nothing here is tuned.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oddata/dataset.h"
#include "oddata/instance.h"
#include "oddata/learner.h"
#include "oddata/projection.h"
#include "oddata/pwl.h"
#include "oddata/solver.h"
#include "test_util.h"

namespace {

using namespace oddata;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail, Clock::time_point t0) {
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("[%s] criterion %2d %-26s %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str(), s);
  std::fflush(stdout);
  failures += !pass;
}

std::string frac(int good, int total) {
  return std::to_string(good) + "/" + std::to_string(total);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// The ten slowdown families shared by criteria 3, 4, 10 and 11.
struct FamilyRun {
  std::vector<JssInstance> family;
  Dataset standard;
  Dataset od;
};

std::vector<FamilyRun> family_runs() {
  std::vector<FamilyRun> runs;
  for (std::uint64_t k = 1; k <= 10; ++k) {
    FamilyRun r;
    PerturbationSpec spec;
    spec.machine = static_cast<int>((k - 1) % 3);
    spec.steps = 20;
    spec.max_increase = 0.5;
    spec.scale = 100;
    r.family = perturb_family(random_instance(4, 3, 1, 9, k), spec);
    r.standard = generate_standard(r.family, SolveBudget::exhaustive(), 1000 * k);
    r.od = generate_od(r.family, SolveBudget::exhaustive(1));
    runs.push_back(std::move(r));
  }
  return runs;
}

void solver_oracle() {
  const auto t0 = Clock::now();
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const JssInstance inst = random_instance(3, 3, 1, 9, seed);
    const SolveResult r = solve_makespan(inst, SolveBudget::exhaustive(seed));
    const Time oracle = makespan(inst, brute_force_optimal(inst));
    good += r.optimal && r.objective == oracle && is_feasible(inst, r.schedule);
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  report(1, "solver oracle", good == 100 && s < 60.0, frac(good, 100), t0);
}

void proximal_oracle() {
  const auto t0 = Clock::now();
  int good = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const JssInstance inst = random_instance(2, 2, 1, 9, 500 + seed);
    const Time cap = makespan(inst, brute_force_optimal(inst));
    std::mt19937_64 rng(seed);
    std::vector<Time> ref(inst.task_count());
    for (Time& x : ref) x = static_cast<Time>(rng() % (cap + 1));
    const Schedule reference(inst.jobs(), inst.steps(), ref);
    const auto got = solve_proximal(inst, reference, cap, SolveBudget::exhaustive());
    const auto oracle = testing::brute_force_proximal(inst, reference, cap);
    good += got && oracle.schedule && got->objective == oracle.distance;
  }
  report(2, "proximal oracle", good == 50, frac(good, 50), t0);
}

void tv_dominance(const std::vector<FamilyRun>& runs, Clock::time_point t0) {
  int dominated = 0;
  std::vector<double> ratios;
  for (const FamilyRun& r : runs) {
    const double std_tv = total_variation(r.standard);
    const double od_tv = total_variation(r.od);
    dominated += od_tv <= std_tv;
    ratios.push_back(od_tv > 0 ? std_tv / od_tv : INFINITY);
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = (ratios[4] + ratios[5]) / 2;
  report(3, "TV dominance", dominated == 10 && median >= 3.0,
         frac(dominated, 10) + ", median ratio " + fmt("%.2f", median), t0);
}

void optimality_preserved(const std::vector<FamilyRun>& runs) {
  const auto t0 = Clock::now();
  int good = 0, total = 0;
  for (const FamilyRun& r : runs) {
    for (size_t i = 0; i < r.od.entries.size(); ++i) {
      const DatasetEntry& s = r.standard.entries[i];
      const DatasetEntry& o = r.od.entries[i];
      ++total;
      good += s.optimal && makespan(o.instance, o.solution) == s.objective &&
              is_feasible(o.instance, o.solution);
    }
  }
  report(4, "optimality preservation", good == total, frac(good, total), t0);
}

void projection_feasibility() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int good = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const JssInstance inst = random_instance(4, 3, 1, 9, 10000 + trial);
    std::uniform_real_distribution<double> u(-10.0, 60.0);
    std::vector<double> pred(inst.task_count());
    for (double& x : pred) x = u(rng);
    const Schedule s = project_feasible(inst, pred);
    const std::vector<double> as_real(s.starts().begin(), s.starts().end());
    bool integral = true;
    for (double v : as_real) integral = integral && v >= 0 && v == std::floor(v);
    good += violation_degrees(inst, s).total == 0 && integral &&
            project_feasible(inst, as_real) == s;
  }
  report(5, "projection feasibility", good == 1000, frac(good, 1000), t0);
}

double kink_distance(const JssInstance& inst, const std::vector<double>& p) {
  double best = INFINITY;
  for (int j = 0; j < inst.jobs(); ++j) {
    for (int t = 0; t + 1 < inst.steps(); ++t) {
      const int a = inst.index(j, t);
      best = std::min(best, std::abs(p[a] + inst.duration(a) - p[a + 1]));
    }
  }
  for (int m = 0; m < inst.machines(); ++m) {
    const auto tasks = inst.tasks_on_machine(m);
    for (size_t x = 0; x < tasks.size(); ++x) {
      for (size_t y = x + 1; y < tasks.size(); ++y) {
        const int a = tasks[x], b = tasks[y];
        const double l = p[a] + inst.duration(a) - p[b];
        const double r = p[b] + inst.duration(b) - p[a];
        best = std::min({best, std::abs(l), std::abs(r),
                         std::abs(std::max(0.0, l) - std::max(0.0, r))});
      }
    }
  }
  return best;
}

void gradient_check() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 30.0), lam(0.0, 2.0);
  int good = 0, checked = 0;
  double worst = 0.0;
  for (int trial = 0; checked < 100 && trial < 10000; ++trial) {
    const JssInstance inst = random_instance(4, 3, 1, 9, trial);
    std::vector<double> p(inst.task_count()), target(inst.task_count());
    for (double& x : p) x = u(rng);
    for (double& x : target) x = u(rng);
    if (kink_distance(inst, p) < 1e-3) continue;
    Multipliers mult{lam(rng), std::vector<double>(inst.machines())};
    for (double& l : mult.overlap) l = lam(rng);
    const LossResult r = lagrangian_loss(p, target, inst, mult);
    const double h = 1e-5;
    double diff2 = 0.0, norm2 = 0.0;
    for (int k = 0; k < inst.task_count(); ++k) {
      auto up = p, down = p;
      up[k] += h;
      down[k] -= h;
      const double fd = (lagrangian_loss(up, target, inst, mult).loss -
                         lagrangian_loss(down, target, inst, mult).loss) /
                        (2 * h);
      diff2 += (fd - r.gradient[k]) * (fd - r.gradient[k]);
      norm2 += r.gradient[k] * r.gradient[k];
    }
    const double rel = std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-12);
    worst = std::max(worst, rel);
    good += rel <= 1e-4;
    ++checked;
  }
  report(6, "gradient check", good == 100 && checked == 100,
         frac(good, checked) + ", worst rel " + fmt("%.1e", worst), t0);
}

void lagrangian_reductions() {
  const auto t0 = Clock::now();
  bool bitwise = true;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const JssInstance inst = random_instance(4, 3, 1, 9, trial);
    std::vector<double> p(inst.task_count()), target(inst.task_count());
    for (double& x : p) x = u(rng);
    for (double& x : target) x = u(rng);
    const LossResult lag = lagrangian_loss(p, target, inst, Multipliers::uniform(3, 0.0));
    const LossResult mse = mse_loss(p, target);
    bitwise = bitwise && lag.loss == mse.loss && lag.gradient == mse.gradient;
  }

  PerturbationSpec spec;
  spec.steps = 12;
  const Dataset ds =
      generate_od(perturb_family(random_instance(3, 3, 1, 9, 3), spec), SolveBudget::exhaustive());
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.initial_lambda = 0.3;
  cfg.dual_learning_rate = 0.0;
  const TrainResult r = train(build_model(ds.entries[0].instance, 0), ds, cfg);
  const Multipliers start = Multipliers::uniform(3, 0.3);
  bool frozen = r.lambda == start;
  for (const EpochRecord& e : r.history) frozen = frozen && e.lambda == start;

  TrainConfig zero = cfg;
  zero.initial_lambda = 0.0;
  TrainConfig plain = zero;
  plain.lagrangian = false;
  const bool same_run = train(build_model(ds.entries[0].instance, 0), ds, zero).model ==
                        train(build_model(ds.entries[0].instance, 0), ds, plain).model;
  report(7, "lagrangian reductions", bitwise && frozen && same_run,
         std::string("bitwise ") + (bitwise ? "yes" : "no") + ", frozen " +
             (frozen ? "yes" : "no") + ", lambda=0 run equals MSE run " +
             (same_run ? "yes" : "no"),
         t0);
}

void learning_gap() {
  const auto t0 = Clock::now();
  PerturbationSpec spec;
  spec.steps = 40;
  const auto family = perturb_family(random_instance(4, 3, 1, 9, 0), spec);
  const Dataset datasets[2] = {generate_standard(family, SolveBudget::exhaustive(), 0),
                               generate_od(family, SolveBudget::exhaustive(1))};
  double err[2] = {0, 0}, viol[2] = {0, 0};
  for (int mode = 0; mode < 2; ++mode) {
    const DatasetSplit split = interleaved_split(datasets[mode], 4);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      TrainConfig cfg;
      cfg.seed = seed;
      const TrainResult r = train(build_model(family.front(), seed), split.train, cfg);
      const Metrics m = evaluate(r.model, split.test, r.normalizer);
      err[mode] += m.prediction_error / 3;
      viol[mode] += m.constraint_violation / 3;
    }
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  report(8, "learning gap", err[1] < err[0] && viol[1] < viol[0] && s < 600.0,
         "error std " + fmt("%.2f", err[0]) + " od " + fmt("%.2f", err[1]) +
             ", violation std " + fmt("%.2f", viol[0]) + " od " + fmt("%.2f", viol[1]),
         t0);
}

void approximation_bound_check() {
  const auto t0 = Clock::now();
  int good = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const PwlPair pair = random_admissible_pair(seed);
    const ApproximationBound b = approximation_bound(pair.fp, pair.fq);
    good += b.actual <= b.bound * (1 + 1e-12) + 1e-12;
  }
  const ApproximationBound tight =
      approximation_bound(PwlFunction({0, 1, 2}, {0, 0, 1}), PwlFunction({0, 2}, {0, 0}));
  const bool equal = std::abs(tight.actual - tight.bound) <= 1e-12;
  report(9, "approximation bound", good == 1000 && equal,
         frac(good, 1000) + ", worked example " + fmt("%.3f", tight.actual) + " vs " +
             fmt("%.3f", tight.bound),
         t0);
}

void hotstart_validity(const std::vector<FamilyRun>& runs) {
  const auto t0 = Clock::now();
  int good = 0, total = 0;
  for (const FamilyRun& r : runs) {
    for (const Dataset* ds : {&r.standard, &r.od}) {
      for (size_t i = 0; i + 1 < ds->entries.size(); ++i) {
        ++total;
        good += is_feasible(r.family[i], ds->entries[i + 1].solution);
      }
    }
  }
  report(10, "hot-start validity", good == total, frac(good, total), t0);
}

void lipschitz_dominance(const std::vector<FamilyRun>& runs) {
  const auto t0 = Clock::now();
  int good = 0;
  for (const FamilyRun& r : runs) {
    good += lipschitz_constant(r.od) <= lipschitz_constant(r.standard);
  }
  report(11, "Lipschitz dominance", good >= 8, frac(good, 10), t0);
}

}  // namespace

int main() {
  solver_oracle();
  proximal_oracle();
  const auto t0 = Clock::now();
  const std::vector<FamilyRun> runs = family_runs();
  tv_dominance(runs, t0);
  optimality_preserved(runs);
  projection_feasibility();
  gradient_check();
  lagrangian_reductions();
  learning_gap();
  approximation_bound_check();
  hotstart_validity(runs);
  lipschitz_dominance(runs);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
