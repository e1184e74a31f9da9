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

#include "oddata/dataset.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace oddata {

using json = nlohmann::ordered_json;

std::string_view mode_name(DatasetMode mode) {
  return mode == DatasetMode::kStandard ? "standard" : "od";
}

DatasetMode parse_mode(std::string_view name) {
  if (name == "standard") return DatasetMode::kStandard;
  if (name == "od") return DatasetMode::kOptimalDesign;
  throw std::invalid_argument("unknown dataset mode '" + std::string(name) +
                              "' (expected standard|od)");
}

std::vector<Schedule> Dataset::solutions() const {
  std::vector<Schedule> out;
  out.reserve(entries.size());
  for (const DatasetEntry& e : entries) out.push_back(e.solution);
  return out;
}

Time l1_distance(const Schedule& a, const Schedule& b) {
  if (a.jobs() != b.jobs() || a.steps() != b.steps()) {
    throw std::invalid_argument("l1_distance: shape mismatch");
  }
  Time d = 0;
  for (size_t i = 0; i < a.starts().size(); ++i) {
    const Time diff = a.starts()[i] - b.starts()[i];
    d += diff < 0 ? -diff : diff;
  }
  return d;
}

namespace {

using Clock = std::chrono::steady_clock;

Provenance provenance_of(const SolveBudget& budget, std::uint64_t base_seed) {
  Provenance p;
  p.time_limit_seconds = budget.time_limit.count();
  p.node_limit = budget.node_limit;
  p.base_seed = base_seed;
  return p;
}

double p_norm_distance(const Schedule& a, const Schedule& b, double p) {
  if (a.jobs() != b.jobs() || a.steps() != b.steps()) {
    throw std::invalid_argument("solution shapes differ");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("norm order must be >= 1");
  double acc = 0.0;
  for (size_t i = 0; i < a.starts().size(); ++i) {
    const double diff = std::abs(static_cast<double>(a.starts()[i] - b.starts()[i]));
    if (std::isinf(p)) {
      acc = std::max(acc, diff);
    } else if (p == 1.0) {
      acc += diff;
    } else {
      acc += std::pow(diff, p);
    }
  }
  if (std::isinf(p) || p == 1.0) return acc;
  return std::pow(acc, 1.0 / p);
}

json instance_json(const JssInstance& inst) {
  json tasks = json::array();
  for (int j = 0; j < inst.jobs(); ++j) {
    json row = json::array();
    for (int t = 0; t < inst.steps(); ++t) {
      row.push_back(json::array({inst.machine(j, t), inst.duration(j, t)}));
    }
    tasks.push_back(std::move(row));
  }
  json out;
  out["jobs"] = inst.jobs();
  out["machines"] = inst.machines();
  out["tasks"] = std::move(tasks);
  return out;
}

JssInstance instance_from_json(const json& obj) {
  const int jobs = obj.at("jobs").get<int>();
  const int machines = obj.at("machines").get<int>();
  const json& tasks = obj.at("tasks");
  if (static_cast<int>(tasks.size()) != jobs) {
    throw std::runtime_error("instance 'tasks' has wrong number of jobs");
  }
  std::vector<std::vector<Operation>> rows;
  for (const json& row : tasks) {
    if (static_cast<int>(row.size()) != machines) {
      throw std::runtime_error("instance job row has wrong number of tasks");
    }
    std::vector<Operation> ops;
    for (const json& pair : row) {
      if (pair.size() != 2) throw std::runtime_error("task must be [machine, duration]");
      ops.push_back({pair[0].get<int>(), pair[1].get<Time>()});
    }
    rows.push_back(std::move(ops));
  }
  return JssInstance(std::move(rows));
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

Dataset generate_standard(const std::vector<JssInstance>& family,
                          const SolveBudget& budget, std::uint64_t base_seed,
                          int workers) {
  if (family.empty()) throw std::invalid_argument("empty family");
  const auto start = Clock::now();
  Dataset ds;
  ds.mode = DatasetMode::kStandard;
  ds.provenance = provenance_of(budget, base_seed);
  ds.entries.resize(family.size());

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (size_t i = next++; i < family.size(); i = next++) {
      try {
        SolveBudget b = budget;
        b.seed = base_seed + i;
        const SolveResult r = solve_makespan(family[i], b);
        ds.entries[i] = {family[i], r.schedule, r.objective, r.optimal, b.seed};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads =
      std::clamp(workers, 1, static_cast<int>(family.size()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  ds.provenance.wall_seconds = Seconds(Clock::now() - start).count();
  return ds;
}

Dataset generate_od(const std::vector<JssInstance>& family,
                    const SolveBudget& budget) {
  if (family.empty()) throw std::invalid_argument("empty family");
  if (!is_monotone_family(family)) {
    throw std::invalid_argument(
        "optimal-design generation needs a monotone family");
  }
  const auto start = Clock::now();
  Dataset ds;
  ds.mode = DatasetMode::kOptimalDesign;
  ds.provenance = provenance_of(budget, budget.seed);
  const size_t n = family.size();
  ds.entries.resize(n);

  const SolveResult anchor = solve_makespan(family[n - 1], budget);
  ds.entries[n - 1] = {family[n - 1], anchor.schedule, anchor.objective,
                       anchor.optimal, budget.seed};

  for (size_t i = n - 1; i-- > 0;) {
    const JssInstance& inst = family[i];
    const Schedule& next = ds.entries[i + 1].solution;
    if (!is_feasible(inst, next)) {
      throw std::logic_error("solution " + std::to_string(i + 2) +
                             " is not feasible for instance " +
                             std::to_string(i + 1));
    }
    const SolveResult capped = solve_makespan(inst, budget, next);
    auto closest =
        solve_proximal(inst, next, capped.objective, budget, capped.schedule);
    if (!closest) {
      throw std::runtime_error("no schedule within makespan cap for instance " +
                               std::to_string(i + 1));
    }
    ds.entries[i] = {inst, closest->schedule,
                     makespan(inst, closest->schedule), capped.optimal,
                     budget.seed};
  }
  ds.provenance.wall_seconds = Seconds(Clock::now() - start).count();
  return ds;
}

double total_variation(const std::vector<Schedule>& solutions, double p) {
  if (solutions.size() < 2) {
    throw std::invalid_argument("total variation needs at least two entries");
  }
  double sum = 0.0;
  for (size_t i = 0; i + 1 < solutions.size(); ++i) {
    sum += p_norm_distance(solutions[i + 1], solutions[i], p);
  }
  return 0.5 * sum;
}

double total_variation(const Dataset& ds, double p) {
  return total_variation(ds.solutions(), p);
}

double lipschitz_constant(const Dataset& ds) {
  if (ds.entries.size() < 2) {
    throw std::invalid_argument("Lipschitz constant needs at least two entries");
  }
  double best = 0.0;
  for (size_t i = 0; i + 1 < ds.entries.size(); ++i) {
    const auto x0 = ds.entries[i].instance.durations();
    const auto x1 = ds.entries[i + 1].instance.durations();
    if (x0.size() != x1.size()) {
      throw std::invalid_argument("entries have different shapes");
    }
    Time dx = 0;
    for (size_t k = 0; k < x0.size(); ++k) dx += std::abs(x1[k] - x0[k]);
    if (dx == 0) {
      throw std::invalid_argument("adjacent entries " + std::to_string(i + 1) +
                                  " and " + std::to_string(i + 2) +
                                  " have identical inputs");
    }
    const Time dy = l1_distance(ds.entries[i + 1].solution, ds.entries[i].solution);
    best = std::max(best, static_cast<double>(dy) / static_cast<double>(dx));
  }
  return best;
}

bool is_monotone_family(const std::vector<JssInstance>& family) {
  for (size_t i = 0; i + 1 < family.size(); ++i) {
    const JssInstance& a = family[i];
    const JssInstance& b = family[i + 1];
    if (a.jobs() != b.jobs() || a.machines() != b.machines()) return false;
    for (int k = 0; k < a.task_count(); ++k) {
      if (a.machine(k) != b.machine(k)) return false;
      if (a.duration(k) > b.duration(k)) return false;
    }
  }
  return true;
}

void validate_dataset(const Dataset& ds, bool require_monotone) {
  std::vector<JssInstance> family;
  for (size_t i = 0; i < ds.entries.size(); ++i) {
    const DatasetEntry& e = ds.entries[i];
    if (!e.solution.matches(e.instance) || !is_feasible(e.instance, e.solution)) {
      throw std::runtime_error("entry " + std::to_string(i + 1) +
                               ": solution is not feasible");
    }
    if (makespan(e.instance, e.solution) != e.objective) {
      throw std::runtime_error("entry " + std::to_string(i + 1) +
                               ": objective does not match makespan");
    }
    family.push_back(e.instance);
  }
  if (require_monotone && !is_monotone_family(family)) {
    throw std::runtime_error("entries do not follow a monotone family order");
  }
}

std::string dataset_to_jsonl(const Dataset& ds) {
  std::string out;
  for (size_t i = 0; i < ds.entries.size(); ++i) {
    const DatasetEntry& e = ds.entries[i];
    json obj;
    obj["index"] = i + 1;
    obj["instance"] = instance_json(e.instance);
    obj["solution"] = e.solution.rows();
    obj["objective"] = e.objective;
    obj["optimal"] = e.optimal;
    obj["mode"] = mode_name(ds.mode);
    obj["seed"] = e.seed;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

Dataset dataset_from_jsonl(std::string_view text) {
  Dataset ds;
  bool first = true;
  for_each_line(text, [&](const json& obj) {
    const size_t index = obj.at("index").get<size_t>();
    if (index != ds.entries.size() + 1) {
      throw std::runtime_error("dataset entries out of order at index " +
                               std::to_string(index));
    }
    const DatasetMode mode = parse_mode(obj.at("mode").get<std::string>());
    if (first) {
      ds.mode = mode;
      first = false;
    } else if (mode != ds.mode) {
      throw std::runtime_error("dataset mixes modes");
    }
    DatasetEntry e;
    e.instance = instance_from_json(obj.at("instance"));
    e.solution = Schedule::from_rows(
        obj.at("solution").get<std::vector<std::vector<Time>>>());
    if (!e.solution.matches(e.instance)) {
      throw std::runtime_error("solution shape does not match instance");
    }
    e.objective = obj.at("objective").get<Time>();
    e.optimal = obj.at("optimal").get<bool>();
    e.seed = obj.at("seed").get<std::uint64_t>();
    ds.entries.push_back(std::move(e));
  });
  return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
  spill(path, dataset_to_jsonl(ds));
}

Dataset read_dataset(const std::string& path) {
  return dataset_from_jsonl(slurp(path));
}

std::string family_to_jsonl(const std::vector<JssInstance>& family) {
  std::string out;
  for (size_t i = 0; i < family.size(); ++i) {
    json obj;
    obj["index"] = i + 1;
    obj["instance"] = instance_json(family[i]);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<JssInstance> family_from_jsonl(std::string_view text) {
  std::vector<JssInstance> family;
  for_each_line(text, [&](const json& obj) {
    if (obj.at("index").get<size_t>() != family.size() + 1) {
      throw std::runtime_error("family entries out of order");
    }
    family.push_back(instance_from_json(obj.at("instance")));
  });
  return family;
}

void write_family(const std::vector<JssInstance>& family,
                  const std::string& path) {
  spill(path, family_to_jsonl(family));
}

std::vector<JssInstance> read_family(const std::string& path) {
  return family_from_jsonl(slurp(path));
}

}  // namespace oddata
