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

#include "oddata/instance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace oddata {

JssInstance::JssInstance(std::vector<std::vector<Operation>> jobs) {
  if (jobs.empty()) throw std::invalid_argument("instance has no jobs");
  jobs_ = static_cast<int>(jobs.size());
  machines_ = static_cast<int>(jobs.front().size());
  if (machines_ == 0) throw std::invalid_argument("instance has no machines");
  ops_.reserve(static_cast<size_t>(jobs_) * machines_);
  for (int j = 0; j < jobs_; ++j) {
    if (static_cast<int>(jobs[j].size()) != machines_) {
      throw std::invalid_argument("job " + std::to_string(j) + " has " +
                                  std::to_string(jobs[j].size()) +
                                  " tasks, expected " +
                                  std::to_string(machines_));
    }
    std::vector<bool> seen(machines_, false);
    for (const Operation& op : jobs[j]) {
      if (op.machine < 0 || op.machine >= machines_) {
        throw std::invalid_argument("machine index " +
                                    std::to_string(op.machine) +
                                    " out of range in job " +
                                    std::to_string(j));
      }
      if (seen[op.machine]) {
        throw std::invalid_argument("duplicate machine " +
                                    std::to_string(op.machine) + " in job " +
                                    std::to_string(j));
      }
      if (op.duration < 0) {
        throw std::invalid_argument("negative duration in job " +
                                    std::to_string(j));
      }
      seen[op.machine] = true;
      ops_.push_back(op);
    }
  }
}

std::vector<Time> JssInstance::durations() const {
  std::vector<Time> out(ops_.size());
  std::transform(ops_.begin(), ops_.end(), out.begin(),
                 [](const Operation& op) { return op.duration; });
  return out;
}

std::vector<int> JssInstance::tasks_on_machine(int machine) const {
  std::vector<int> out;
  out.reserve(jobs_);
  for (int i = 0; i < task_count(); ++i) {
    if (ops_[i].machine == machine) out.push_back(i);
  }
  return out;
}

Time JssInstance::total_duration() const {
  Time sum = 0;
  for (const Operation& op : ops_) sum += op.duration;
  return sum;
}

JssInstance JssInstance::with_durations(std::span<const Time> durations) const {
  if (static_cast<int>(durations.size()) != task_count()) {
    throw std::invalid_argument("duration vector has wrong length");
  }
  std::vector<std::vector<Operation>> jobs(jobs_);
  for (int j = 0; j < jobs_; ++j) {
    for (int t = 0; t < machines_; ++t) {
      jobs[j].push_back({machine(j, t), durations[index(j, t)]});
    }
  }
  return JssInstance(std::move(jobs));
}

Schedule::Schedule(int jobs, int steps, std::vector<Time> starts)
    : jobs_(jobs), steps_(steps), starts_(std::move(starts)) {
  if (jobs < 0 || steps < 0) throw std::invalid_argument("negative shape");
  const size_t n = static_cast<size_t>(jobs) * steps;
  if (starts_.empty()) starts_.assign(n, 0);
  if (starts_.size() != n) {
    throw std::invalid_argument("schedule has " +
                                std::to_string(starts_.size()) +
                                " starts, expected " + std::to_string(n));
  }
}

Schedule Schedule::from_rows(const std::vector<std::vector<Time>>& rows) {
  const int jobs = static_cast<int>(rows.size());
  const int steps = jobs == 0 ? 0 : static_cast<int>(rows.front().size());
  std::vector<Time> flat;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != steps) {
      throw std::invalid_argument("ragged schedule rows");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Schedule(jobs, steps, std::move(flat));
}

std::vector<std::vector<Time>> Schedule::rows() const {
  std::vector<std::vector<Time>> out(jobs_);
  for (int j = 0; j < jobs_; ++j) {
    out[j].assign(starts_.begin() + j * steps_,
                  starts_.begin() + (j + 1) * steps_);
  }
  return out;
}

namespace {

long long read_integer(std::istringstream& in, const char* what) {
  std::string token;
  if (!(in >> token)) {
    throw ParseError(std::string("unexpected end of input reading ") + what);
  }
  size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(token, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected integer for " + std::string(what) + ", got '" +
                     token + "'");
  }
  if (pos != token.size()) {
    throw ParseError("expected integer for " + std::string(what) + ", got '" +
                     token + "'");
  }
  return value;
}

void check_shape(const JssInstance& inst, const Schedule& sched) {
  if (!sched.matches(inst)) {
    throw std::invalid_argument(
        "schedule shape " + std::to_string(sched.jobs()) + "x" +
        std::to_string(sched.steps()) + " does not match instance " +
        std::to_string(inst.jobs()) + "x" + std::to_string(inst.steps()));
  }
}

}  // namespace

JssInstance parse_instance(std::string_view text) {
  std::istringstream lines{std::string(text)};
  std::string line;
  // Skip blank lines and '#' comments before the header.
  auto next_line = [&](std::string& out) {
    while (std::getline(lines, out)) {
      auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line(line)) throw ParseError("missing header line");
  std::istringstream header(line);
  const long long jobs = read_integer(header, "job count");
  const long long machines = read_integer(header, "machine count");
  std::string extra;
  if (header >> extra) throw ParseError("malformed header: '" + line + "'");
  if (jobs <= 0 || machines <= 0) {
    throw ParseError("malformed header: job and machine counts must be "
                     "positive");
  }

  std::vector<std::vector<Operation>> rows;
  for (long long j = 0; j < jobs; ++j) {
    if (!next_line(line)) {
      throw ParseError("expected " + std::to_string(jobs) + " job lines, got " +
                       std::to_string(j));
    }
    std::istringstream row(line);
    std::vector<long long> tokens;
    std::string token;
    while (row >> token) {
      std::istringstream one(token);
      tokens.push_back(read_integer(one, "task field"));
    }
    if (static_cast<long long>(tokens.size()) != 2 * machines) {
      throw ParseError("job " + std::to_string(j) + " has " +
                       std::to_string(tokens.size()) + " tokens, expected " +
                       std::to_string(2 * machines));
    }
    std::vector<Operation> ops;
    std::vector<bool> seen(machines, false);
    for (long long t = 0; t < machines; ++t) {
      const long long m = tokens[2 * t];
      const long long d = tokens[2 * t + 1];
      if (m < 0 || m >= machines) {
        throw ParseError("machine index " + std::to_string(m) +
                         " out of range in job " + std::to_string(j));
      }
      if (seen[m]) {
        throw ParseError("duplicate machine " + std::to_string(m) +
                         " in job " + std::to_string(j));
      }
      if (d < 0) {
        throw ParseError("negative duration in job " + std::to_string(j));
      }
      seen[m] = true;
      ops.push_back({static_cast<int>(m), d});
    }
    rows.push_back(std::move(ops));
  }
  if (next_line(line)) throw ParseError("trailing content after job lines");
  return JssInstance(std::move(rows));
}

std::string serialize_instance(const JssInstance& inst) {
  std::ostringstream out;
  out << inst.jobs() << ' ' << inst.machines() << '\n';
  for (int j = 0; j < inst.jobs(); ++j) {
    for (int t = 0; t < inst.steps(); ++t) {
      if (t > 0) out << ' ';
      out << inst.machine(j, t) << ' ' << inst.duration(j, t);
    }
    out << '\n';
  }
  return out.str();
}

JssInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::vector<JssInstance> perturb_family(const JssInstance& base,
                                        const PerturbationSpec& spec) {
  if (spec.machine < 0 || spec.machine >= base.machines()) {
    throw std::invalid_argument("slowdown machine " +
                                std::to_string(spec.machine) +
                                " out of range");
  }
  if (spec.steps < 2) throw std::invalid_argument("steps must be >= 2");
  if (spec.scale < 1) throw std::invalid_argument("scale must be >= 1");
  if (!(spec.max_increase >= 0.0) || !std::isfinite(spec.max_increase)) {
    throw std::invalid_argument("max_increase must be finite and >= 0");
  }

  const std::vector<Time> scaled = [&] {
    std::vector<Time> d = base.durations();
    for (Time& x : d) x *= spec.scale;
    return d;
  }();

  std::vector<JssInstance> family;
  family.reserve(spec.steps);
  for (int i = 1; i <= spec.steps; ++i) {
    std::vector<Time> d = scaled;
    for (int k = 0; k < base.task_count(); ++k) {
      if (base.machine(k) != spec.machine) continue;
      const long double extra = static_cast<long double>(scaled[k]) *
                                spec.max_increase * (i - 1) /
                                (spec.steps - 1);
      // Round half up; the epsilon absorbs representation error at exact
      // halves (e.g. 0.1 * 5 == 0.5).
      d[k] += static_cast<Time>(std::floor(extra + 0.5L + 1e-9L));
    }
    family.push_back(base.with_durations(d));
  }
  return family;
}

JssInstance random_instance(int jobs, int machines, Time min_duration,
                            Time max_duration, std::uint64_t seed) {
  if (jobs < 1 || machines < 1) {
    throw std::invalid_argument("random_instance: need at least one job and machine");
  }
  if (min_duration < 0 || max_duration < min_duration) {
    throw std::invalid_argument("random_instance: bad duration range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Time> dur(min_duration, max_duration);
  std::vector<std::vector<Operation>> rows(jobs);
  for (auto& row : rows) {
    std::vector<int> perm(machines);
    for (int m = 0; m < machines; ++m) perm[m] = m;
    // Explicit Fisher-Yates; std::shuffle's draw pattern is not portable.
    for (int k = machines - 1; k > 0; --k) {
      std::uniform_int_distribution<int> pick(0, k);
      std::swap(perm[k], perm[pick(rng)]);
    }
    for (int m : perm) row.push_back({m, dur(rng)});
  }
  return JssInstance(std::move(rows));
}

Time makespan(const JssInstance& inst, const Schedule& sched) {
  check_shape(inst, sched);
  Time best = std::numeric_limits<Time>::min();
  const int last = inst.steps() - 1;
  for (int j = 0; j < inst.jobs(); ++j) {
    best = std::max(best, sched.start(j, last) + inst.duration(j, last));
  }
  return best;
}

ViolationReport violation_degrees(const JssInstance& inst,
                                  const Schedule& sched) {
  check_shape(inst, sched);
  ViolationReport report;
  report.precedence.assign(inst.jobs(),
                           std::vector<Time>(std::max(0, inst.steps() - 1)));
  for (int j = 0; j < inst.jobs(); ++j) {
    for (int t = 0; t + 1 < inst.steps(); ++t) {
      const Time v = std::max<Time>(
          0, sched.start(j, t) + inst.duration(j, t) - sched.start(j, t + 1));
      report.precedence[j][t] = v;
      report.total += v;
    }
  }
  const int n = inst.task_count();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (inst.machine(a) != inst.machine(b)) continue;
      Time v = 0;
      if (inst.duration(a) > 0 && inst.duration(b) > 0) {
        v = overlap_degree<Time>(sched[a], inst.duration(a), sched[b],
                                 inst.duration(b));
      }
      report.overlap.push_back({inst.task(a), inst.task(b), v});
      report.total += v;
    }
  }
  return report;
}

bool is_feasible(const JssInstance& inst, const Schedule& sched) {
  const ViolationReport report = violation_degrees(inst, sched);
  if (report.total != 0) return false;
  return std::all_of(sched.starts().begin(), sched.starts().end(),
                     [](Time s) { return s >= 0; });
}

}  // namespace oddata
