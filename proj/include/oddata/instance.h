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

#ifndef ODDATA_INSTANCE_H_
#define ODDATA_INSTANCE_H_

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oddata {

// Integral time unit used for durations, start times and makespans.
using Time = std::int64_t;

// Identifies task `step` (0-based processing position) of job `job`.
struct TaskRef {
  int job = 0;
  int step = 0;

  friend auto operator<=>(const TaskRef&, const TaskRef&) = default;
};

// One task of a job: the machine it runs on and its processing time.
struct Operation {
  int machine = 0;
  Time duration = 0;

  friend bool operator==(const Operation&, const Operation&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A job shop instance with J jobs and M machines. Every job visits every
// machine exactly once, so each job has M tasks. Tasks are stored job-major;
// the flat index of (j, t) is j * M + t.
class JssInstance {
 public:
  JssInstance() = default;
  // Throws std::invalid_argument unless every job is a permutation of the
  // machines with nonnegative durations.
  explicit JssInstance(std::vector<std::vector<Operation>> jobs);

  int jobs() const { return jobs_; }
  int machines() const { return machines_; }
  // Tasks per job; equal to machines().
  int steps() const { return machines_; }
  int task_count() const { return jobs_ * machines_; }

  int index(int job, int step) const { return job * machines_ + step; }
  int index(TaskRef ref) const { return index(ref.job, ref.step); }
  TaskRef task(int index) const {
    return {index / machines_, index % machines_};
  }

  Time duration(int job, int step) const {
    return ops_[index(job, step)].duration;
  }
  Time duration(int index) const { return ops_[index].duration; }
  int machine(int job, int step) const {
    return ops_[index(job, step)].machine;
  }
  int machine(int index) const { return ops_[index].machine; }

  const std::vector<Operation>& operations() const { return ops_; }
  // Flattened durations, job-major.
  std::vector<Time> durations() const;
  // Flat task indices processed on `machine`, in job order.
  std::vector<int> tasks_on_machine(int machine) const;
  Time total_duration() const;

  // Same machine routing, durations replaced (flat, job-major).
  JssInstance with_durations(std::span<const Time> durations) const;

  friend bool operator==(const JssInstance&, const JssInstance&) = default;

 private:
  int jobs_ = 0;
  int machines_ = 0;
  std::vector<Operation> ops_;
};

// Start times for every task (job-major), shaped jobs x steps.
class Schedule {
 public:
  Schedule() = default;
  Schedule(int jobs, int steps, std::vector<Time> starts);
  Schedule(int jobs, int steps) : Schedule(jobs, steps, {}) {}
  static Schedule from_rows(const std::vector<std::vector<Time>>& rows);

  int jobs() const { return jobs_; }
  int steps() const { return steps_; }
  Time start(int job, int step) const { return starts_[job * steps_ + step]; }
  Time& start(int job, int step) { return starts_[job * steps_ + step]; }
  Time operator[](int index) const { return starts_[index]; }
  Time& operator[](int index) { return starts_[index]; }

  std::span<const Time> starts() const { return starts_; }
  std::vector<std::vector<Time>> rows() const;
  bool matches(const JssInstance& inst) const {
    return jobs_ == inst.jobs() && steps_ == inst.steps();
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;
  friend auto operator<=>(const Schedule&, const Schedule&) = default;

 private:
  int jobs_ = 0;
  int steps_ = 0;
  std::vector<Time> starts_;
};

// Violation of one unordered same-machine pair under the no-overlap rule.
struct OverlapViolation {
  TaskRef first;
  TaskRef second;
  Time amount = 0;

  friend bool operator==(const OverlapViolation&,
                         const OverlapViolation&) = default;
};

struct ViolationReport {
  // precedence[j][t] for t in [0, steps - 1): violation of the chain
  // constraint between task t and task t + 1 of job j.
  std::vector<std::vector<Time>> precedence;
  // One entry per unordered same-machine pair, first < second.
  std::vector<OverlapViolation> overlap;
  Time total = 0;
};

struct PerturbationSpec {
  int machine = 0;
  int steps = 2;
  double max_increase = 0.5;
  Time scale = 100;
};

// Parses the whitespace-separated "J M" + J rows of "machine duration" pairs.
JssInstance parse_instance(std::string_view text);
// Canonical text form; parse_instance(serialize_instance(x)) == x.
std::string serialize_instance(const JssInstance& inst);
JssInstance read_instance_file(const std::string& path);

// Slowdown family: instance i (1-based) has all durations multiplied by
// spec.scale, and the tasks on spec.machine additionally extended by
// round_half_up(scale * d * max_increase * (i - 1) / (steps - 1)).
std::vector<JssInstance> perturb_family(const JssInstance& base,
                                        const PerturbationSpec& spec);

// Each job visits the machines in a uniformly shuffled order; durations are
// uniform in [min_duration, max_duration]. Deterministic given seed.
JssInstance random_instance(int jobs, int machines, Time min_duration,
                            Time max_duration, std::uint64_t seed);

Time makespan(const JssInstance& inst, const Schedule& sched);

// Violation degrees of the chain and no-overlap constraints. The overlap
// degree of a pair is min(max(0, s + d - s'), max(0, s' + d' - s)), and pairs
// involving a zero-duration task never violate.
ViolationReport violation_degrees(const JssInstance& inst,
                                  const Schedule& sched);

bool is_feasible(const JssInstance& inst, const Schedule& sched);

// Same-machine overlap degree for real-valued starts; shared by the loss.
template <typename T>
T overlap_degree(T s1, T d1, T s2, T d2) {
  const T left = s1 + d1 - s2;
  const T right = s2 + d2 - s1;
  const T l = left > T(0) ? left : T(0);
  const T r = right > T(0) ? right : T(0);
  return l < r ? l : r;
}

}  // namespace oddata

#endif  // ODDATA_INSTANCE_H_
