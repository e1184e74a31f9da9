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

#ifndef ODDATA_DATASET_H_
#define ODDATA_DATASET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oddata/instance.h"
#include "oddata/solver.h"

namespace oddata {

enum class DatasetMode { kStandard, kOptimalDesign };

std::string_view mode_name(DatasetMode mode);  // "standard" | "od"
DatasetMode parse_mode(std::string_view name);

struct DatasetEntry {
  JssInstance instance;
  Schedule solution;
  Time objective = 0;  // makespan of `solution`
  bool optimal = false;
  std::uint64_t seed = 0;

  friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

struct Provenance {
  double time_limit_seconds = 0.0;
  std::optional<std::int64_t> node_limit;
  std::uint64_t base_seed = 0;
  double wall_seconds = 0.0;
};

// Ordered (instance, solution) pairs in family order.
struct Dataset {
  DatasetMode mode = DatasetMode::kStandard;
  std::vector<DatasetEntry> entries;
  Provenance provenance;

  std::vector<Schedule> solutions() const;
};

// Solves every instance independently with seed base_seed + index. Entries
// may be solved on `workers` threads; the output does not depend on it as
// long as the budget is node-limited rather than time-limited.
Dataset generate_standard(const std::vector<JssInstance>& family,
                          const SolveBudget& budget, std::uint64_t base_seed,
                          int workers = 1);

// Sequential optimal-design generation. Solves the last instance, then walks
// backwards: each instance's makespan is re-optimized hot-started from the
// next solution, and the solution closest in L1 to the next one among
// schedules within that makespan becomes the entry. Requires a monotone
// family (durations nondecreasing along the family).
Dataset generate_od(const std::vector<JssInstance>& family,
                    const SolveBudget& budget);

// Half the summed p-norm distances between consecutive solutions. p may be
// +infinity. Throws std::invalid_argument for fewer than two entries.
double total_variation(const Dataset& ds, double p = 1.0);
double total_variation(const std::vector<Schedule>& solutions, double p = 1.0);

// max_i |y(i+1) - y(i)|_1 / |x(i+1) - x(i)|_1 over adjacent entries, where x
// is the flattened duration vector.
double lipschitz_constant(const Dataset& ds);

Time l1_distance(const Schedule& a, const Schedule& b);

// True when all instances share routing and durations never decrease.
bool is_monotone_family(const std::vector<JssInstance>& family);

// Throws std::runtime_error naming the first broken dataset invariant.
void validate_dataset(const Dataset& ds, bool require_monotone = true);

// JSON Lines, one object per entry:
// {"index","instance":{"jobs","machines","tasks"},"solution","objective",
//  "optimal","mode","seed"}. index is 1-based.
std::string dataset_to_jsonl(const Dataset& ds);
Dataset dataset_from_jsonl(std::string_view text);
void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

// Family files: JSON Lines of {"index", "instance"}.
std::string family_to_jsonl(const std::vector<JssInstance>& family);
std::vector<JssInstance> family_from_jsonl(std::string_view text);
void write_family(const std::vector<JssInstance>& family,
                  const std::string& path);
std::vector<JssInstance> read_family(const std::string& path);

}  // namespace oddata

#endif  // ODDATA_DATASET_H_
