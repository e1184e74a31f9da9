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

#ifndef ODDATA_EXPERIMENT_H_
#define ODDATA_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oddata/dataset.h"
#include "oddata/instance.h"
#include "oddata/learner.h"
#include "oddata/solver.h"

namespace oddata {

// A failure inside one pipeline stage; what() is "<stage>: <message>".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ModeSettings {
  SolveBudget budget;
  TrainConfig train;
  std::uint64_t model_seed = 0;
};

struct ExperimentConfig {
  // Base instance: read from instance_path when set, otherwise generated.
  std::string instance_path;
  int jobs = 4;
  int machines = 3;
  Time min_duration = 1;
  Time max_duration = 9;
  std::uint64_t instance_seed = 0;

  PerturbationSpec perturbation;
  ModeSettings standard;
  ModeSettings od;
  // Every split_stride-th entry is held out for evaluation.
  int split_stride = 4;
  int workers = 1;
  // false writes 0 for wall times so reports are byte-reproducible.
  bool record_timing = true;
  std::string output_dir;

  ExperimentConfig();
};

// Flat "key = value" lines; '#' starts a comment. Unknown keys and bad
// values throw std::invalid_argument naming the line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig read_config(const std::string& path);
std::string config_to_text(const ExperimentConfig& cfg);
void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value);
// Throws std::invalid_argument on an inconsistent config.
void validate_config(const ExperimentConfig& cfg);

struct ModeRow {
  std::string mode;  // "standard" | "od"
  int entries = 0;
  double total_variation = 0.0;
  // Unset when adjacent family inputs coincide.
  std::optional<double> lipschitz;
  double slope_variation = 0.0;
  // Unset when no entries are held out.
  std::optional<double> prediction_error;
  std::optional<double> constraint_violation;
  std::optional<double> optimality_gap;
  double generation_seconds = 0.0;

  friend bool operator==(const ModeRow&, const ModeRow&) = default;
};

// L1 distance of entry `index` (1-based) to the first entry, per mode.
struct CurvePoint {
  int index = 0;
  Time standard = 0;
  Time od = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct Report {
  static constexpr int kVersion = 1;
  std::vector<ModeRow> rows;
  std::vector<CurvePoint> curve;

  friend bool operator==(const Report&, const Report&) = default;
};

// Full pipeline: family, both datasets, training, evaluation. Writes all
// artifacts under cfg.output_dir when it is set. Failures are StageErrors.
Report run_experiment(const ExperimentConfig& cfg);

// Distance of every solution to the first one.
std::vector<Time> reference_curve(const Dataset& ds);

enum class ReportFormat { kCsv, kJson };

// Summary CSV columns: mode,entries,total_variation,lipschitz,
// slope_variation,prediction_error,constraint_violation,optimality_gap,
// generation_seconds. Unset values are empty cells.
std::string report_to_csv(const Report& report);
// Curve CSV columns: index,standard,od.
std::string curve_to_csv(const Report& report);
std::string report_to_json(const Report& report);
Report report_from_json(std::string_view text);
// Writes report.csv + curve.csv, or report.json, into `dir`; returns paths.
std::vector<std::string> emit_report(const Report& report, ReportFormat format,
                                     const std::string& dir);

}  // namespace oddata

#endif  // ODDATA_EXPERIMENT_H_
