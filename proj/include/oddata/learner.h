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

#ifndef ODDATA_LEARNER_H_
#define ODDATA_LEARNER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oddata/dataset.h"
#include "oddata/instance.h"

namespace oddata {

// Affine layer, weights row-major (out x in).
struct Dense {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  friend bool operator==(const Dense&, const Dense&) = default;
};

// Feed-forward ReLU network predicting start times from durations. Each job's
// durations pass through a job block and each machine's through a machine
// block; the block outputs are concatenated and fed to two shared layers of
// width 2*J*T, then a linear output layer of size J*T.
struct Model {
  int jobs = 0;
  int machines = 0;
  // Flat task indices routed to each machine block.
  std::vector<std::vector<int>> machine_tasks;
  std::vector<Dense> job_layers;      // jobs x (T -> 2T)
  std::vector<Dense> machine_layers;  // machines x (J -> 2J)
  std::vector<Dense> shared_layers;   // (4JT -> 2JT), (2JT -> 2JT)
  Dense output_layer;                 // 2JT -> JT

  int inputs() const { return jobs * machines; }
  int outputs() const { return jobs * machines; }
  friend bool operator==(const Model&, const Model&) = default;
};

// One multiplier for all precedence constraints, one per machine for the
// no-overlap constraints.
struct Multipliers {
  double precedence = 0.0;
  std::vector<double> overlap;

  static Multipliers uniform(int machines, double value);
  friend bool operator==(const Multipliers&, const Multipliers&) = default;
};

struct TrainConfig {
  int epochs = 500;
  int batch_size = 16;
  double learning_rate = 2e-3;
  double dual_learning_rate = 1e-2;
  double initial_lambda = 0.0;
  std::uint64_t seed = 0;
  // Network inputs are durations / input_scale (<= 0: the largest task
  // duration in the training set). Targets, predictions and the durations
  // inside the loss are divided by output_scale (<= 0: the largest makespan).
  double input_scale = 0.0;
  double output_scale = 0.0;
  // false trains on plain MSE and never touches the multipliers.
  bool lagrangian = true;
};

struct Normalizer {
  double input = 1.0;
  double output = 1.0;

  friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

struct EpochRecord {
  double loss = 0.0;            // mean per-sample training loss
  double mse = 0.0;             // mean per-sample MSE part
  double mean_violation = 0.0;  // mean per-sample violation (normalized)
  Multipliers lambda;           // after the dual step
};

struct TrainResult {
  Model model;
  Multipliers lambda;
  Normalizer normalizer;
  std::vector<EpochRecord> history;
  std::string multiplier_grouping = "precedence:1,overlap:per-machine";
};

struct LossResult {
  double loss = 0.0;
  double mse = 0.0;
  double precedence_violation = 0.0;
  std::vector<double> overlap_violation;  // per machine
  std::vector<double> gradient;           // d loss / d pred
};

struct Metrics {
  double prediction_error = 0.0;      // % of average task duration
  double constraint_violation = 0.0;  // % of average task duration
  double optimality_gap = 0.0;        // % of target makespan
  int entries = 0;
};

// Routing taken from `routing`; hidden weights uniform in +-sqrt(6 / fan_in),
// output weights and all biases zero. The (jobs, machines) overload routes
// step t of every job to machine block t.
Model build_model(const JssInstance& routing, std::uint64_t seed);
Model build_model(int jobs, int machines, std::uint64_t seed);

std::vector<double> forward(const Model& model, std::span<const double> durations);

// Gradient of sum_k upstream[k] * forward(durations)[k] with respect to every
// weight and bias, laid out like the model.
Model backward(const Model& model, std::span<const double> durations,
               std::span<const double> upstream);

// MSE(pred, target) + lambda . violations of the chain and no-overlap
// constraints at pred, with durations divided by `scale`. Subgradient of
// max(0, .) is 0 at the kink; min in the overlap degree follows its first
// argument on ties. Throws std::invalid_argument on a negative multiplier or
// a shape mismatch.
LossResult lagrangian_loss(std::span<const double> pred,
                           std::span<const double> target,
                           const JssInstance& inst, const Multipliers& mult,
                           double scale = 1.0);
LossResult mse_loss(std::span<const double> pred, std::span<const double> target);

TrainResult train(const Model& model, const Dataset& ds, const TrainConfig& cfg);

// Metrics of one real-valued prediction (job-major) against its target.
Metrics score_prediction(const JssInstance& inst,
                         std::span<const double> predicted,
                         const Schedule& target);

// Denormalized predictions projected to feasibility and compared with the
// dataset targets; the mean of score_prediction over entries.
Metrics evaluate(const Model& model, const Dataset& ds, const Normalizer& norm);

// Denormalized network output for one instance.
std::vector<double> predict(const Model& model, const JssInstance& inst,
                            const Normalizer& norm);

// Every `stride`-th entry (offset stride - 1) goes to the test set.
struct DatasetSplit {
  Dataset train;
  Dataset test;
};
DatasetSplit interleaved_split(const Dataset& ds, int stride);

// JSON checkpoint with the architecture header; exact round trip.
std::string model_to_json(const Model& model, const Normalizer& norm);
Model model_from_json(const std::string& text, Normalizer* norm = nullptr);
void save_model(const Model& model, const Normalizer& norm, const std::string& path);
Model load_model(const std::string& path, Normalizer* norm = nullptr);

}  // namespace oddata

#endif  // ODDATA_LEARNER_H_
