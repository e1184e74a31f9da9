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

// Command line front end: family generation, dataset generation, training,
// evaluation, theory checks and the end-to-end experiment.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oddata/dataset.h"
#include "oddata/experiment.h"
#include "oddata/instance.h"
#include "oddata/learner.h"
#include "oddata/pwl.h"

namespace {

namespace fs = std::filesystem;
using namespace oddata;

constexpr int kUsage = 1;
constexpr int kStageFailure = 2;

std::string default_out_dir() {
  const char* env = std::getenv("ODDATA_OUT");
  return env && *env ? env : ".";
}

std::string in_out_dir(const std::string& name) {
  const fs::path dir = default_out_dir();
  fs::create_directories(dir);
  return (dir / name).string();
}

template <typename T>
void override(T& field, const std::optional<T>& flag) {
  if (flag) field = *flag;
}

struct Common {
  std::string config_path;
  std::vector<std::string> settings;

  ExperimentConfig load() const {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : read_config(config_path);
    for (const std::string& kv : settings) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("--set expects KEY=VALUE, got '" + kv + "'");
      }
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

void print_metrics(const Metrics& m) {
  nlohmann::ordered_json o;
  o["entries"] = m.entries;
  o["prediction_error"] = m.prediction_error;
  o["constraint_violation"] = m.constraint_violation;
  o["optimality_gap"] = m.optimality_gap;
  std::cout << o.dump(2) << "\n";
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-design datasets for learning job shop schedules"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "key=value config file")
      ->check(CLI::ExistingFile);
  app.add_option("--set", common.settings, "Config override KEY=VALUE (repeatable)");

  // gen-family
  auto* fam = app.add_subcommand("gen-family", "Write a slowdown family");
  std::optional<std::string> fam_instance;
  std::optional<int> fam_jobs, fam_machines, fam_slow, fam_steps;
  std::optional<Time> fam_min, fam_max, fam_scale;
  std::optional<double> fam_increase;
  std::optional<std::uint64_t> fam_seed;
  std::string fam_out;
  fam->add_option("--instance", fam_instance, "Base instance file (JSPLIB text)");
  fam->add_option("--jobs", fam_jobs, "Jobs of a generated base instance");
  fam->add_option("--machines", fam_machines, "Machines of a generated base instance");
  fam->add_option("--min-duration", fam_min);
  fam->add_option("--max-duration", fam_max);
  fam->add_option("--instance-seed", fam_seed);
  fam->add_option("--slow-machine", fam_slow, "Machine that slows down");
  fam->add_option("--steps", fam_steps, "Family size");
  fam->add_option("--max-increase", fam_increase, "Relative slowdown at the last step");
  fam->add_option("--scale", fam_scale, "Integer scaling of all durations");
  fam->add_option("-o,--out", fam_out, "Output JSONL (default $ODDATA_OUT/family.jsonl)");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Solve a family into a dataset");
  std::string gen_family, gen_mode, gen_out;
  std::optional<double> gen_time;
  std::optional<std::int64_t> gen_nodes;
  std::optional<std::uint64_t> gen_seed;
  std::optional<int> gen_workers;
  gen->add_option("--family", gen_family, "Family JSONL")->required()->check(CLI::ExistingFile);
  gen->add_option("--mode", gen_mode, "standard | od")
      ->required()
      ->check(CLI::IsMember({"standard", "od"}));
  gen->add_option("--time-limit", gen_time, "Seconds per solve");
  gen->add_option("--node-limit", gen_nodes, "Search nodes per solve");
  gen->add_option("--seed", gen_seed, "Solver seed (base seed for standard)");
  gen->add_option("--workers", gen_workers, "Parallel solves (standard only)");
  gen->add_option("-o,--out", gen_out, "Output JSONL (default $ODDATA_OUT/<mode>.jsonl)");

  // train
  auto* tr = app.add_subcommand("train", "Train a model on a dataset");
  std::string tr_data, tr_out, tr_history;
  std::optional<int> tr_epochs, tr_batch, tr_stride;
  std::optional<double> tr_lr, tr_dual, tr_lambda;
  std::optional<std::uint64_t> tr_seed, tr_model_seed;
  bool tr_mse = false;
  tr->add_option("--data", tr_data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  tr->add_option("--epochs", tr_epochs);
  tr->add_option("--batch-size", tr_batch);
  tr->add_option("--learning-rate", tr_lr);
  tr->add_option("--dual-learning-rate", tr_dual);
  tr->add_option("--initial-lambda", tr_lambda);
  tr->add_option("--seed", tr_seed, "Shuffling seed");
  tr->add_option("--model-seed", tr_model_seed, "Initialization seed");
  tr->add_option("--split-stride", tr_stride,
                 "Hold out every N-th entry; 0 trains on everything");
  tr->add_flag("--mse-only", tr_mse, "Plain MSE, no multipliers");
  tr->add_option("-o,--out", tr_out, "Checkpoint (default $ODDATA_OUT/model.json)");
  tr->add_option("--history", tr_history, "Per-epoch CSV");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a model on a dataset");
  std::string ev_model, ev_data;
  int ev_stride = 0;
  ev->add_option("--model", ev_model, "Checkpoint")->required()->check(CLI::ExistingFile);
  ev->add_option("--data", ev_data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  ev->add_option("--split-stride", ev_stride,
                 "Score only the held-out entries of this stride; 0 scores all");

  // theory-check
  auto* th = app.add_subcommand("theory-check", "Numerical checks of the PWL results");
  int th_trials = 1000;
  int th_pieces = 8;
  std::uint64_t th_seed = 0;
  th->add_option("--trials", th_trials, "Random admissible pairs");
  th->add_option("--max-pieces", th_pieces);
  th->add_option("--seed", th_seed);

  // run
  auto* run = app.add_subcommand("run", "End-to-end experiment");
  std::string run_out;
  std::optional<int> run_workers;
  run->add_option("-o,--out", run_out, "Output directory (default $ODDATA_OUT)");
  run->add_option("--workers", run_workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  ExperimentConfig cfg;
  try {
    cfg = common.load();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (fam->parsed()) {
      override(cfg.instance_path, fam_instance);
      override(cfg.jobs, fam_jobs);
      override(cfg.machines, fam_machines);
      override(cfg.min_duration, fam_min);
      override(cfg.max_duration, fam_max);
      override(cfg.instance_seed, fam_seed);
      override(cfg.perturbation.machine, fam_slow);
      override(cfg.perturbation.steps, fam_steps);
      override(cfg.perturbation.max_increase, fam_increase);
      override(cfg.perturbation.scale, fam_scale);
      const JssInstance base =
          cfg.instance_path.empty()
              ? random_instance(cfg.jobs, cfg.machines, cfg.min_duration,
                                cfg.max_duration, cfg.instance_seed)
              : read_instance_file(cfg.instance_path);
      const auto family = perturb_family(base, cfg.perturbation);
      const std::string out = fam_out.empty() ? in_out_dir("family.jsonl") : fam_out;
      write_family(family, out);
      std::cout << "wrote " << family.size() << " instances to " << out << "\n";
    } else if (gen->parsed()) {
      const DatasetMode mode = parse_mode(gen_mode);
      ModeSettings& ms = mode == DatasetMode::kStandard ? cfg.standard : cfg.od;
      if (gen_time) ms.budget.time_limit = Seconds(*gen_time);
      if (gen_nodes) ms.budget.node_limit = *gen_nodes;
      override(ms.budget.seed, gen_seed);
      override(cfg.workers, gen_workers);
      const auto family = read_family(gen_family);
      const Dataset ds = mode == DatasetMode::kStandard
                             ? generate_standard(family, ms.budget, ms.budget.seed,
                                                 cfg.workers)
                             : generate_od(family, ms.budget);
      const std::string out =
          gen_out.empty() ? in_out_dir(std::string(mode_name(mode)) + ".jsonl") : gen_out;
      write_dataset(ds, out);
      int proved = 0;
      for (const DatasetEntry& e : ds.entries) proved += e.optimal;
      std::cout << "wrote " << ds.entries.size() << " entries (" << proved
                << " proved optimal) to " << out << " in "
                << ds.provenance.wall_seconds << " s\n";
      if (ds.entries.size() >= 2) {
        std::cout << "total variation " << total_variation(ds) << "\n";
      }
    } else if (tr->parsed()) {
      const Dataset ds = read_dataset(tr_data);
      if (ds.entries.empty()) throw std::runtime_error("dataset is empty");
      ModeSettings& ms = ds.mode == DatasetMode::kStandard ? cfg.standard : cfg.od;
      TrainConfig& tc = ms.train;
      override(tc.epochs, tr_epochs);
      override(tc.batch_size, tr_batch);
      override(tc.learning_rate, tr_lr);
      override(tc.dual_learning_rate, tr_dual);
      override(tc.initial_lambda, tr_lambda);
      override(tc.seed, tr_seed);
      override(ms.model_seed, tr_model_seed);
      if (tr_mse) tc.lagrangian = false;
      const int stride = tr_stride.value_or(cfg.split_stride);
      const Dataset train_set = stride > 0 ? interleaved_split(ds, stride).train : ds;
      const TrainResult r =
          train(build_model(ds.entries.front().instance, ms.model_seed), train_set, tc);
      const std::string out = tr_out.empty() ? in_out_dir("model.json") : tr_out;
      save_model(r.model, r.normalizer, out);
      if (!tr_history.empty()) {
        std::ofstream h(tr_history);
        h << "epoch,loss,mse,mean_violation,lambda_precedence\n";
        for (size_t e = 0; e < r.history.size(); ++e) {
          const EpochRecord& rec = r.history[e];
          h << e + 1 << "," << rec.loss << "," << rec.mse << "," << rec.mean_violation
            << "," << rec.lambda.precedence << "\n";
        }
        if (!h) throw std::runtime_error("cannot write " + tr_history);
      }
      std::cout << "trained on " << train_set.entries.size() << " entries for "
                << r.history.size() << " epochs";
      if (!r.history.empty()) std::cout << ", final loss " << r.history.back().loss;
      std::cout << "\nmultipliers: " << r.multiplier_grouping << "\nwrote " << out << "\n";
    } else if (ev->parsed()) {
      Normalizer norm;
      const Model model = load_model(ev_model, &norm);
      const Dataset ds = read_dataset(ev_data);
      const Dataset scored = ev_stride > 0 ? interleaved_split(ds, ev_stride).test : ds;
      print_metrics(evaluate(model, scored, norm));
    } else if (th->parsed()) {
      bool ok = true;
      auto line = [&](bool pass, const std::string& what) {
        std::cout << (pass ? "PASS " : "FAIL ") << what << "\n";
        ok = ok && pass;
      };
      int held = 0;
      for (int t = 0; t < th_trials; ++t) {
        const PwlPair pair = random_admissible_pair(th_seed + t, th_pieces);
        const ApproximationBound b = approximation_bound(pair.fp, pair.fq);
        held += b.actual <= b.bound + 1e-9;
      }
      line(held == th_trials, "approximation bound on " + std::to_string(held) + "/" +
                                  std::to_string(th_trials) + " random pairs");
      const ApproximationBound tight = approximation_bound(
          PwlFunction({0, 1, 2}, {0, 0, 1}), PwlFunction({0, 2}, {0, 0}));
      line(std::abs(tight.actual - tight.bound) < 1e-12,
           "worked example is tight (" + std::to_string(tight.actual) + " = " +
               std::to_string(tight.bound) + ")");
      const ReluCapacity rc = relu_capacity(4, 1);
      line(std::abs(rc.min_size - 1.0) < 1e-12 && std::abs(rc.max_pieces(4) - 8.0) < 1e-12,
           "ReLU capacity p=4, k=1: size >= 1, s=4 allows 8 pieces");
      line(lipschitz_capacity(1, 1, 3) == 2 && lipschitz_capacity(2, 2, 1) == 28,
           "Lipschitz capacity C(2,1)=2 and C(8,2)=28");
      if (!ok) return kStageFailure;
    } else if (run->parsed()) {
      if (!run_out.empty()) cfg.output_dir = run_out;
      if (cfg.output_dir.empty()) cfg.output_dir = default_out_dir();
      override(cfg.workers, run_workers);
      const Report report = run_experiment(cfg);
      std::printf("%-9s %8s %12s %10s %10s %10s %10s %9s\n", "mode", "entries", "TV",
                  "Lipschitz", "pred_err%", "viol%", "gap%", "gen_s");
      for (const ModeRow& r : report.rows) {
        std::printf("%-9s %8d %12.1f %10s %10s %10s %10s %9.3f\n", r.mode.c_str(),
                    r.entries, r.total_variation, cell(r.lipschitz).c_str(),
                    cell(r.prediction_error).c_str(), cell(r.constraint_violation).c_str(),
                    cell(r.optimality_gap).c_str(), r.generation_seconds);
      }
      std::cout << "wrote report to " << cfg.output_dir << "\n";
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return kStageFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStageFailure;
  }
  return 0;
}
