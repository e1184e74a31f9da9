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

#include "oddata/learner.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.h"

namespace oddata {
namespace {

using testing::instance_a;
using testing::random_instance;

void randomize(Model& m, std::uint64_t seed, bool biases) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto fill = [&](Dense& d) {
    for (double& w : d.weights) w = u(rng);
    for (double& b : d.biases) b = biases ? u(rng) : 0.0;
  };
  for (Dense& d : m.job_layers) fill(d);
  for (Dense& d : m.machine_layers) fill(d);
  for (Dense& d : m.shared_layers) fill(d);
  fill(m.output_layer);
}

std::vector<Dense*> layers(Model& m) {
  std::vector<Dense*> out;
  for (Dense& d : m.job_layers) out.push_back(&d);
  for (Dense& d : m.machine_layers) out.push_back(&d);
  for (Dense& d : m.shared_layers) out.push_back(&d);
  out.push_back(&m.output_layer);
  return out;
}

std::vector<double> random_vector(size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Dataset od_dataset(int steps, std::uint64_t seed) {
  PerturbationSpec spec;
  spec.steps = steps;
  return generate_od(perturb_family(random_instance(3, 2, 1, 9, seed), spec),
                     SolveBudget::exhaustive());
}

TEST_CASE("build_model shapes and determinism") {
  const Model m = build_model(2, 2, 0);
  CHECK(m.outputs() == 4);
  CHECK(m.job_layers.size() == 2);
  CHECK(m.machine_layers.size() == 2);
  CHECK(m.shared_layers[0].in == 16);
  CHECK(m.shared_layers[0].out == 8);
  CHECK(m.shared_layers[1].out == 8);
  CHECK(m.output_layer.out == 4);
  CHECK(build_model(2, 2, 0) == m);
  CHECK_FALSE(build_model(2, 2, 1) == m);

  const Model tiny = build_model(1, 1, 3);
  const auto y = forward(tiny, std::vector<double>{0.5});
  CHECK(y.size() == 1);
  CHECK(std::isfinite(y[0]));
  CHECK_THROWS_AS(forward(tiny, std::vector<double>{0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_model(0, 2, 0), std::invalid_argument);

  // Routing follows the instance's machines.
  const Model routed = build_model(instance_a(), 0);
  CHECK(routed.machine_tasks == std::vector<std::vector<int>>{{0, 3}, {1, 2}});
}

TEST_CASE("forward examples") {
  Model m = build_model(instance_a(), 5);
  randomize(m, 1, true);
  const std::vector<double> x = {0.2, 0.4, 0.1, 0.9};
  const auto y = forward(m, x);
  CHECK(forward(m, x) == y);

  Model scaled = m;
  for (double& w : scaled.output_layer.weights) w *= 3.0;
  for (double& b : scaled.output_layer.biases) b *= 3.0;
  const auto y3 = forward(scaled, x);
  for (size_t k = 0; k < y.size(); ++k) CHECK(y3[k] == doctest::Approx(3.0 * y[k]));

  Model zero = m;
  for (Dense* d : layers(zero)) {
    std::fill(d->weights.begin(), d->weights.end(), 0.0);
    std::fill(d->biases.begin(), d->biases.end(), 0.0);
  }
  for (double v : forward(zero, x)) CHECK(v == 0.0);
}

TEST_CASE("property: forward is positively homogeneous without biases") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Model m = build_model(3, 3, trial);
    randomize(m, trial, false);
    const auto x = random_vector(9, -1.0, 1.0, rng);
    const double c = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    std::vector<double> cx = x;
    for (double& v : cx) v *= c;
    const auto y = forward(m, x);
    const auto yc = forward(m, cx);
    for (size_t k = 0; k < y.size(); ++k) {
      CHECK(yc[k] == doctest::Approx(c * y[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("lagrangian_loss examples") {
  const JssInstance a = instance_a();
  const std::vector<double> pred = {0, 1, 0, 2};
  const std::vector<double> target = {0, 2, 0, 2};
  const LossResult r = lagrangian_loss(pred, target, a, Multipliers::uniform(2, 1.0));
  CHECK(r.mse == doctest::Approx(0.25));
  CHECK(r.precedence_violation == doctest::Approx(1.0));
  CHECK(r.loss == doctest::Approx(1.25));

  const LossResult zero = lagrangian_loss(pred, target, a, Multipliers::uniform(2, 0.0));
  const LossResult mse = mse_loss(pred, target);
  CHECK(zero.loss == mse.loss);
  CHECK(zero.gradient == mse.gradient);

  const LossResult feasible =
      lagrangian_loss(target, target, a, Multipliers::uniform(2, 3.0));
  CHECK(feasible.loss == 0.0);

  Multipliers bad = Multipliers::uniform(2, 1.0);
  bad.overlap[1] = -0.1;
  CHECK_THROWS_AS(lagrangian_loss(pred, target, a, bad), std::invalid_argument);
  CHECK_THROWS_AS(lagrangian_loss(pred, target, a, Multipliers::uniform(3, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(lagrangian_loss(std::vector<double>{0, 1}, target, a,
                                  Multipliers::uniform(2, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("overlap term follows the first argument on ties") {
  // One machine, two tasks of length 2 with equal starts: both branches of
  // the min are 2; the gradient pushes the first task up.
  const JssInstance inst = parse_instance("2 1\n0 2\n0 2\n");
  const std::vector<double> p = {1, 1};
  const LossResult r = lagrangian_loss(p, p, inst, Multipliers::uniform(1, 1.0));
  CHECK(r.overlap_violation[0] == 2.0);
  CHECK(r.gradient[0] == 1.0);
  CHECK(r.gradient[1] == -1.0);
}

// Distance of every hinge and min argument to its kink.
double kink_distance(const JssInstance& inst, const std::vector<double>& p, double scale) {
  double best = 1e300;
  auto d = [&](int i) { return inst.duration(i) / scale; };
  for (int j = 0; j < inst.jobs(); ++j) {
    for (int t = 0; t + 1 < inst.steps(); ++t) {
      const int a = inst.index(j, t);
      best = std::min(best, std::abs(p[a] + d(a) - p[a + 1]));
    }
  }
  for (int m = 0; m < inst.machines(); ++m) {
    const auto tasks = inst.tasks_on_machine(m);
    for (size_t x = 0; x < tasks.size(); ++x) {
      for (size_t y = x + 1; y < tasks.size(); ++y) {
        const int a = tasks[x], b = tasks[y];
        const double l = p[a] + d(a) - p[b];
        const double r = p[b] + d(b) - p[a];
        best = std::min({best, std::abs(l), std::abs(r),
                         std::abs(std::max(0.0, l) - std::max(0.0, r))});
      }
    }
  }
  return best;
}

TEST_CASE("property: loss gradient matches central differences") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; checked < 100; ++trial) {
    REQUIRE(trial < 1000);
    const JssInstance inst = random_instance(4, 3, 1, 9, trial);
    const double scale = 10.0;
    const auto p = random_vector(inst.task_count(), 0.0, 3.0, rng);
    if (kink_distance(inst, p, scale) < 1e-3) continue;
    const auto target = random_vector(inst.task_count(), 0.0, 3.0, rng);
    Multipliers mult{std::uniform_real_distribution<double>(0, 2)(rng),
                     random_vector(inst.machines(), 0.0, 2.0, rng)};
    const LossResult r = lagrangian_loss(p, target, inst, mult, scale);
    const double h = 1e-5;
    double diff2 = 0.0, norm2 = 0.0;
    for (int k = 0; k < inst.task_count(); ++k) {
      auto up = p, down = p;
      up[k] += h;
      down[k] -= h;
      const double fd = (lagrangian_loss(up, target, inst, mult, scale).loss -
                         lagrangian_loss(down, target, inst, mult, scale).loss) /
                        (2 * h);
      diff2 += (fd - r.gradient[k]) * (fd - r.gradient[k]);
      norm2 += r.gradient[k] * r.gradient[k];
    }
    CHECK(std::sqrt(diff2) <= 1e-4 * std::max(std::sqrt(norm2), 1e-12));
    ++checked;
  }
}

TEST_CASE("property: backward matches central differences") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Model m = build_model(3, 2, trial);
    randomize(m, 100 + trial, true);
    const auto x = random_vector(6, 0.0, 1.0, rng);
    const auto up = random_vector(6, -1.0, 1.0, rng);
    const Model g = backward(m, x, up);
    auto objective = [&](const Model& mm) {
      const auto y = forward(mm, x);
      double s = 0.0;
      for (size_t k = 0; k < y.size(); ++k) s += up[k] * y[k];
      return s;
    };
    Model probe = m;
    auto params = layers(probe);
    Model gg = g;
    auto grads = layers(gg);
    for (size_t l = 0; l < params.size(); ++l) {
      for (size_t i = 0; i < params[l]->weights.size(); i += 3) {
        const double keep = params[l]->weights[i];
        params[l]->weights[i] = keep + 1e-6;
        const double fp = objective(probe);
        params[l]->weights[i] = keep - 1e-6;
        const double fm = objective(probe);
        params[l]->weights[i] = keep;
        CHECK(grads[l]->weights[i] == doctest::Approx((fp - fm) / 2e-6).epsilon(1e-5));
      }
      for (size_t i = 0; i < params[l]->biases.size(); ++i) {
        const double keep = params[l]->biases[i];
        params[l]->biases[i] = keep + 1e-6;
        const double fp = objective(probe);
        params[l]->biases[i] = keep - 1e-6;
        const double fm = objective(probe);
        params[l]->biases[i] = keep;
        CHECK(grads[l]->biases[i] == doctest::Approx((fp - fm) / 2e-6).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("train on identical pairs reduces the loss") {
  Dataset ds = od_dataset(2, 4);
  ds.entries = std::vector<DatasetEntry>(8, ds.entries[0]);
  const Model m = build_model(ds.entries[0].instance, 0);
  TrainConfig cfg;
  cfg.epochs = 10;
  const TrainResult r = train(m, ds, cfg);
  REQUIRE(r.history.size() == 10);
  // The dual step raises the penalty weight, so only the MSE part is
  // monotone here; with frozen multipliers the whole loss falls.
  for (size_t e = 1; e < r.history.size(); ++e) {
    CHECK(r.history[e].mse < r.history[e - 1].mse);
  }
  cfg.dual_learning_rate = 0.0;
  cfg.initial_lambda = 0.1;
  const TrainResult frozen = train(m, ds, cfg);
  CHECK(frozen.history.back().loss < frozen.history.front().loss);
}

TEST_CASE("train reductions") {
  const Dataset ds = od_dataset(12, 8);
  const Model m = build_model(ds.entries[0].instance, 1);

  SUBCASE("zero epochs leave the model alone") {
    TrainConfig cfg;
    cfg.epochs = 0;
    const TrainResult r = train(m, ds, cfg);
    CHECK(r.model == m);
    CHECK(r.history.empty());
  }
  SUBCASE("dual learning rate 0 freezes the multipliers") {
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.dual_learning_rate = 0.0;
    cfg.initial_lambda = 0.4;
    const TrainResult r = train(m, ds, cfg);
    for (const EpochRecord& e : r.history) {
      CHECK(e.lambda == Multipliers::uniform(m.machines, 0.4));
    }
  }
  SUBCASE("lambda 0 is plain MSE, bit for bit") {
    TrainConfig lag;
    lag.epochs = 40;
    lag.dual_learning_rate = 0.0;
    TrainConfig plain = lag;
    plain.lagrangian = false;
    const TrainResult a = train(m, ds, lag);
    const TrainResult b = train(m, ds, plain);
    CHECK(a.model == b.model);
    REQUIRE(a.history.size() == b.history.size());
    for (size_t e = 0; e < a.history.size(); ++e) {
      CHECK(a.history[e].loss == b.history[e].loss);
    }
  }
  SUBCASE("multipliers stay nonnegative and training is deterministic") {
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.dual_learning_rate = 5e-2;
    const TrainResult a = train(m, ds, cfg);
    const TrainResult b = train(m, ds, cfg);
    CHECK(a.model == b.model);
    for (const EpochRecord& e : a.history) {
      CHECK(e.lambda.precedence >= 0.0);
      for (double l : e.lambda.overlap) CHECK(l >= 0.0);
    }
    CHECK(a.normalizer.output == static_cast<double>(ds.entries.back().objective));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(train(m, Dataset{}, TrainConfig{}), std::invalid_argument);
    TrainConfig cfg;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(train(m, ds, cfg), std::invalid_argument);
    CHECK_THROWS_AS(train(build_model(2, 2, 0), ds, TrainConfig{}),
                    std::invalid_argument);
  }
}

TEST_CASE("score_prediction examples") {
  const JssInstance a = instance_a();
  const Schedule target = Schedule::from_rows({{0, 2}, {0, 2}});
  const Metrics m = score_prediction(a, std::vector<double>{0, 1, 0, 2}, target);
  CHECK(m.prediction_error == 0.0);
  CHECK(m.constraint_violation == doctest::Approx(50.0));
  CHECK(m.optimality_gap == 0.0);

  const Metrics perfect = score_prediction(a, std::vector<double>{0, 2, 0, 2}, target);
  CHECK(perfect.prediction_error == 0.0);
  CHECK(perfect.constraint_violation == 0.0);
  CHECK(perfect.optimality_gap == 0.0);
}

TEST_CASE("evaluate with a zero network predicts all-zero starts") {
  const Dataset ds = od_dataset(4, 2);
  Model m = build_model(ds.entries[0].instance, 0);  // zero output layer
  const Metrics got = evaluate(m, ds, Normalizer{10.0, 100.0});
  double err = 0, viol = 0, gap = 0;
  const std::vector<double> zeros(ds.entries[0].instance.task_count(), 0.0);
  for (const DatasetEntry& e : ds.entries) {
    const Metrics s = score_prediction(e.instance, zeros, e.solution);
    err += s.prediction_error;
    viol += s.constraint_violation;
    gap += s.optimality_gap;
  }
  CHECK(got.entries == 4);
  CHECK(got.prediction_error == doctest::Approx(err / 4));
  CHECK(got.constraint_violation == doctest::Approx(viol / 4));
  CHECK(got.optimality_gap == doctest::Approx(gap / 4));
}

TEST_CASE("interleaved_split") {
  const Dataset ds = od_dataset(8, 1);
  const DatasetSplit s = interleaved_split(ds, 4);
  REQUIRE(s.test.entries.size() == 2);
  CHECK(s.train.entries.size() == 6);
  CHECK(s.test.entries[0] == ds.entries[3]);
  CHECK(s.test.entries[1] == ds.entries[7]);
  CHECK_THROWS_AS(interleaved_split(ds, 1), std::invalid_argument);
}

TEST_CASE("checkpoint round trip") {
  Model m = build_model(instance_a(), 4);
  randomize(m, 12, true);
  const Normalizer norm{3.0, 17.0};
  Normalizer back_norm;
  const Model back = model_from_json(model_to_json(m, norm), &back_norm);
  CHECK(back == m);
  CHECK(back_norm == norm);

  const auto path = std::filesystem::temp_directory_path() / "oddata_model_test.json";
  save_model(m, norm, path.string());
  CHECK(load_model(path.string()) == m);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(model_from_json("{}"), std::runtime_error);
  CHECK_THROWS_AS(model_from_json("not json"), std::runtime_error);
  std::string text = model_to_json(m, norm);
  text.replace(text.find("\"jobs\":2"), 8, "\"jobs\":3");
  CHECK_THROWS_AS(model_from_json(text), std::runtime_error);
}

}  // namespace
}  // namespace oddata
