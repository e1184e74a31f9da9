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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "oddata/projection.h"

namespace oddata {

using json = nlohmann::ordered_json;

Multipliers Multipliers::uniform(int machines, double value) {
  return {value, std::vector<double>(machines, value)};
}

namespace {

Dense make_dense(int in, int out, std::mt19937_64& rng) {
  Dense d{in, out, std::vector<double>(static_cast<size_t>(in) * out),
          std::vector<double>(out, 0.0)};
  const double bound = std::sqrt(6.0 / in);
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& w : d.weights) w = u(rng);
  return d;
}

void apply(const Dense& layer, std::span<const double> x, std::vector<double>& z) {
  z.assign(layer.biases.begin(), layer.biases.end());
  for (int o = 0; o < layer.out; ++o) {
    const double* row = &layer.weights[static_cast<size_t>(o) * layer.in];
    double acc = z[o];
    for (int i = 0; i < layer.in; ++i) acc += row[i] * x[i];
    z[o] = acc;
  }
}

std::vector<double> relu(const std::vector<double>& z) {
  std::vector<double> a(z.size());
  for (size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
  return a;
}

// Adds g (x) x to the layer gradient and returns W^T g when `back` is set.
void accumulate(const Dense& layer, Dense& grad, std::span<const double> x,
                std::span<const double> g, std::vector<double>* back) {
  if (back) back->assign(layer.in, 0.0);
  for (int o = 0; o < layer.out; ++o) {
    if (g[o] == 0.0) continue;
    const size_t base = static_cast<size_t>(o) * layer.in;
    for (int i = 0; i < layer.in; ++i) {
      grad.weights[base + i] += g[o] * x[i];
      if (back) (*back)[i] += layer.weights[base + i] * g[o];
    }
    grad.biases[o] += g[o];
  }
}

struct Trace {
  std::vector<std::vector<double>> block_in;
  std::vector<std::vector<double>> block_pre;
  std::vector<double> concat;
  std::vector<double> pre1, post1, pre2, post2;
  std::vector<double> out;
};

std::vector<double> gather_block_input(const Model& m, int block,
                                       std::span<const double> d) {
  std::vector<double> x;
  if (block < m.jobs) {
    const int T = m.machines;
    x.assign(d.begin() + block * T, d.begin() + (block + 1) * T);
  } else {
    for (int idx : m.machine_tasks[block - m.jobs]) x.push_back(d[idx]);
  }
  return x;
}

const Dense& block_layer(const Model& m, int block) {
  return block < m.jobs ? m.job_layers[block] : m.machine_layers[block - m.jobs];
}

Dense& block_layer(Model& m, int block) {
  return block < m.jobs ? m.job_layers[block] : m.machine_layers[block - m.jobs];
}

Trace run(const Model& m, std::span<const double> d) {
  if (static_cast<int>(d.size()) != m.inputs()) {
    throw std::invalid_argument("forward: expected " + std::to_string(m.inputs()) +
                                " durations, got " + std::to_string(d.size()));
  }
  Trace t;
  const int blocks = m.jobs + m.machines;
  t.block_in.resize(blocks);
  t.block_pre.resize(blocks);
  for (int b = 0; b < blocks; ++b) {
    t.block_in[b] = gather_block_input(m, b, d);
    apply(block_layer(m, b), t.block_in[b], t.block_pre[b]);
    for (double z : t.block_pre[b]) t.concat.push_back(z > 0.0 ? z : 0.0);
  }
  apply(m.shared_layers[0], t.concat, t.pre1);
  t.post1 = relu(t.pre1);
  apply(m.shared_layers[1], t.post1, t.pre2);
  t.post2 = relu(t.pre2);
  apply(m.output_layer, t.post2, t.out);
  return t;
}

void mask(std::vector<double>& g, const std::vector<double>& pre) {
  for (size_t i = 0; i < g.size(); ++i) {
    if (!(pre[i] > 0.0)) g[i] = 0.0;
  }
}

void backprop(const Model& m, const Trace& t, std::span<const double> upstream,
              Model& grad) {
  std::vector<double> g2, g1, gc;
  accumulate(m.output_layer, grad.output_layer, t.post2, upstream, &g2);
  mask(g2, t.pre2);
  accumulate(m.shared_layers[1], grad.shared_layers[1], t.post1, g2, &g1);
  mask(g1, t.pre1);
  accumulate(m.shared_layers[0], grad.shared_layers[0], t.concat, g1, &gc);
  size_t offset = 0;
  for (int b = 0; b < m.jobs + m.machines; ++b) {
    const Dense& layer = block_layer(m, b);
    std::vector<double> gb(gc.begin() + offset, gc.begin() + offset + layer.out);
    mask(gb, t.block_pre[b]);
    accumulate(layer, block_layer(grad, b), t.block_in[b], gb, nullptr);
    offset += layer.out;
  }
}

template <typename Fn>
void for_each_layer(Model& m, Fn&& fn) {
  for (Dense& d : m.job_layers) fn(d);
  for (Dense& d : m.machine_layers) fn(d);
  for (Dense& d : m.shared_layers) fn(d);
  fn(m.output_layer);
}

Model zeros_like(Model m) {
  for_each_layer(m, [](Dense& d) {
    std::fill(d.weights.begin(), d.weights.end(), 0.0);
    std::fill(d.biases.begin(), d.biases.end(), 0.0);
  });
  return m;
}

void sgd_step(Model& m, Model& grad, double lr) {
  std::vector<Dense*> params, grads;
  for_each_layer(m, [&](Dense& d) { params.push_back(&d); });
  for_each_layer(grad, [&](Dense& d) { grads.push_back(&d); });
  for (size_t k = 0; k < params.size(); ++k) {
    for (size_t i = 0; i < params[k]->weights.size(); ++i) {
      params[k]->weights[i] -= lr * grads[k]->weights[i];
    }
    for (size_t i = 0; i < params[k]->biases.size(); ++i) {
      params[k]->biases[i] -= lr * grads[k]->biases[i];
    }
  }
}

void check_entry_shape(const Model& m, const JssInstance& inst) {
  if (inst.jobs() != m.jobs || inst.machines() != m.machines) {
    throw std::invalid_argument("dataset shape does not match the model");
  }
}

std::vector<double> scaled(std::span<const Time> v, double scale) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]) / scale;
  return out;
}

Model assemble(int jobs, int machines, std::vector<std::vector<int>> routing,
               std::uint64_t seed) {
  if (jobs < 1 || machines < 1) {
    throw std::invalid_argument("model needs at least one job and machine");
  }
  std::mt19937_64 rng(seed);
  Model m;
  m.jobs = jobs;
  m.machines = machines;
  m.machine_tasks = std::move(routing);
  const int jt = jobs * machines;
  for (int j = 0; j < jobs; ++j) {
    m.job_layers.push_back(make_dense(machines, 2 * machines, rng));
  }
  for (int k = 0; k < machines; ++k) {
    m.machine_layers.push_back(make_dense(jobs, 2 * jobs, rng));
  }
  m.shared_layers.push_back(make_dense(4 * jt, 2 * jt, rng));
  m.shared_layers.push_back(make_dense(2 * jt, 2 * jt, rng));
  m.output_layer = make_dense(2 * jt, jt, rng);
  // Starting from a zero output keeps the early steps from chasing the noise
  // of a random readout; the hidden layers still start random.
  std::fill(m.output_layer.weights.begin(), m.output_layer.weights.end(), 0.0);
  return m;
}

json dense_json(const Dense& d) {
  json o;
  o["in"] = d.in;
  o["out"] = d.out;
  o["weights"] = d.weights;
  o["biases"] = d.biases;
  return o;
}

Dense dense_from(const json& o, int in, int out) {
  Dense d{o.at("in").get<int>(), o.at("out").get<int>(),
          o.at("weights").get<std::vector<double>>(),
          o.at("biases").get<std::vector<double>>()};
  if (d.in != in || d.out != out ||
      d.weights.size() != static_cast<size_t>(in) * out ||
      d.biases.size() != static_cast<size_t>(out)) {
    throw std::runtime_error("checkpoint layer has the wrong shape");
  }
  return d;
}

}  // namespace

Model build_model(const JssInstance& routing, std::uint64_t seed) {
  std::vector<std::vector<int>> tasks(routing.machines());
  for (int k = 0; k < routing.machines(); ++k) tasks[k] = routing.tasks_on_machine(k);
  return assemble(routing.jobs(), routing.machines(), std::move(tasks), seed);
}

Model build_model(int jobs, int machines, std::uint64_t seed) {
  std::vector<std::vector<int>> tasks(std::max(machines, 0));
  for (int k = 0; k < machines; ++k) {
    for (int j = 0; j < jobs; ++j) tasks[k].push_back(j * machines + k);
  }
  return assemble(jobs, machines, std::move(tasks), seed);
}

std::vector<double> forward(const Model& model, std::span<const double> durations) {
  return run(model, durations).out;
}

Model backward(const Model& model, std::span<const double> durations,
               std::span<const double> upstream) {
  if (static_cast<int>(upstream.size()) != model.outputs()) {
    throw std::invalid_argument("backward: upstream has the wrong size");
  }
  Model grad = zeros_like(model);
  backprop(model, run(model, durations), upstream, grad);
  return grad;
}

LossResult mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw std::invalid_argument("mse: shape mismatch");
  }
  LossResult r;
  const double n = static_cast<double>(pred.size());
  r.gradient.resize(pred.size());
  double sum = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    sum += diff * diff;
    r.gradient[i] = 2.0 * diff / n;
  }
  r.mse = sum / n;
  r.loss = r.mse;
  return r;
}

LossResult lagrangian_loss(std::span<const double> pred,
                           std::span<const double> target,
                           const JssInstance& inst, const Multipliers& mult,
                           double scale) {
  if (static_cast<int>(pred.size()) != inst.task_count()) {
    throw std::invalid_argument("loss: prediction does not match the instance");
  }
  if (static_cast<int>(mult.overlap.size()) != inst.machines()) {
    throw std::invalid_argument("loss: need one overlap multiplier per machine");
  }
  if (mult.precedence < 0.0 ||
      std::any_of(mult.overlap.begin(), mult.overlap.end(),
                  [](double l) { return l < 0.0; })) {
    throw std::invalid_argument("loss: multipliers must be nonnegative");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("loss: scale must be positive");
  LossResult r = mse_loss(pred, target);
  auto d = [&](int idx) { return static_cast<double>(inst.duration(idx)) / scale; };

  const double lp = mult.precedence;
  for (int j = 0; j < inst.jobs(); ++j) {
    for (int t = 0; t + 1 < inst.steps(); ++t) {
      const int a = inst.index(j, t);
      const double v = pred[a] + d(a) - pred[a + 1];
      if (v > 0.0) {
        r.precedence_violation += v;
        if (lp != 0.0) {
          r.gradient[a] += lp;
          r.gradient[a + 1] -= lp;
        }
      }
    }
  }
  if (lp != 0.0) r.loss += lp * r.precedence_violation;

  r.overlap_violation.assign(inst.machines(), 0.0);
  for (int m = 0; m < inst.machines(); ++m) {
    const double lm = mult.overlap[m];
    const auto tasks = inst.tasks_on_machine(m);
    for (size_t x = 0; x < tasks.size(); ++x) {
      const int a = tasks[x];
      if (inst.duration(a) == 0) continue;
      for (size_t y = x + 1; y < tasks.size(); ++y) {
        const int b = tasks[y];
        if (inst.duration(b) == 0) continue;
        const double left = std::max(0.0, pred[a] + d(a) - pred[b]);
        const double right = std::max(0.0, pred[b] + d(b) - pred[a]);
        if (left <= right) {
          if (left > 0.0) {
            r.overlap_violation[m] += left;
            if (lm != 0.0) {
              r.gradient[a] += lm;
              r.gradient[b] -= lm;
            }
          }
        } else if (right > 0.0) {
          r.overlap_violation[m] += right;
          if (lm != 0.0) {
            r.gradient[b] += lm;
            r.gradient[a] -= lm;
          }
        }
      }
    }
    if (lm != 0.0) r.loss += lm * r.overlap_violation[m];
  }
  return r;
}

TrainResult train(const Model& model, const Dataset& ds, const TrainConfig& cfg) {
  if (ds.entries.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.epochs < 0 || cfg.batch_size < 1 || !(cfg.learning_rate > 0.0) ||
      cfg.dual_learning_rate < 0.0 || cfg.initial_lambda < 0.0) {
    throw std::invalid_argument("train: invalid configuration");
  }
  TrainResult res;
  res.model = model;
  res.lambda = Multipliers::uniform(model.machines, cfg.lagrangian ? cfg.initial_lambda : 0.0);
  Time longest_task = 0;
  Time worst = 0;
  for (const DatasetEntry& e : ds.entries) {
    worst = std::max(worst, e.objective);
    for (Time d : e.instance.durations()) longest_task = std::max(longest_task, d);
  }
  res.normalizer.input = cfg.input_scale > 0.0 ? cfg.input_scale
                         : longest_task > 0    ? static_cast<double>(longest_task)
                                               : 1.0;
  res.normalizer.output = cfg.output_scale > 0.0 ? cfg.output_scale
                          : worst > 0            ? static_cast<double>(worst)
                                                 : 1.0;
  const double out_scale = res.normalizer.output;

  const size_t n = ds.entries.size();
  std::vector<std::vector<double>> xs(n), ys(n);
  for (size_t i = 0; i < n; ++i) {
    check_entry_shape(model, ds.entries[i].instance);
    xs[i] = scaled(ds.entries[i].instance.durations(), res.normalizer.input);
    ys[i] = scaled(ds.entries[i].solution.starts(), out_scale);
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Model grad = zeros_like(model);
  std::vector<double> upstream;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord rec;
    double prec_sum = 0.0;
    std::vector<double> overlap_sum(model.machines, 0.0);
    for (size_t start = 0; start < n; start += cfg.batch_size) {
      const size_t stop = std::min(n, start + cfg.batch_size);
      const double inv = 1.0 / static_cast<double>(stop - start);
      grad = zeros_like(std::move(grad));
      for (size_t k = start; k < stop; ++k) {
        const size_t i = order[k];
        const Trace t = run(res.model, xs[i]);
        const LossResult loss =
            cfg.lagrangian ? lagrangian_loss(t.out, ys[i], ds.entries[i].instance,
                                             res.lambda, out_scale)
                           : mse_loss(t.out, ys[i]);
        rec.loss += loss.loss;
        rec.mse += loss.mse;
        if (cfg.lagrangian) {
          prec_sum += loss.precedence_violation;
          for (int m = 0; m < model.machines; ++m) {
            overlap_sum[m] += loss.overlap_violation[m];
          }
        }
        upstream.resize(loss.gradient.size());
        for (size_t q = 0; q < upstream.size(); ++q) upstream[q] = loss.gradient[q] * inv;
        backprop(res.model, t, upstream, grad);
      }
      sgd_step(res.model, grad, cfg.learning_rate);
    }
    const double dn = static_cast<double>(n);
    rec.loss /= dn;
    rec.mse /= dn;
    double total = prec_sum;
    for (double v : overlap_sum) total += v;
    rec.mean_violation = total / dn;
    if (cfg.lagrangian && cfg.dual_learning_rate > 0.0) {
      res.lambda.precedence = std::max(
          0.0, res.lambda.precedence + cfg.dual_learning_rate * prec_sum / dn);
      for (int m = 0; m < model.machines; ++m) {
        res.lambda.overlap[m] = std::max(
            0.0, res.lambda.overlap[m] + cfg.dual_learning_rate * overlap_sum[m] / dn);
      }
    }
    rec.lambda = res.lambda;
    res.history.push_back(std::move(rec));
  }
  return res;
}

Metrics score_prediction(const JssInstance& inst, std::span<const double> predicted,
                         const Schedule& target) {
  if (!target.matches(inst)) throw std::invalid_argument("score: shape mismatch");
  const Schedule p = project_feasible(inst, predicted);
  const double avg = static_cast<double>(inst.total_duration()) / inst.task_count();
  if (!(avg > 0.0)) {
    throw std::invalid_argument("score: instance has zero average duration");
  }
  Metrics out;
  out.entries = 1;
  double err = 0.0, viol = 0.0;
  for (int k = 0; k < inst.task_count(); ++k) {
    err += std::abs(static_cast<double>(p[k] - target[k]));
    viol += std::abs(static_cast<double>(p[k]) - predicted[k]);
  }
  out.prediction_error = err / avg * 100.0;
  out.constraint_violation = viol / avg * 100.0;
  const Time ref = makespan(inst, target);
  out.optimality_gap =
      ref > 0 ? static_cast<double>(makespan(inst, p) - ref) / ref * 100.0 : 0.0;
  return out;
}

std::vector<double> predict(const Model& model, const JssInstance& inst,
                            const Normalizer& norm) {
  if (!(norm.input > 0.0) || !(norm.output > 0.0)) {
    throw std::invalid_argument("normalizer scales must be positive");
  }
  check_entry_shape(model, inst);
  std::vector<double> y = forward(model, scaled(inst.durations(), norm.input));
  for (double& v : y) v *= norm.output;
  return y;
}

Metrics evaluate(const Model& model, const Dataset& ds, const Normalizer& norm) {
  Metrics total;
  for (const DatasetEntry& e : ds.entries) {
    const Metrics m = score_prediction(e.instance, predict(model, e.instance, norm),
                                       e.solution);
    total.prediction_error += m.prediction_error;
    total.constraint_violation += m.constraint_violation;
    total.optimality_gap += m.optimality_gap;
    ++total.entries;
  }
  if (total.entries > 0) {
    total.prediction_error /= total.entries;
    total.constraint_violation /= total.entries;
    total.optimality_gap /= total.entries;
  }
  return total;
}

DatasetSplit interleaved_split(const Dataset& ds, int stride) {
  if (stride < 2) throw std::invalid_argument("split stride must be at least 2");
  DatasetSplit s;
  s.train.mode = s.test.mode = ds.mode;
  s.train.provenance = s.test.provenance = ds.provenance;
  for (size_t i = 0; i < ds.entries.size(); ++i) {
    (i % stride == static_cast<size_t>(stride - 1) ? s.test : s.train)
        .entries.push_back(ds.entries[i]);
  }
  return s;
}

std::string model_to_json(const Model& model, const Normalizer& norm) {
  json o;
  o["format"] = "oddata-model";
  o["version"] = 1;
  o["jobs"] = model.jobs;
  o["machines"] = model.machines;
  o["input_scale"] = norm.input;
  o["output_scale"] = norm.output;
  o["machine_tasks"] = model.machine_tasks;
  json layers = json::object();
  json jl = json::array(), ml = json::array(), sl = json::array();
  for (const Dense& d : model.job_layers) jl.push_back(dense_json(d));
  for (const Dense& d : model.machine_layers) ml.push_back(dense_json(d));
  for (const Dense& d : model.shared_layers) sl.push_back(dense_json(d));
  layers["job"] = std::move(jl);
  layers["machine"] = std::move(ml);
  layers["shared"] = std::move(sl);
  layers["output"] = dense_json(model.output_layer);
  o["layers"] = std::move(layers);
  return o.dump();
}

Model model_from_json(const std::string& text, Normalizer* norm) {
  try {
    const json o = json::parse(text);
    if (o.at("format") != "oddata-model" || o.at("version") != 1) {
      throw std::runtime_error("not an oddata model checkpoint");
    }
    Model m;
    m.jobs = o.at("jobs").get<int>();
    m.machines = o.at("machines").get<int>();
    if (m.jobs < 1 || m.machines < 1) throw std::runtime_error("bad model shape");
    m.machine_tasks = o.at("machine_tasks").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(m.machine_tasks.size()) != m.machines) {
      throw std::runtime_error("bad machine routing");
    }
    for (const auto& tasks : m.machine_tasks) {
      if (static_cast<int>(tasks.size()) != m.jobs) {
        throw std::runtime_error("bad machine routing");
      }
      for (int idx : tasks) {
        if (idx < 0 || idx >= m.jobs * m.machines) {
          throw std::runtime_error("bad machine routing");
        }
      }
    }
    const json& layers = o.at("layers");
    const int jt = m.jobs * m.machines;
    if (layers.at("job").size() != static_cast<size_t>(m.jobs) ||
        layers.at("machine").size() != static_cast<size_t>(m.machines) ||
        layers.at("shared").size() != 2) {
      throw std::runtime_error("checkpoint has the wrong number of layers");
    }
    for (const json& d : layers.at("job")) {
      m.job_layers.push_back(dense_from(d, m.machines, 2 * m.machines));
    }
    for (const json& d : layers.at("machine")) {
      m.machine_layers.push_back(dense_from(d, m.jobs, 2 * m.jobs));
    }
    m.shared_layers.push_back(dense_from(layers.at("shared")[0], 4 * jt, 2 * jt));
    m.shared_layers.push_back(dense_from(layers.at("shared")[1], 2 * jt, 2 * jt));
    m.output_layer = dense_from(layers.at("output"), 2 * jt, jt);
    if (norm) {
      norm->input = o.at("input_scale").get<double>();
      norm->output = o.at("output_scale").get<double>();
    }
    return m;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid model checkpoint: ") + e.what());
  }
}

void save_model(const Model& model, const Normalizer& norm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << model_to_json(model, norm) << '\n';
}

Model load_model(const std::string& path, Normalizer* norm) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str(), norm);
}

}  // namespace oddata
