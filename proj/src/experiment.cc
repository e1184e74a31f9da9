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

#include "oddata/experiment.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "oddata/pwl.h"

namespace oddata {

using json = nlohmann::ordered_json;

ExperimentConfig::ExperimentConfig() {
  standard.budget.seed = 0;
  od.budget.seed = 1;
}

namespace {

std::string trim(std::string_view s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("bad value for " + key + ": '" + value +
                              "' (expected true|false)");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

template <typename T>
Field number_field(T ExperimentConfig::*member) {
  return {[member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*member);
            else return std::to_string(c.*member);
          },
          [member](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.*member = parse_number<T>(k, v);
          }};
}

template <typename T, typename Get>
Field generic_number(Get ref) {
  return {[ref](const ExperimentConfig& c) {
            const T v = ref(const_cast<ExperimentConfig&>(c));
            if constexpr (std::is_floating_point_v<T>) return format_double(v);
            else return std::to_string(v);
          },
          [ref](ExperimentConfig& c, const std::string& k, const std::string& v) {
            ref(c) = parse_number<T>(k, v);
          }};
}

void add_mode_fields(std::map<std::string, Field>& f, const std::string& prefix,
                     ModeSettings ExperimentConfig::*mode) {
  f[prefix + ".time_limit"] = {
      [mode](const ExperimentConfig& c) {
        return format_double((c.*mode).budget.time_limit.count());
      },
      [mode](ExperimentConfig& c, const std::string& k, const std::string& v) {
        (c.*mode).budget.time_limit = Seconds(parse_number<double>(k, v));
      }};
  f[prefix + ".node_limit"] = {
      [mode](const ExperimentConfig& c) {
        const auto& n = (c.*mode).budget.node_limit;
        return n ? std::to_string(*n) : std::string("none");
      },
      [mode](ExperimentConfig& c, const std::string& k, const std::string& v) {
        if (v == "none" || v.empty()) {
          (c.*mode).budget.node_limit.reset();
        } else {
          (c.*mode).budget.node_limit = parse_number<std::int64_t>(k, v);
        }
      }};
  f[prefix + ".seed"] = generic_number<std::uint64_t>(
      [mode](ExperimentConfig& c) -> std::uint64_t& { return (c.*mode).budget.seed; });
  f[prefix + ".model_seed"] = generic_number<std::uint64_t>(
      [mode](ExperimentConfig& c) -> std::uint64_t& { return (c.*mode).model_seed; });
  f[prefix + ".train_seed"] = generic_number<std::uint64_t>(
      [mode](ExperimentConfig& c) -> std::uint64_t& { return (c.*mode).train.seed; });
  f[prefix + ".epochs"] = generic_number<int>(
      [mode](ExperimentConfig& c) -> int& { return (c.*mode).train.epochs; });
  f[prefix + ".batch_size"] = generic_number<int>(
      [mode](ExperimentConfig& c) -> int& { return (c.*mode).train.batch_size; });
  f[prefix + ".learning_rate"] = generic_number<double>(
      [mode](ExperimentConfig& c) -> double& { return (c.*mode).train.learning_rate; });
  f[prefix + ".dual_learning_rate"] = generic_number<double>(
      [mode](ExperimentConfig& c) -> double& {
        return (c.*mode).train.dual_learning_rate;
      });
  f[prefix + ".initial_lambda"] = generic_number<double>(
      [mode](ExperimentConfig& c) -> double& { return (c.*mode).train.initial_lambda; });
  f[prefix + ".lagrangian"] = {
      [mode](const ExperimentConfig& c) {
        return std::string((c.*mode).train.lagrangian ? "true" : "false");
      },
      [mode](ExperimentConfig& c, const std::string& k, const std::string& v) {
        (c.*mode).train.lagrangian = parse_bool(k, v);
      }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> f;
    f["instance"] = {[](const ExperimentConfig& c) { return c.instance_path; },
                     [](ExperimentConfig& c, const std::string&, const std::string& v) {
                       c.instance_path = v;
                     }};
    f["jobs"] = number_field(&ExperimentConfig::jobs);
    f["machines"] = number_field(&ExperimentConfig::machines);
    f["min_duration"] = number_field(&ExperimentConfig::min_duration);
    f["max_duration"] = number_field(&ExperimentConfig::max_duration);
    f["instance_seed"] = number_field(&ExperimentConfig::instance_seed);
    f["slow_machine"] = generic_number<int>(
        [](ExperimentConfig& c) -> int& { return c.perturbation.machine; });
    f["steps"] = generic_number<int>(
        [](ExperimentConfig& c) -> int& { return c.perturbation.steps; });
    f["max_increase"] = generic_number<double>(
        [](ExperimentConfig& c) -> double& { return c.perturbation.max_increase; });
    f["scale"] = generic_number<Time>(
        [](ExperimentConfig& c) -> Time& { return c.perturbation.scale; });
    add_mode_fields(f, "standard", &ExperimentConfig::standard);
    add_mode_fields(f, "od", &ExperimentConfig::od);
    f["split_stride"] = number_field(&ExperimentConfig::split_stride);
    f["workers"] = number_field(&ExperimentConfig::workers);
    f["record_timing"] = {
        [](const ExperimentConfig& c) {
          return std::string(c.record_timing ? "true" : "false");
        },
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.record_timing = parse_bool(k, v);
        }};
    f["output_dir"] = {[](const ExperimentConfig& c) { return c.output_dir; },
                       [](ExperimentConfig& c, const std::string&, const std::string& v) {
                         c.output_dir = v;
                       }};
    return f;
  }();
  return table;
}

void spill(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

std::string csv_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value) {
  const auto& table = fields();
  const auto it = table.find(key);
  if (it == table.end()) throw std::invalid_argument("unknown config key '" + key + "'");
  it->second.set(cfg, key, value);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    try {
      apply_setting(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  return cfg;
}

ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : fields()) {
    out += key + " = " + field.get(cfg) + "\n";
  }
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (cfg.instance_path.empty()) {
    if (cfg.jobs < 1 || cfg.machines < 1) fail("jobs and machines must be >= 1");
    if (cfg.min_duration < 0 || cfg.max_duration < cfg.min_duration) {
      fail("duration range must satisfy 0 <= min_duration <= max_duration");
    }
  }
  if (cfg.perturbation.steps < 2) fail("steps must be >= 2");
  if (cfg.split_stride < 2) fail("split_stride must be >= 2");
  if (cfg.workers < 1) fail("workers must be >= 1");
  for (const ModeSettings* m : {&cfg.standard, &cfg.od}) {
    if (!(m->budget.time_limit.count() > 0.0)) fail("time_limit must be positive");
    if (m->budget.node_limit && *m->budget.node_limit < 1) fail("node_limit must be >= 1");
    if (m->train.epochs < 0 || m->train.batch_size < 1 ||
        !(m->train.learning_rate > 0.0) || m->train.dual_learning_rate < 0.0 ||
        m->train.initial_lambda < 0.0) {
      fail("invalid training settings");
    }
  }
}

std::vector<Time> reference_curve(const Dataset& ds) {
  std::vector<Time> out;
  for (const DatasetEntry& e : ds.entries) {
    out.push_back(l1_distance(e.solution, ds.entries.front().solution));
  }
  return out;
}

Report run_experiment(const ExperimentConfig& cfg) {
  stage("config", [&] { validate_config(cfg); return 0; });
  using Clock = std::chrono::steady_clock;

  const std::vector<JssInstance> family = stage("family", [&] {
    const JssInstance base =
        cfg.instance_path.empty()
            ? random_instance(cfg.jobs, cfg.machines, cfg.min_duration,
                              cfg.max_duration, cfg.instance_seed)
            : read_instance_file(cfg.instance_path);
    return perturb_family(base, cfg.perturbation);
  });

  struct ModeRun {
    Dataset data;
    double seconds = 0.0;
  };
  auto generate = [&](DatasetMode mode) {
    const std::string name = std::string("gen-") + std::string(mode_name(mode));
    return stage(name, [&] {
      const auto t0 = Clock::now();
      ModeRun run;
      run.data = mode == DatasetMode::kStandard
                     ? generate_standard(family, cfg.standard.budget,
                                         cfg.standard.budget.seed, cfg.workers)
                     : generate_od(family, cfg.od.budget);
      run.seconds = cfg.record_timing
                        ? std::chrono::duration<double>(Clock::now() - t0).count()
                        : 0.0;
      validate_dataset(run.data);
      return run;
    });
  };
  const ModeRun standard = generate(DatasetMode::kStandard);
  const ModeRun od = generate(DatasetMode::kOptimalDesign);

  namespace fs = std::filesystem;
  const bool write = !cfg.output_dir.empty();
  if (write) {
    stage("write", [&] {
      fs::create_directories(cfg.output_dir);
      write_family(family, (fs::path(cfg.output_dir) / "family.jsonl").string());
      write_dataset(standard.data, (fs::path(cfg.output_dir) / "standard.jsonl").string());
      write_dataset(od.data, (fs::path(cfg.output_dir) / "od.jsonl").string());
      spill(fs::path(cfg.output_dir) / "config.txt", config_to_text(cfg));
      return 0;
    });
  }

  Report report;
  auto row_for = [&](const ModeRun& run, const ModeSettings& settings) {
    const std::string name(mode_name(run.data.mode));
    ModeRow row;
    row.mode = name;
    row.entries = static_cast<int>(run.data.entries.size());
    row.generation_seconds = run.seconds;
    stage("metrics-" + name, [&] {
      row.total_variation = total_variation(run.data);
      row.slope_variation =
          run.data.entries.size() >= 2 ? trajectory_slope_variation(run.data) : 0.0;
      try {
        row.lipschitz = lipschitz_constant(run.data);
      } catch (const std::invalid_argument&) {
        row.lipschitz.reset();  // identical adjacent inputs
      }
      return 0;
    });
    stage("train-" + name, [&] {
      const DatasetSplit split = interleaved_split(run.data, cfg.split_stride);
      if (split.train.entries.empty()) return 0;
      const TrainResult trained =
          train(build_model(family.front(), settings.model_seed), split.train,
                settings.train);
      if (write) {
        save_model(trained.model, trained.normalizer,
                   (fs::path(cfg.output_dir) / ("model_" + name + ".json")).string());
      }
      if (!split.test.entries.empty()) {
        const Metrics m = evaluate(trained.model, split.test, trained.normalizer);
        row.prediction_error = m.prediction_error;
        row.constraint_violation = m.constraint_violation;
        row.optimality_gap = m.optimality_gap;
      }
      return 0;
    });
    return row;
  };
  report.rows.push_back(row_for(standard, cfg.standard));
  report.rows.push_back(row_for(od, cfg.od));

  const auto cs = reference_curve(standard.data);
  const auto co = reference_curve(od.data);
  for (size_t i = 0; i < cs.size(); ++i) {
    report.curve.push_back({static_cast<int>(i + 1), cs[i], co[i]});
  }

  if (write) {
    stage("report", [&] {
      emit_report(report, ReportFormat::kJson, cfg.output_dir);
      emit_report(report, ReportFormat::kCsv, cfg.output_dir);
      return 0;
    });
  }
  return report;
}

std::string report_to_csv(const Report& report) {
  std::string out =
      "mode,entries,total_variation,lipschitz,slope_variation,prediction_error,"
      "constraint_violation,optimality_gap,generation_seconds\n";
  for (const ModeRow& r : report.rows) {
    out += r.mode + "," + std::to_string(r.entries) + "," +
           format_double(r.total_variation) + "," + csv_cell(r.lipschitz) + "," +
           format_double(r.slope_variation) + "," + csv_cell(r.prediction_error) +
           "," + csv_cell(r.constraint_violation) + "," + csv_cell(r.optimality_gap) +
           "," + format_double(r.generation_seconds) + "\n";
  }
  return out;
}

std::string curve_to_csv(const Report& report) {
  std::string out = "index,standard,od\n";
  for (const CurvePoint& p : report.curve) {
    out += std::to_string(p.index) + "," + std::to_string(p.standard) + "," +
           std::to_string(p.od) + "\n";
  }
  return out;
}

std::string report_to_json(const Report& report) {
  json o;
  o["version"] = Report::kVersion;
  json rows = json::array();
  for (const ModeRow& r : report.rows) {
    json row;
    row["mode"] = r.mode;
    row["entries"] = r.entries;
    row["total_variation"] = r.total_variation;
    row["lipschitz"] = optional_json(r.lipschitz);
    row["slope_variation"] = r.slope_variation;
    row["prediction_error"] = optional_json(r.prediction_error);
    row["constraint_violation"] = optional_json(r.constraint_violation);
    row["optimality_gap"] = optional_json(r.optimality_gap);
    row["generation_seconds"] = r.generation_seconds;
    rows.push_back(std::move(row));
  }
  o["rows"] = std::move(rows);
  json curve = json::array();
  for (const CurvePoint& p : report.curve) {
    curve.push_back({{"index", p.index}, {"standard", p.standard}, {"od", p.od}});
  }
  o["curve"] = std::move(curve);
  return o.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
  try {
    const json o = json::parse(text);
    if (o.at("version").get<int>() != Report::kVersion) {
      throw std::runtime_error("unsupported report version");
    }
    Report r;
    for (const json& row : o.at("rows")) {
      ModeRow m;
      m.mode = row.at("mode").get<std::string>();
      m.entries = row.at("entries").get<int>();
      m.total_variation = row.at("total_variation").get<double>();
      m.lipschitz = optional_from(row.at("lipschitz"));
      m.slope_variation = row.at("slope_variation").get<double>();
      m.prediction_error = optional_from(row.at("prediction_error"));
      m.constraint_violation = optional_from(row.at("constraint_violation"));
      m.optimality_gap = optional_from(row.at("optimality_gap"));
      m.generation_seconds = row.at("generation_seconds").get<double>();
      r.rows.push_back(std::move(m));
    }
    for (const json& p : o.at("curve")) {
      r.curve.push_back({p.at("index").get<int>(), p.at("standard").get<Time>(),
                         p.at("od").get<Time>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid report: ") + e.what());
  }
}

std::vector<std::string> emit_report(const Report& report, ReportFormat format,
                                     const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> paths;
  if (format == ReportFormat::kJson) {
    const fs::path p = fs::path(dir) / "report.json";
    spill(p, report_to_json(report));
    paths.push_back(p.string());
  } else {
    const fs::path p = fs::path(dir) / "report.csv";
    const fs::path c = fs::path(dir) / "curve.csv";
    spill(p, report_to_csv(report));
    spill(c, curve_to_csv(report));
    paths.push_back(p.string());
    paths.push_back(c.string());
  }
  return paths;
}

}  // namespace oddata
