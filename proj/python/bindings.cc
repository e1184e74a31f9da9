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

// Python bindings for the core operations. Instances, schedules and datasets
// are opaque handles; schedules convert to and from nested lists.

#include <pybind11/chrono.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oddata/dataset.h"
#include "oddata/experiment.h"
#include "oddata/instance.h"
#include "oddata/learner.h"
#include "oddata/projection.h"
#include "oddata/pwl.h"
#include "oddata/solver.h"

namespace py = pybind11;
using namespace oddata;

namespace {

SolveBudget make_budget(double time_limit, std::optional<std::int64_t> node_limit,
                        std::uint64_t seed) {
  return {Seconds(time_limit), node_limit, seed};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal-design datasets for learning job shop schedules";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<StageError>(m, "StageError", PyExc_RuntimeError);

  // instance-core
  py::class_<JssInstance>(m, "Instance")
      .def(py::init([](const std::vector<std::vector<std::pair<int, Time>>>& jobs) {
             std::vector<std::vector<Operation>> ops;
             for (const auto& job : jobs) {
               auto& row = ops.emplace_back();
               for (const auto& [machine, d] : job) row.push_back({machine, d});
             }
             return JssInstance(std::move(ops));
           }),
           py::arg("jobs"), "Jobs as lists of (machine, duration) pairs.")
      .def_static("parse", &parse_instance, py::arg("text"))
      .def_static("read", &read_instance_file, py::arg("path"))
      .def_static("random", &random_instance, py::arg("jobs"), py::arg("machines"),
                  py::arg("min_duration") = 1, py::arg("max_duration") = 9,
                  py::arg("seed") = 0)
      .def("serialize", &serialize_instance)
      .def_property_readonly("jobs", &JssInstance::jobs)
      .def_property_readonly("machines", &JssInstance::machines)
      .def_property_readonly("task_count", &JssInstance::task_count)
      .def("durations", &JssInstance::durations)
      .def("machine", py::overload_cast<int, int>(&JssInstance::machine, py::const_))
      .def("duration", py::overload_cast<int, int>(&JssInstance::duration, py::const_))
      .def("with_durations",
           [](const JssInstance& inst, const std::vector<Time>& d) {
             return inst.with_durations(d);
           })
      .def(py::self == py::self)
      .def("__repr__", [](const JssInstance& inst) {
        return "<Instance " + std::to_string(inst.jobs()) + "x" +
               std::to_string(inst.machines()) + ">";
      });

  py::class_<Schedule>(m, "Schedule")
      .def(py::init(&Schedule::from_rows), py::arg("rows"))
      .def("rows", &Schedule::rows)
      .def("starts", [](const Schedule& s) {
        return std::vector<Time>(s.starts().begin(), s.starts().end());
      })
      .def_property_readonly("jobs", &Schedule::jobs)
      .def_property_readonly("steps", &Schedule::steps)
      .def(py::self == py::self)
      .def("__repr__", [](const Schedule& s) {
        std::string out = "<Schedule [";
        for (int j = 0; j < s.jobs(); ++j) {
          out += j ? ", [" : "[";
          for (int t = 0; t < s.steps(); ++t) {
            out += (t ? ", " : "") + std::to_string(s.start(j, t));
          }
          out += "]";
        }
        return out + "]>";
      });

  py::class_<PerturbationSpec>(m, "PerturbationSpec")
      .def(py::init([](int machine, int steps, double max_increase, Time scale) {
             return PerturbationSpec{machine, steps, max_increase, scale};
           }),
           py::arg("machine") = 0, py::arg("steps") = 2, py::arg("max_increase") = 0.5,
           py::arg("scale") = 100)
      .def_readwrite("machine", &PerturbationSpec::machine)
      .def_readwrite("steps", &PerturbationSpec::steps)
      .def_readwrite("max_increase", &PerturbationSpec::max_increase)
      .def_readwrite("scale", &PerturbationSpec::scale);

  m.def("perturb_family", &perturb_family, py::arg("base"), py::arg("spec"));
  m.def("makespan", &makespan, py::arg("instance"), py::arg("schedule"));
  m.def("is_feasible", &is_feasible, py::arg("instance"), py::arg("schedule"));
  m.def(
      "total_violation",
      [](const JssInstance& inst, const Schedule& s) {
        return violation_degrees(inst, s).total;
      },
      py::arg("instance"), py::arg("schedule"));

  // jss-solver
  py::class_<SolveBudget>(m, "SolveBudget")
      .def(py::init(&make_budget), py::arg("time_limit") = 60.0,
           py::arg("node_limit") = std::nullopt, py::arg("seed") = 0)
      .def_property(
          "time_limit", [](const SolveBudget& b) { return b.time_limit.count(); },
          [](SolveBudget& b, double s) { b.time_limit = Seconds(s); })
      .def_readwrite("node_limit", &SolveBudget::node_limit)
      .def_readwrite("seed", &SolveBudget::seed);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("schedule", &SolveResult::schedule)
      .def_readonly("objective", &SolveResult::objective)
      .def_readonly("optimal", &SolveResult::optimal)
      .def_readonly("nodes_explored", &SolveResult::nodes_explored)
      .def_property_readonly("elapsed",
                             [](const SolveResult& r) { return r.elapsed.count(); });

  m.def("solve_makespan", &solve_makespan, py::arg("instance"),
        py::arg("budget") = SolveBudget{}, py::arg("hotstart") = std::nullopt,
        py::call_guard<py::gil_scoped_release>());
  m.def("solve_proximal", &solve_proximal, py::arg("instance"), py::arg("reference"),
        py::arg("makespan_cap"), py::arg("budget") = SolveBudget{},
        py::arg("hotstart") = std::nullopt, py::call_guard<py::gil_scoped_release>());
  m.def("brute_force_optimal", &brute_force_optimal, py::arg("instance"));

  // datagen
  py::class_<DatasetEntry>(m, "DatasetEntry")
      .def_readonly("instance", &DatasetEntry::instance)
      .def_readonly("solution", &DatasetEntry::solution)
      .def_readonly("objective", &DatasetEntry::objective)
      .def_readonly("optimal", &DatasetEntry::optimal)
      .def_readonly("seed", &DatasetEntry::seed);

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("mode",
                             [](const Dataset& d) { return std::string(mode_name(d.mode)); })
      .def_readonly("entries", &Dataset::entries)
      .def("solutions", &Dataset::solutions)
      .def("__len__", [](const Dataset& d) { return d.entries.size(); })
      .def("to_jsonl", &dataset_to_jsonl)
      .def_static("from_jsonl", &dataset_from_jsonl, py::arg("text"))
      .def("write", [](const Dataset& d, const std::string& p) { write_dataset(d, p); })
      .def_static("read", &read_dataset, py::arg("path"));

  m.def("generate_standard", &generate_standard, py::arg("family"),
        py::arg("budget") = SolveBudget{}, py::arg("base_seed") = 0, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("generate_od", &generate_od, py::arg("family"), py::arg("budget") = SolveBudget{},
        py::call_guard<py::gil_scoped_release>());
  m.def("total_variation", py::overload_cast<const Dataset&, double>(&total_variation),
        py::arg("dataset"), py::arg("p") = 1.0);
  m.def("lipschitz_constant", &lipschitz_constant, py::arg("dataset"));
  m.def("l1_distance", py::overload_cast<const Schedule&, const Schedule&>(&l1_distance),
        py::arg("a"), py::arg("b"));
  m.def("is_monotone_family", &is_monotone_family, py::arg("family"));
  m.def("validate_dataset", &validate_dataset, py::arg("dataset"),
        py::arg("require_monotone") = true);
  m.def("family_to_jsonl", &family_to_jsonl, py::arg("family"));
  m.def("family_from_jsonl", &family_from_jsonl, py::arg("text"));

  // projection
  m.def(
      "project_feasible",
      [](const JssInstance& inst, const std::vector<double>& pred) {
        return project_feasible(inst, pred);
      },
      py::arg("instance"), py::arg("predicted"));
  m.def(
      "projection_distance",
      [](const JssInstance& inst, const std::vector<double>& pred) {
        return projection_distance(inst, pred);
      },
      py::arg("instance"), py::arg("predicted"));

  // learner
  py::class_<Model>(m, "Model")
      .def(py::init([](const JssInstance& routing, std::uint64_t seed) {
             return build_model(routing, seed);
           }),
           py::arg("routing"), py::arg("seed") = 0)
      .def_readonly("jobs", &Model::jobs)
      .def_readonly("machines", &Model::machines)
      .def(
          "forward",
          [](const Model& model, const std::vector<double>& x) { return forward(model, x); },
          py::arg("durations"))
      .def("to_json", [](const Model& model, const Normalizer& norm) {
        return model_to_json(model, norm);
      })
      .def_static("from_json", [](const std::string& text) {
        Normalizer norm;
        Model model = model_from_json(text, &norm);
        return py::make_tuple(std::move(model), norm);
      });

  py::class_<Normalizer>(m, "Normalizer")
      .def(py::init<>())
      .def_readwrite("input", &Normalizer::input)
      .def_readwrite("output", &Normalizer::output);

  py::class_<Multipliers>(m, "Multipliers")
      .def_readonly("precedence", &Multipliers::precedence)
      .def_readonly("overlap", &Multipliers::overlap);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("dual_learning_rate", &TrainConfig::dual_learning_rate)
      .def_readwrite("initial_lambda", &TrainConfig::initial_lambda)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("lagrangian", &TrainConfig::lagrangian);

  py::class_<EpochRecord>(m, "EpochRecord")
      .def_readonly("loss", &EpochRecord::loss)
      .def_readonly("mse", &EpochRecord::mse)
      .def_readonly("mean_violation", &EpochRecord::mean_violation)
      .def_readonly("multipliers", &EpochRecord::lambda);

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("model", &TrainResult::model)
      .def_readonly("multipliers", &TrainResult::lambda)
      .def_readonly("normalizer", &TrainResult::normalizer)
      .def_readonly("history", &TrainResult::history);

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("prediction_error", &Metrics::prediction_error)
      .def_readonly("constraint_violation", &Metrics::constraint_violation)
      .def_readonly("optimality_gap", &Metrics::optimality_gap)
      .def_readonly("entries", &Metrics::entries);

  m.def("train", &train, py::arg("model"), py::arg("dataset"),
        py::arg("config") = TrainConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def("evaluate", &evaluate, py::arg("model"), py::arg("dataset"), py::arg("normalizer"));
  m.def("predict", &predict, py::arg("model"), py::arg("instance"), py::arg("normalizer"));
  m.def(
      "interleaved_split",
      [](const Dataset& ds, int stride) {
        DatasetSplit s = interleaved_split(ds, stride);
        return py::make_tuple(std::move(s.train), std::move(s.test));
      },
      py::arg("dataset"), py::arg("stride"));

  // pwl-theory
  py::class_<PwlFunction>(m, "PwlFunction")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("breakpoints"),
           py::arg("values"))
      .def_property_readonly("pieces", &PwlFunction::pieces)
      .def("breakpoints", &PwlFunction::breakpoints)
      .def("values", &PwlFunction::values)
      .def("__call__", &PwlFunction::operator());

  py::class_<ApproximationBound>(m, "ApproximationBound")
      .def_readonly("bound", &ApproximationBound::bound)
      .def_readonly("actual", &ApproximationBound::actual);

  m.def("slope_total_variation", &slope_total_variation, py::arg("f"));
  m.def("approximation_bound", &approximation_bound, py::arg("fp"), py::arg("fq"));
  m.def(
      "random_admissible_pair",
      [](std::uint64_t seed, int max_pieces) {
        PwlPair p = random_admissible_pair(seed, max_pieces);
        return py::make_tuple(std::move(p.fp), std::move(p.fq));
      },
      py::arg("seed"), py::arg("max_pieces") = 8);
  m.def(
      "relu_min_size", [](double p, int k) { return relu_capacity(p, k).min_size; },
      py::arg("pieces"), py::arg("k"));
  m.def("lipschitz_capacity", &lipschitz_capacity, py::arg("n"), py::arg("lipschitz"),
        py::arg("eps"));
  m.def("trajectory_slope_variation", &trajectory_slope_variation, py::arg("dataset"));

  // experiment
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("parse", &parse_config, py::arg("text"))
      .def("to_text", &config_to_text)
      .def("set", &apply_setting, py::arg("key"), py::arg("value"))
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_readwrite("record_timing", &ExperimentConfig::record_timing);

  py::class_<ModeRow>(m, "ModeRow")
      .def_readonly("mode", &ModeRow::mode)
      .def_readonly("entries", &ModeRow::entries)
      .def_readonly("total_variation", &ModeRow::total_variation)
      .def_readonly("lipschitz", &ModeRow::lipschitz)
      .def_readonly("slope_variation", &ModeRow::slope_variation)
      .def_readonly("prediction_error", &ModeRow::prediction_error)
      .def_readonly("constraint_violation", &ModeRow::constraint_violation)
      .def_readonly("optimality_gap", &ModeRow::optimality_gap)
      .def_readonly("generation_seconds", &ModeRow::generation_seconds);

  py::class_<Report>(m, "Report")
      .def_readonly("rows", &Report::rows)
      .def_property_readonly("curve",
                             [](const Report& r) {
                               std::vector<std::tuple<int, Time, Time>> out;
                               for (const CurvePoint& p : r.curve) {
                                 out.emplace_back(p.index, p.standard, p.od);
                               }
                               return out;
                             })
      .def("to_json", &report_to_json)
      .def("to_csv", &report_to_csv);

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
}
