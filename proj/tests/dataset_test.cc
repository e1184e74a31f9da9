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

#include "oddata/dataset.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "test_util.h"

namespace oddata {
namespace {

using testing::instance_a;
using testing::instance_a_plus;
using testing::random_instance;

std::vector<JssInstance> family_a() { return {instance_a(), instance_a_plus()}; }

Time brute_makespan(const JssInstance& inst) {
  return makespan(inst, brute_force_optimal(inst));
}

TEST_CASE("generate_od on A, A+") {
  const Dataset ds = generate_od(family_a(), SolveBudget::exhaustive());
  REQUIRE(ds.entries.size() == 2);
  CHECK(ds.mode == DatasetMode::kOptimalDesign);
  CHECK(ds.entries[1].solution == Schedule::from_rows({{0, 3}, {0, 3}}));
  CHECK(ds.entries[1].objective == 8);
  CHECK(ds.entries[0].solution == Schedule::from_rows({{0, 3}, {0, 2}}));
  CHECK(ds.entries[0].objective == 5);
  CHECK(ds.entries[0].optimal);
  CHECK(ds.entries[1].optimal);
  CHECK(total_variation(ds) == doctest::Approx(0.5));
  CHECK(lipschitz_constant(ds) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("generate_standard examples") {
  const Dataset ds = generate_standard(family_a(), SolveBudget::exhaustive(), 7);
  REQUIRE(ds.entries.size() == 2);
  CHECK(ds.mode == DatasetMode::kStandard);
  CHECK(ds.entries[0].objective == 5);
  CHECK(ds.entries[1].objective == 8);
  CHECK(ds.entries[0].optimal);
  CHECK(ds.entries[1].optimal);
  CHECK(ds.entries[0].seed == 7);
  CHECK(ds.entries[1].seed == 8);
  validate_dataset(ds);

  const Dataset one = generate_standard({instance_a()}, SolveBudget::exhaustive(), 0);
  CHECK(one.entries.size() == 1);
  CHECK_THROWS_AS(generate_standard({}, SolveBudget::exhaustive(), 0),
                  std::invalid_argument);
}

TEST_CASE("identical instances: equal objectives, OD stays put") {
  const JssInstance inst = random_instance(4, 3, 1, 9, 0);
  const std::vector<JssInstance> family(4, inst);
  const Dataset std_ds = generate_standard(family, SolveBudget::exhaustive(), 0);
  for (const DatasetEntry& e : std_ds.entries) {
    CHECK(e.objective == std_ds.entries[0].objective);
  }
  const Dataset od = generate_od(family, SolveBudget::exhaustive());
  for (const DatasetEntry& e : od.entries) {
    CHECK(e.solution == od.entries.back().solution);
  }
  CHECK(total_variation(od) == 0.0);
  CHECK_THROWS_AS(lipschitz_constant(od), std::invalid_argument);
}

TEST_CASE("worker count does not change standard output") {
  PerturbationSpec spec;
  spec.steps = 6;
  spec.scale = 1;
  spec.max_increase = 1.0;
  const auto family = perturb_family(random_instance(3, 3, 1, 9, 5), spec);
  const Dataset a = generate_standard(family, SolveBudget::exhaustive(), 3, 1);
  const Dataset b = generate_standard(family, SolveBudget::exhaustive(), 3, 4);
  CHECK(a.entries == b.entries);
}

TEST_CASE("generate_od rejects non-monotone families") {
  CHECK_THROWS_AS(generate_od({instance_a_plus(), instance_a()},
                              SolveBudget::exhaustive()),
                  std::invalid_argument);
  CHECK(is_monotone_family(family_a()));
  CHECK_FALSE(is_monotone_family({instance_a(), random_instance(2, 2, 9, 9, 1)}));
}

TEST_CASE("property: OD steps are optimal, capped proximal moves") {
  // Every OD step against an independent enumeration oracle: the makespan
  // equals the true optimum and the move from the next solution is the
  // shortest one among optimal schedules.
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    PerturbationSpec spec;
    spec.steps = 4;
    spec.scale = 2;
    spec.machine = static_cast<int>(seed % 2);
    const auto family = perturb_family(random_instance(2, 2, 1, 4, seed), spec);
    const Dataset od = generate_od(family, SolveBudget::exhaustive());
    validate_dataset(od);
    for (size_t i = 0; i < family.size(); ++i) {
      const Time opt = brute_makespan(family[i]);
      CHECK(od.entries[i].objective == opt);
      if (i + 1 < family.size()) {
        const Schedule& next = od.entries[i + 1].solution;
        CHECK(is_feasible(family[i], next));
        const auto oracle = testing::brute_force_proximal(family[i], next, opt);
        CHECK(l1_distance(od.entries[i].solution, next) == oracle.distance);
      }
    }
  }
}

TEST_CASE("property: OD and standard agree on objectives") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    PerturbationSpec spec;
    spec.steps = 5;
    spec.scale = 10;
    const auto family = perturb_family(random_instance(3, 3, 1, 9, seed), spec);
    const Dataset od = generate_od(family, SolveBudget::exhaustive());
    const Dataset st = generate_standard(family, SolveBudget::exhaustive(), seed);
    for (size_t i = 0; i < family.size(); ++i) {
      CHECK(st.entries[i].optimal);
      CHECK(od.entries[i].objective == st.entries[i].objective);
    }
  }
}

TEST_CASE("total_variation norms") {
  const std::vector<Schedule> ys = {Schedule::from_rows({{0, 0}}),
                                    Schedule::from_rows({{3, 4}}),
                                    Schedule::from_rows({{3, 4}})};
  CHECK(total_variation(ys, 1.0) == doctest::Approx(3.5));
  CHECK(total_variation(ys, 2.0) == doctest::Approx(2.5));
  CHECK(total_variation(ys, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(total_variation({ys[0]}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(total_variation(ys, 0.5), std::invalid_argument);
}

TEST_CASE("lipschitz of a single pair is its ratio") {
  Dataset ds;
  ds.entries.push_back({instance_a(), Schedule::from_rows({{0, 2}, {0, 2}}), 5,
                        true, 0});
  ds.entries.push_back({instance_a_plus(), Schedule::from_rows({{0, 3}, {0, 3}}),
                        8, true, 0});
  CHECK(lipschitz_constant(ds) == doctest::Approx(2.0 / 3.0));
  ds.entries[1].solution = ds.entries[0].solution;
  CHECK(lipschitz_constant(ds) == 0.0);
}

TEST_CASE("JSONL round trip") {
  PerturbationSpec spec;
  spec.steps = 3;
  const auto family = perturb_family(random_instance(3, 2, 0, 9, 11), spec);
  const Dataset ds = generate_od(family, SolveBudget::exhaustive());
  const std::string text = dataset_to_jsonl(ds);
  const Dataset back = dataset_from_jsonl(text);
  CHECK(back.mode == ds.mode);
  CHECK(back.entries == ds.entries);
  CHECK(dataset_to_jsonl(back) == text);
  CHECK(text.back() == '\n');

  const Dataset a = generate_od(family_a(), SolveBudget::exhaustive());
  const std::string first = dataset_to_jsonl(a).substr(0, dataset_to_jsonl(a).find('\n'));
  CHECK(first ==
        R"({"index":1,"instance":{"jobs":2,"machines":2,"tasks":[[[0,2],[1,2]],)"
        R"([[1,1],[0,3]]]},"solution":[[0,3],[0,2]],"objective":5,)"
        R"("optimal":true,"mode":"od","seed":0})");

  CHECK(family_from_jsonl(family_to_jsonl(family)) == family);

  const auto path = std::filesystem::temp_directory_path() / "oddata_ds_test.jsonl";
  write_dataset(ds, path.string());
  CHECK(read_dataset(path.string()).entries == ds.entries);
  std::filesystem::remove(path);
}

TEST_CASE("JSONL errors") {
  CHECK_THROWS_AS(dataset_from_jsonl("{not json}\n"), std::runtime_error);
  CHECK_THROWS_AS(dataset_from_jsonl(
                      R"({"index":2,"instance":{"jobs":1,"machines":1,"tasks":[[[0,1]]]},)"
                      R"("solution":[[0]],"objective":1,"optimal":true,"mode":"od","seed":0})"),
                  std::runtime_error);
  CHECK_THROWS_AS(dataset_from_jsonl(
                      R"({"index":1,"instance":{"jobs":1,"machines":1,"tasks":[[[0,1]]]},)"
                      R"("solution":[[0,1]],"objective":1,"optimal":true,"mode":"od","seed":0})"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_mode("fast"), std::invalid_argument);
  CHECK_THROWS_AS(read_dataset("/nonexistent/x.jsonl"), std::runtime_error);
}

TEST_CASE("validate_dataset catches broken entries") {
  Dataset ds = generate_od(family_a(), SolveBudget::exhaustive());
  ds.entries[0].objective = 4;
  CHECK_THROWS_AS(validate_dataset(ds), std::runtime_error);
  ds.entries[0].objective = 5;
  ds.entries[0].solution = Schedule::from_rows({{0, 1}, {0, 2}});
  CHECK_THROWS_AS(validate_dataset(ds), std::runtime_error);
}

}  // namespace
}  // namespace oddata
