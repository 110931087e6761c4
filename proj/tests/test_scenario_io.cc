// Copyright 2026 The dtcsim Authors.
//
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dtcsim/errors.h"
#include "dtcsim/scenario_io.h"

using namespace dtcsim;

namespace {

int parse_error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dtcsim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal file takes every documented default") {
  const Scenario s = parse_scenario("controller = fuzzy_optimized\n");
  const Scenario d = Scenario::defaults();
  CHECK(s.controller == ControllerKind::kFuzzyOptimized);
  CHECK(s.duration == d.duration);
  CHECK(s.dt == d.dt);
  CHECK(s.mode == ReferenceMode::kSpeed);
  CHECK(s.speed_ref.steps() == d.speed_ref.steps());
  CHECK(s.load.steps() == d.load.steps());
  CHECK(s.hysteresis.flux_band == d.hysteresis.flux_band);
  CHECK(s.hysteresis.torque_band == d.hysteresis.torque_band);
  CHECK(s.optimizer.torque_error_scale == d.optimizer.torque_error_scale);
  CHECK(s.optimizer.update_period == d.optimizer.update_period);
  CHECK(s.speed_pi.kp == d.speed_pi.kp);
  CHECK(s.speed_pi.torque_limit == d.speed_pi.torque_limit);
  CHECK(s.initial_flux_ref == d.initial_flux_ref);
}

TEST_CASE("negative dt is a validation error naming dt") {
  CHECK_THROWS_WITH_AS(parse_scenario("dt = -1\n"), doctest::Contains("dt"), ValidationError);
}

TEST_CASE("unknown keys are reported at their line") {
  CHECK(parse_error_line("controller = conventional\nfluks_band = 0.01\n") == 2);
  CHECK_THROWS_WITH_AS(parse_scenario("fluks_band = 0.01\n"), doctest::Contains("fluks_band"),
                       ParseError);
}

TEST_CASE("syntax errors carry line numbers") {
  CHECK(parse_error_line("# c\n\nduration = 1.5s\n") == 3);
  CHECK(parse_error_line("controller fuzzy_optimized\n") == 1);
  CHECK(parse_error_line("duration = 1\nduration = 2\n") == 2);
  CHECK(parse_error_line("controller = fuzzy\n") == 1);
  CHECK(parse_error_line("mode = position\n") == 1);
  CHECK(parse_error_line("load.step = 0.5\n") == 1);
  CHECK(parse_error_line("load.step = a:1\n") == 1);
  CHECK(parse_error_line("substeps = 1.5\n") == 1);
  CHECK(parse_error_line("duration =\n") == 1);
  CHECK(parse_error_line("= 3\n") == 1);
  CHECK(parse_error_line("record.max_rows = 0\n") == 1);
}

TEST_CASE("comments, blank lines and spacing") {
  const Scenario s = parse_scenario(
      "  # leading comment\n\n duration=0.75   # trailing\n\tcontroller =conventional\r\n");
  CHECK(s.duration == 0.75);
  CHECK(s.controller == ControllerKind::kConventional);
}

TEST_CASE("derived settings follow the motor and dt unless overridden") {
  const Scenario s = parse_scenario(
      "dt = 20e-6\nmotor.rated_torque = 40\nmotor.rated_flux = 1.0\n"
      "hysteresis.torque_band = 0.3\n");
  CHECK(s.hysteresis.flux_band == doctest::Approx(0.01));
  CHECK(s.hysteresis.torque_band == 0.3);
  CHECK(s.optimizer.update_period == doctest::Approx(200e-6));
  CHECK(s.optimizer.torque_error_scale == doctest::Approx(0.04 * 40));
  CHECK(s.optimizer.flux_max == doctest::Approx(1.05));
  CHECK(s.speed_pi.torque_limit == doctest::Approx(60.0));
  CHECK(s.initial_flux_ref == 1.0);
  // Default load steps keep their fractions of rated torque.
  CHECK(s.load.at(1.2) == doctest::Approx(40.0));
}

TEST_CASE("schedules replace their defaults") {
  const Scenario s = parse_scenario(
      "duration = 1\nload.step = 0.6:3\nload.step = 0.2:1\nspeed_ref.step = 0:50\n");
  CHECK(s.load.steps() == std::vector<ScheduleStep>{{0.2, 1.0}, {0.6, 3.0}});
  CHECK(s.speed_ref.at(0.5) == 50.0);
}

TEST_CASE("torque steps select torque mode") {
  const Scenario s = parse_scenario("duration = 0.5\ntorque_ref.step = 0:5\n");
  CHECK(s.mode == ReferenceMode::kTorque);
  CHECK(s.speed_ref.empty());
  CHECK(s.load.steps() == std::vector<ScheduleStep>{{0.0, 0.0}, {0.5, 0.2 * 26.0}});
  CHECK_THROWS_WITH_AS(parse_scenario("mode = speed\ntorque_ref.step = 0:5\n"),
                       doctest::Contains("mutually exclusive"), ValidationError);
}

TEST_CASE("rule files resolve relative to the scenario") {
  const Scenario s =
      load_scenario(DTCSIM_SOURCE_DIR "/scenarios/examples/custom_rules.scn");
  CHECK(s.rules.rule_base.rules == fuzzy::default_definition().rule_base.rules);
  CHECK(parse_error_line("optimizer.rules = missing.rules\n") == 1);
}

TEST_CASE("shipped scenarios validate and fixtures fail") {
  namespace fs = std::filesystem;
  int good = 0;
  for (const char* dir : {"/scenarios", "/scenarios/examples"}) {
    for (const auto& e : fs::directory_iterator(std::string(DTCSIM_SOURCE_DIR) + dir)) {
      if (e.path().extension() != ".scn") continue;
      CHECK_NOTHROW(load_scenario(e.path().string()));
      ++good;
    }
  }
  CHECK(good >= 5);
  int bad = 0;
  for (const auto& e :
       fs::directory_iterator(std::string(DTCSIM_SOURCE_DIR) + "/scenarios/malformed")) {
    INFO(e.path().string());
    CHECK_THROWS_AS(load_scenario(e.path().string()), ValidationError);
    ++bad;
  }
  CHECK(bad >= 10);
  CHECK_THROWS_AS(load_scenario("/nonexistent/x.scn"), IoError);
}

TEST_CASE("csv layout") {
  CHECK(format_csv({}) == std::string(kCsvHeader) + "\n");
  SimRecord r;
  r.time = 0.1;
  r.torque_est = 1.0 / 3.0;
  r.torque_plant = -2.5;
  r.torque_ref = 26;
  r.flux_mag_est = 0.8;
  r.flux_ref = 0.8;
  r.flux_alpha = 1e-12;
  r.flux_beta = -123456789.123;
  r.speed_mech = 100;
  r.sector = 4;
  r.sw = {1, 0, 1};
  const std::vector<SimRecord> one{r};
  const std::string text = format_csv(one);
  CHECK(text == std::string(kCsvHeader) +
                    "\n0.1,0.333333333,-2.5,26,0.8,0.8,1e-12,-123456789,100,4,1,0,1\n");
}

TEST_CASE("csv files are byte-identical for identical records") {
  const auto dir = temp_dir("csv");
  Scenario s = Scenario::defaults();
  s.duration = 0.1;
  s.load = Schedule();
  const SimResult r = run(s);
  emit_csv(r.records, (dir / "a.csv").string());
  emit_csv(run(s).records, (dir / "b.csv").string());
  const std::string a = read_file((dir / "a.csv").string());
  CHECK(a == read_file((dir / "b.csv").string()));
  CHECK(std::count(a.begin(), a.end(), '\n') == static_cast<long>(r.records.size()) + 1);
  CHECK_THROWS_WITH_AS(emit_csv(r.records, "/nonexistent/dir/x.csv"),
                       doctest::Contains("/nonexistent/dir/x.csv"), IoError);
}

TEST_CASE("self comparison reports zero reduction") {
  Scenario s = Scenario::defaults();
  s.duration = 0.8;
  s.load = Schedule({{0.0, 0.0}, {0.5, 5.2}});
  const ComparisonResult c =
      compare_controllers(s, ControllerKind::kConventional, ControllerKind::kConventional);
  REQUIRE(c.segments.size() == 2);
  for (const SegmentComparison& seg : c.segments) {
    CHECK(seg.summary.ratio_defined);
    CHECK(seg.summary.reduction_percent == 0.0);
  }
}

TEST_CASE("compare command writes both series and a report") {
  const auto dir = temp_dir("compare");
  const Scenario s = Scenario::defaults();
  ComparisonResult result;
  const CompareOutputs out = compare_command(s, (dir / "sub").string(), "demo", &result);
  CHECK(std::filesystem::exists(out.first_csv));
  CHECK(std::filesystem::exists(out.second_csv));
  CHECK(out.first_csv.find("demo_conventional.csv") != std::string::npos);
  CHECK(out.second_csv.find("demo_fuzzy_optimized.csv") != std::string::npos);

  // One summary per load segment of the default scenario.
  REQUIRE(result.segments.size() == 4);
  const std::string report = read_file(out.report);
  CHECK(report.find("segments: 4") != std::string::npos);
  int summaries = 0;
  for (std::size_t p = report.find("reduction_percent="); p != std::string::npos;
       p = report.find("reduction_percent=", p + 1)) {
    ++summaries;
  }
  CHECK(summaries == 4);
  CHECK(result.segments[1].segment.load == doctest::Approx(0.2 * 26.0));
  CHECK(result.segments[1].summary.reduction_percent > 0.0);
  CHECK(report == format_report(result, "demo"));
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.scenario_path = "x.scn";
  CHECK_NOTHROW(cfg.validate());
  cfg.stride = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("stride"), ValidationError);
  cfg.stride = 1;
  cfg.output_dir = "";
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
