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

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtcsim/metrics.h"
#include "dtcsim/record.h"
#include "dtcsim/sim.h"

namespace dtcsim {

enum class CommandMode { kRun, kCompare, kValidate };

struct RunConfig {
  std::string scenario_path;
  std::string output_dir = ".";
  int stride = 1;
  CommandMode mode = CommandMode::kRun;

  void validate() const;
};

/// Parses `key = value` scenario text on top of Scenario::defaults().
///
/// Hysteresis bands, optimizer settings, the PI torque limit and the
/// initial flux reference are derived from the motor and dt unless set
/// explicitly. The first `<name>.step = t:v` line for a schedule replaces
/// its default; without any, the default load steps are rescaled to the
/// motor's rated torque and those after `duration` are dropped. Relative
/// `optimizer.rules` paths resolve against `base_dir`. Throws ParseError
/// for syntax errors, unknown or repeated keys, and ValidationError when
/// the resulting scenario is invalid.
Scenario parse_scenario(std::string_view text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

inline constexpr const char* kCsvHeader =
    "time,torque_est,torque_plant,torque_ref,flux_mag_est,flux_ref,flux_alpha,"
    "flux_beta,speed_mech,sector,sa,sb,sc";

std::string format_csv(std::span<const SimRecord> records);

/// Writes format_csv(records) to path. Throws IoError naming the path.
void emit_csv(std::span<const SimRecord> records, const std::string& path);

struct SegmentComparison {
  Segment segment;
  ComparisonSummary summary;
};

struct ComparisonResult {
  ControllerKind first = ControllerKind::kConventional;
  ControllerKind second = ControllerKind::kFuzzyOptimized;
  SimResult first_result;
  SimResult second_result;
  std::vector<SegmentComparison> segments;
};

/// Runs the scenario once per controller with everything else identical
/// and pairs the per-segment reports. Errors are rethrown with the
/// controller name prefixed.
ComparisonResult compare_controllers(const Scenario& scenario,
                                     ControllerKind first = ControllerKind::kConventional,
                                     ControllerKind second = ControllerKind::kFuzzyOptimized);

/// Plain-text report, see docs/report_format.md.
std::string format_report(const ComparisonResult& result, const std::string& name);

struct CompareOutputs {
  std::string first_csv;
  std::string second_csv;
  std::string report;
};

/// compare_controllers plus files `<name>_<controller>.csv` and
/// `<name>_report.txt` in output_dir. Returns the written paths.
CompareOutputs compare_command(const Scenario& scenario, const std::string& output_dir,
                               const std::string& name, ComparisonResult* result = nullptr);

}  // namespace dtcsim
