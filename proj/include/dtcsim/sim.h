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

#include <string>
#include <vector>

#include "dtcsim/dtc_core.h"
#include "dtcsim/fuzzy.h"
#include "dtcsim/machine.h"
#include "dtcsim/metrics.h"
#include "dtcsim/record.h"

namespace dtcsim {

struct ScheduleStep {
  double time = 0.0;
  double value = 0.0;

  friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

/// Piecewise-constant signal. Holds the value of the latest step whose time
/// is <= t, and 0 before the first step.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<ScheduleStep> steps);

  static Schedule constant(double value) { return Schedule({{0.0, value}}); }

  double at(double t) const;
  bool empty() const { return steps_.empty(); }
  const std::vector<ScheduleStep>& steps() const { return steps_; }

  /// Appends a step; keeps the list sorted by time (stable for equal times).
  void add(double time, double value);

 private:
  std::vector<ScheduleStep> steps_;
};

enum class ControllerKind { kConventional, kFuzzyOptimized };
enum class ReferenceMode { kTorque, kSpeed };

const char* to_string(ControllerKind kind);
const char* to_string(ReferenceMode mode);

struct PiGains {
  double kp = 2.0;            // N m per rad/s
  double ki = 200.0;          // N m per rad
  double torque_limit = 0.0;  // N m
};

struct PiState {
  double integral = 0.0;
};

struct PiOutput {
  double torque_ref = 0.0;
  PiState state;
};

/// PI with output clamped to [-torque_limit, torque_limit]. The integral is
/// clamped to the same range so it cannot wind up while saturated.
PiOutput pi_speed_controller(double speed_err, const PiState& state, const PiGains& gains,
                             double dt);

struct Scenario {
  double duration = 1.5;  // s
  double dt = 10e-6;      // s, control and integration period
  int substeps = 1;       // RK4 steps per control period
  ControllerKind controller = ControllerKind::kConventional;
  ReferenceMode mode = ReferenceMode::kSpeed;
  Schedule torque_ref;
  Schedule speed_ref;
  PiGains speed_pi;
  Schedule load;
  double initial_flux_ref = 0.0;  // Wb
  double startup_time = 0.05;     // s
  HysteresisConfig hysteresis;
  fuzzy::OptimizerConfig optimizer;
  fuzzy::Definition rules = fuzzy::default_definition();
  MotorParams motor;
  int record_stride = 1;
  std::size_t max_records = 100000;

  /// The shipped comparison scenario: speed regulation at 100 rad/s, a
  /// no-load run-up, then load steps of 20%, 100% and 50% of rated torque
  /// every 0.5 s.
  static Scenario defaults();

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  /// Number of control periods in the run.
  long steps() const;

  /// Stride actually used, raised if needed to respect max_records.
  int effective_stride() const;

  /// Times at which the load or the active reference changes.
  std::vector<double> change_points() const;
};

/// Flux reference during the magnetizing ramp: linear from 0.1 x rated flux
/// at t = 0 to initial_flux_ref at t = startup_time.
double flux_startup(const Scenario& scenario, double t);

struct SegmentReport {
  Segment segment;
  RippleReport report;
};

struct SimResult {
  std::vector<SimRecord> records;
  std::vector<SegmentReport> segments;
  MotorState final_state;
  double final_flux_ref = 0.0;
};

/// Runs the closed loop. Deterministic: equal scenarios give equal results.
/// Throws ValidationError before the loop for bad scenarios, and
/// InstabilityError if the plant diverges.
SimResult run(const Scenario& scenario);

/// Per-segment steady-state reports of an existing record list.
std::vector<SegmentReport> segment_reports(const Scenario& scenario,
                                           const std::vector<SimRecord>& records);

}  // namespace dtcsim
