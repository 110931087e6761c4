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

#include "dtcsim/sim.h"

#include <algorithm>
#include <cmath>

#include "dtcsim/errors.h"
#include "dtcsim/estimator.h"
#include "dtcsim/frames.h"

namespace dtcsim {

Schedule::Schedule(std::vector<ScheduleStep> steps) : steps_(std::move(steps)) {
  std::stable_sort(steps_.begin(), steps_.end(),
                   [](const ScheduleStep& l, const ScheduleStep& r) { return l.time < r.time; });
}

double Schedule::at(double t) const {
  double value = 0.0;
  for (const ScheduleStep& s : steps_) {
    if (s.time > t) break;
    value = s.value;
  }
  return value;
}

void Schedule::add(double time, double value) {
  const auto pos = std::upper_bound(
      steps_.begin(), steps_.end(), time,
      [](double t, const ScheduleStep& s) { return t < s.time; });
  steps_.insert(pos, {time, value});
}

const char* to_string(ControllerKind kind) {
  return kind == ControllerKind::kConventional ? "conventional" : "fuzzy_optimized";
}

const char* to_string(ReferenceMode mode) {
  return mode == ReferenceMode::kTorque ? "torque" : "speed";
}

PiOutput pi_speed_controller(double speed_err, const PiState& state, const PiGains& gains,
                             double dt) {
  const double limit = gains.torque_limit;
  PiOutput out;
  out.state.integral = std::clamp(state.integral + gains.ki * speed_err * dt, -limit, limit);
  out.torque_ref = std::clamp(gains.kp * speed_err + out.state.integral, -limit, limit);
  return out;
}

Scenario Scenario::defaults() {
  Scenario s;
  s.hysteresis = HysteresisConfig::defaults_for(s.motor);
  s.optimizer = fuzzy::OptimizerConfig::defaults_for(s.motor, s.dt);
  s.initial_flux_ref = s.motor.rated_flux;
  s.speed_pi.torque_limit = 1.5 * s.motor.rated_torque;
  s.speed_ref = Schedule::constant(100.0);
  s.duration = 2.0;
  s.load = Schedule({{0.0, 0.0},
                     {0.5, 0.2 * s.motor.rated_torque},
                     {1.0, 1.0 * s.motor.rated_torque},
                     {1.5, 0.5 * s.motor.rated_torque}});
  return s;
}

void Scenario::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " must be finite and > 0");
    }
  };
  positive(duration, "duration");
  positive(dt, "dt");
  if (dt > duration) throw ValidationError("dt must not exceed duration");
  if (substeps < 1) throw ValidationError("substeps must be >= 1");
  positive(initial_flux_ref, "initial_flux_ref");
  if (!(startup_time >= 0.0) || !std::isfinite(startup_time)) {
    throw ValidationError("startup_time must be finite and >= 0");
  }
  if (record_stride < 1) throw ValidationError("record.stride must be >= 1");
  if (max_records < 1) throw ValidationError("record.max_rows must be >= 1");
  motor.validate();
  hysteresis.validate();
  optimizer.validate();
  // Builds and validates the rule base.
  fuzzy::Engine engine(rules);

  if (mode == ReferenceMode::kTorque) {
    if (torque_ref.empty()) throw ValidationError("torque mode needs torque_ref.step entries");
    if (!speed_ref.empty()) {
      throw ValidationError("torque_ref and speed_ref are mutually exclusive");
    }
  } else {
    if (speed_ref.empty()) throw ValidationError("speed mode needs speed_ref.step entries");
    if (!torque_ref.empty()) {
      throw ValidationError("torque_ref and speed_ref are mutually exclusive");
    }
    if (!(speed_pi.kp >= 0.0) || !(speed_pi.ki >= 0.0)) {
      throw ValidationError("speed_pi gains must be >= 0");
    }
    positive(speed_pi.torque_limit, "speed_pi.torque_limit");
  }
  for (const Schedule* sched : {&torque_ref, &speed_ref, &load}) {
    for (const ScheduleStep& st : sched->steps()) {
      if (!std::isfinite(st.time) || !std::isfinite(st.value) || st.time < 0.0 ||
          st.time > duration) {
        throw ValidationError("schedule steps must be finite and lie in [0, duration]");
      }
    }
  }
  if (controller == ControllerKind::kFuzzyOptimized &&
      (initial_flux_ref < optimizer.flux_min || initial_flux_ref > optimizer.flux_max)) {
    throw ValidationError("initial_flux_ref must lie in [optimizer.flux_min, optimizer.flux_max]");
  }
}

long Scenario::steps() const { return std::lround(duration / dt); }

int Scenario::effective_stride() const {
  const long n = steps();
  const long needed = (n + static_cast<long>(max_records) - 1) / static_cast<long>(max_records);
  return static_cast<int>(std::max<long>(record_stride, needed));
}

std::vector<double> Scenario::change_points() const {
  std::vector<double> out;
  const Schedule& ref = mode == ReferenceMode::kTorque ? torque_ref : speed_ref;
  for (const Schedule* sched : {&ref, &load}) {
    for (const ScheduleStep& st : sched->steps()) out.push_back(st.time);
  }
  out.push_back(startup_time);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double flux_startup(const Scenario& scenario, double t) {
  const double start = 0.1 * scenario.motor.rated_flux;
  if (scenario.startup_time <= 0.0 || t >= scenario.startup_time) {
    return scenario.initial_flux_ref;
  }
  const double frac = std::max(t, 0.0) / scenario.startup_time;
  return start + (scenario.initial_flux_ref - start) * frac;
}

std::vector<SegmentReport> segment_reports(const Scenario& scenario,
                                           const std::vector<SimRecord>& records) {
  const std::vector<double> cps = scenario.change_points();
  std::vector<SegmentReport> out;
  for (Segment seg : steady_segments(cps, scenario.duration)) {
    seg.load = scenario.load.at(seg.start);
    std::size_t in_window = 0;
    for (const SimRecord& r : records) {
      if (r.time >= seg.t0 && r.time <= seg.t1) ++in_window;
    }
    if (in_window < 2) continue;
    out.push_back({seg, torque_ripple(records, seg.t0, seg.t1)});
  }
  return out;
}

SimResult run(const Scenario& scenario) {
  scenario.validate();
  const MotorParams& motor = scenario.motor;
  const fuzzy::Engine engine(scenario.rules);
  const double dt = scenario.dt;
  const long n_steps = scenario.steps();
  const int stride = scenario.effective_stride();
  const long update_every =
      std::max<long>(1, std::lround(scenario.optimizer.update_period / dt));
  const bool fuzzy_on = scenario.controller == ControllerKind::kFuzzyOptimized;
  const double sub_dt = dt / scenario.substeps;

  SimResult result;
  result.records.reserve(static_cast<std::size_t>(n_steps / stride + 1));

  MotorState plant;
  EstimatorState est{{}, motor.rs};
  ComparatorState cmp;
  PiState pi;
  SwitchState sw = kZeroVectorLow;
  SpaceVector v_prev;
  SpaceVector i_prev;
  int sector = 1;
  double flux_ref = flux_startup(scenario, 0.0);
  // Torque error accumulated since the last optimizer update.
  double err_sum = 0.0;
  long err_count = 0;

  for (long k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;

    // Terminal measurement, passed through the phase domain as a real drive
    // would see it.
    const SpaceVector i_plant = currents_from_fluxes(plant, motor).stator;
    const SpaceVector i_s =
        to_space_vector(clarke(inverse_clarke({i_plant.alpha, i_plant.beta, 0.0})));

    if (k > 0) est = update_flux(est, v_prev, i_prev, dt);
    const FluxEstimate fe = estimate(est.integrated_flux, sector);
    sector = fe.sector;
    const double torque_est = estimate_torque(est.integrated_flux, i_s, motor.pole_pairs);

    double torque_ref = 0.0;
    if (scenario.mode == ReferenceMode::kTorque) {
      torque_ref = scenario.torque_ref.at(t);
    } else {
      const PiOutput out = pi_speed_controller(scenario.speed_ref.at(t) - plant.speed_mech, pi,
                                               scenario.speed_pi, dt);
      pi = out.state;
      torque_ref = out.torque_ref;
    }
    const double torque_err = torque_ref - torque_est;

    if (t < scenario.startup_time) {
      flux_ref = flux_startup(scenario, t);
    } else if (!fuzzy_on) {
      flux_ref = scenario.initial_flux_ref;
    } else {
      err_sum += torque_err;
      ++err_count;
      if (k % update_every == 0) {
        flux_ref = fuzzy::optimizer_step(engine, scenario.optimizer,
                                         err_sum / static_cast<double>(err_count), flux_ref);
        err_sum = 0.0;
        err_count = 0;
      }
    }

    cmp.flux_out = flux_comparator(flux_ref - fe.magnitude, scenario.hysteresis.flux_band,
                                   cmp.flux_out);
    cmp.torque_out =
        torque_comparator(torque_err, scenario.hysteresis.torque_band, cmp.torque_out);
    sw = select_vector(cmp.flux_out, cmp.torque_out, sector, sw);
    const SpaceVector v_s =
        to_space_vector(clarke(inverter_phase_voltages(sw, motor.vdc)));

    if (k % stride == 0) {
      SimRecord rec;
      rec.time = t;
      rec.torque_est = torque_est;
      rec.torque_plant = electromagnetic_torque(plant, motor);
      rec.torque_ref = torque_ref;
      rec.flux_mag_est = fe.magnitude;
      rec.flux_ref = flux_ref;
      rec.flux_alpha = fe.flux.alpha;
      rec.flux_beta = fe.flux.beta;
      rec.speed_mech = plant.speed_mech;
      rec.sector = sector;
      rec.sw = sw;
      rec.plant_flux = plant.stator_flux;
      result.records.push_back(rec);
    }

    const double load = scenario.load.at(t);
    for (int s = 0; s < scenario.substeps; ++s) {
      plant = step(plant, v_s, load, motor, sub_dt);
    }
    v_prev = v_s;
    i_prev = i_s;
  }

  result.final_state = plant;
  result.final_flux_ref = flux_ref;
  result.segments = segment_reports(scenario, result.records);
  return result;
}

}  // namespace dtcsim
