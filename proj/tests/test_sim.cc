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

#include <cmath>
#include <thread>

#include "doctest.h"
#include "dtcsim/errors.h"
#include "dtcsim/sim.h"

using namespace dtcsim;

namespace {

Scenario torque_scenario(double duration, Schedule torque, Schedule load) {
  Scenario s = Scenario::defaults();
  s.mode = ReferenceMode::kTorque;
  s.speed_ref = Schedule();
  s.torque_ref = std::move(torque);
  s.load = std::move(load);
  s.duration = duration;
  return s;
}

}  // namespace

TEST_CASE("schedule is piecewise constant and zero before the first step") {
  Schedule s({{0.5, 2.0}, {0.1, 1.0}});
  CHECK(s.at(0.0) == 0.0);
  CHECK(s.at(0.1) == 1.0);
  CHECK(s.at(0.49) == 1.0);
  CHECK(s.at(0.5) == 2.0);
  CHECK(s.at(9.0) == 2.0);
  s.add(0.3, 7.0);
  CHECK(s.at(0.35) == 7.0);
  CHECK(Schedule::constant(4.0).at(0.0) == 4.0);
  CHECK(Schedule().empty());
}

TEST_CASE("magnetizing ramp") {
  Scenario s = Scenario::defaults();
  CHECK(flux_startup(s, 0.0) == doctest::Approx(0.08));
  CHECK(flux_startup(s, 0.05) == doctest::Approx(s.initial_flux_ref));
  CHECK(flux_startup(s, 0.025) == doctest::Approx((0.08 + s.initial_flux_ref) / 2));
  CHECK(flux_startup(s, 1.0) == s.initial_flux_ref);
}

TEST_CASE("PI speed controller") {
  const PiGains g{1.0, 0.0, 50.0};
  CHECK(pi_speed_controller(0.0, {}, {0.5, 20.0, 50.0}, 1e-4).torque_ref == 0.0);
  CHECK(pi_speed_controller(5.0, {}, g, 1e-4).torque_ref == 5.0);
  CHECK(pi_speed_controller(500.0, {}, g, 1e-4).torque_ref == 50.0);
  CHECK(pi_speed_controller(-500.0, {}, g, 1e-4).torque_ref == -50.0);
}

TEST_CASE("PI integrator saturates without winding up") {
  const PiGains g{0.5, 20.0, 39.0};
  PiState st;
  double out = 0.0;
  for (int k = 0; k < 200000; ++k) {
    const PiOutput o = pi_speed_controller(10.0, st, g, 1e-4);
    st = o.state;
    out = o.torque_ref;
  }
  CHECK(out == 39.0);
  CHECK(st.integral <= 39.0);
  // Once the error reverses the output leaves saturation within a few
  // integration steps of the proportional term.
  const PiOutput back = pi_speed_controller(-10.0, st, g, 1e-4);
  CHECK(back.torque_ref < 39.0);
}

TEST_CASE("scenario validation names the field") {
  Scenario s = Scenario::defaults();
  CHECK_NOTHROW(s.validate());
  s.dt = -1;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("dt"), ValidationError);
  s = Scenario::defaults();
  s.substeps = 0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("substeps"), ValidationError);
  s = Scenario::defaults();
  s.torque_ref = Schedule::constant(1.0);
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("mutually exclusive"), ValidationError);
  s = Scenario::defaults();
  s.load.add(3.0, 1.0);
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("schedule"), ValidationError);
  s = Scenario::defaults();
  s.controller = ControllerKind::kFuzzyOptimized;
  s.initial_flux_ref = 2.0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("initial_flux_ref"), ValidationError);
  s = Scenario::defaults();
  s.mode = ReferenceMode::kTorque;
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("zero torque reference regulates about zero") {
  const Scenario s = torque_scenario(0.3, Schedule::constant(0.0), Schedule::constant(0.0));
  const SimResult r = run(s);
  double sum = 0.0;
  int n = 0;
  for (const SimRecord& rec : r.records) {
    if (rec.time >= 0.15) {
      sum += rec.torque_plant;
      ++n;
    }
  }
  CHECK(std::abs(sum / n) <= s.hysteresis.torque_band);
}

TEST_CASE("rated torque step is tracked within 20 ms") {
  const MotorParams m;
  const Scenario s = torque_scenario(0.2, Schedule({{0.0, 0.0}, {0.1, m.rated_torque}}),
                                     Schedule({{0.0, 0.0}, {0.1, m.rated_torque}}));
  const SimResult r = run(s);
  const double band = s.hysteresis.torque_band;
  double entered = -1.0;
  int after = 0;
  int outside = 0;
  for (const SimRecord& rec : r.records) {
    if (rec.time < 0.1) continue;
    const bool inside = std::abs(rec.torque_est - rec.torque_ref) <= band;
    if (entered < 0.0 && inside) entered = rec.time;
    if (entered >= 0.0) {
      ++after;
      // One control period of overshoot past the band edge is inherent to
      // sampled hysteresis; count only departures beyond twice the band.
      if (std::abs(rec.torque_est - rec.torque_ref) > 2.0 * band) ++outside;
    }
  }
  REQUIRE(entered >= 0.0);
  CHECK(entered - 0.1 <= 0.02);
  CHECK(outside == 0);
  CHECK(after > 0);
}

TEST_CASE("records: count, ordering, ramp and bounds") {
  Scenario s = Scenario::defaults();
  s.controller = ControllerKind::kFuzzyOptimized;
  s.duration = 0.4;
  s.load = Schedule({{0.0, 0.0}, {0.2, 10.0}});
  s.record_stride = 7;
  const SimResult r = run(s);
  const long expected = static_cast<long>(std::floor(s.duration / s.dt / 7));
  CHECK(std::labs(static_cast<long>(r.records.size()) - expected) <= 1);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    CHECK(r.records[i].time > r.records[i - 1].time);
  }
  for (const SimRecord& rec : r.records) {
    if (rec.time < s.startup_time) {
      CHECK(rec.flux_ref == doctest::Approx(flux_startup(s, rec.time)));
    } else {
      CHECK(rec.flux_ref >= s.optimizer.flux_min);
      CHECK(rec.flux_ref <= s.optimizer.flux_max);
    }
    CHECK((rec.sector >= 1 && rec.sector <= 6));
  }
}

TEST_CASE("record cap raises the stride") {
  Scenario s = Scenario::defaults();
  s.duration = 0.1;
  s.load = Schedule();
  s.max_records = 1000;
  CHECK(s.effective_stride() == 10);
  const SimResult r = run(s);
  CHECK(r.records.size() <= 1000);
}

TEST_CASE("identical scenarios give identical records, also across threads") {
  Scenario s = Scenario::defaults();
  s.controller = ControllerKind::kFuzzyOptimized;
  s.duration = 0.3;
  s.load = Schedule({{0.0, 0.0}, {0.2, 8.0}});
  const SimResult a = run(s);
  SimResult b;
  SimResult c;
  std::thread t1([&] { b = run(s); });
  std::thread t2([&] { c = run(s); });
  t1.join();
  t2.join();
  CHECK(a.records == b.records);
  CHECK(a.records == c.records);
  CHECK(a.final_state == b.final_state);
}

TEST_CASE("an oversized control period reports instability") {
  Scenario s = Scenario::defaults();
  s.duration = 0.5;
  s.dt = 0.02;
  s.startup_time = 0.0;
  s.load = Schedule();
  s.optimizer = fuzzy::OptimizerConfig::defaults_for(s.motor, s.dt);
  CHECK_THROWS_AS(run(s), InstabilityError);
}

TEST_CASE("change points include the startup and all steps") {
  const Scenario s = Scenario::defaults();
  const std::vector<double> cps = s.change_points();
  CHECK(cps == std::vector<double>{0.0, 0.05, 0.5, 1.0, 1.5});
}
