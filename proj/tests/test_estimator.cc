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
#include <random>

#include "doctest.h"
#include "dtcsim/errors.h"
#include "dtcsim/estimator.h"
#include "dtcsim/frames.h"
#include "dtcsim/machine.h"

using namespace dtcsim;

namespace {

SpaceVector polar(double r, double deg) {
  const double a = deg * M_PI / 180.0;
  return {r * std::cos(a), r * std::sin(a)};
}

// Sector by brute force: the sector whose centre is angularly nearest,
// ties resolved upward.
int nearest_centre_sector(double deg) {
  double x = std::fmod(deg + 30.0, 360.0);
  if (x < 0) x += 360.0;
  return static_cast<int>(x / 60.0) + 1;
}

}  // namespace

TEST_CASE("update_flux examples") {
  EstimatorState s{{0.2, -0.1}, 1.5};
  const SpaceVector i{3.0, -2.0};
  const EstimatorState same = update_flux(s, s.rs_used * i, i, 1e-4);
  CHECK(same.integrated_flux.alpha == doctest::Approx(0.2));
  CHECK(same.integrated_flux.beta == doctest::Approx(-0.1));

  const EstimatorState one = update_flux({{0, 0}, 1.0}, {100, 0}, {0, 0}, 1e-4);
  CHECK(one.integrated_flux.alpha == doctest::Approx(0.01));
  CHECK(one.integrated_flux.beta == 0.0);

  const SpaceVector v{40.0, 7.0};
  const EstimatorState two = update_flux(update_flux(s, v, i, 1e-4), v, i, 1e-4);
  const EstimatorState big = update_flux(s, v, i, 2e-4);
  CHECK(two.integrated_flux.alpha == doctest::Approx(big.integrated_flux.alpha));
  CHECK(two.integrated_flux.beta == doctest::Approx(big.integrated_flux.beta));

  CHECK_THROWS_AS(update_flux(s, v, i, 0.0), ValidationError);
}

TEST_CASE("flux magnitude") {
  CHECK(flux_magnitude({3, 4}) == 5.0);
  CHECK(flux_magnitude({0, 0}) == 0.0);
  CHECK(flux_magnitude({1, 1}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(flux_magnitude(SpaceVector{3, 4} * -2.5) == doctest::Approx(12.5));
}

TEST_CASE("estimated torque") {
  CHECK(estimate_torque({1, 2}, {2, 4}, 2) == 0.0);
  CHECK(estimate_torque({1, 0}, {0, 10}, 2) == doctest::Approx(30.0));
  CHECK(estimate_torque({0.3, 0.5}, {4, -1}, 2) ==
        doctest::Approx(-estimate_torque({4, -1}, {0.3, 0.5}, 2)));
}

TEST_CASE("sector examples and boundaries") {
  CHECK(flux_sector({1, 0}) == 1);
  CHECK(flux_sector({0, 1}) == 3);
  CHECK(flux_sector({-1, 0}) == 4);
  // Exact boundaries belong to the sector above them.
  const double h = std::sqrt(3.0) / 2.0;
  CHECK(flux_sector({h, 0.5}) == 2);
  CHECK(flux_sector({h, -0.5}) == 1);
  CHECK(flux_sector({-h, 0.5}) == 4);
  CHECK(flux_sector({-h, -0.5}) == 5);
  CHECK(flux_sector({0, -1}) == 6);
  CHECK_THROWS_AS(flux_sector({0, 0}), ZeroFluxError);
}

TEST_CASE("sector agrees with the angular brute force") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> deg(-720.0, 720.0);
  for (int k = 0; k < 20000; ++k) {
    const double d = deg(rng);
    const double rem = std::fmod(std::fmod(d + 30.0, 60.0) + 60.0, 60.0);
    if (rem < 1e-9 || rem > 60.0 - 1e-9) continue;  // skip float-ambiguous edges
    CHECK(flux_sector(polar(0.8, d)) == nearest_centre_sector(d));
  }
}

TEST_CASE("rotating by 60 degrees advances the sector") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> deg(0.0, 360.0);
  for (int k = 0; k < 2000; ++k) {
    const double d = deg(rng);
    const double rem = std::fmod(d + 30.0, 60.0);
    if (rem < 1e-6 || rem > 60.0 - 1e-6) continue;
    const int s0 = flux_sector(polar(1.0, d));
    const int s1 = flux_sector(polar(1.0, d + 60.0));
    CHECK(s1 == s0 % 6 + 1);
  }
}

TEST_CASE("estimate falls back at the origin") {
  const FluxEstimate e = estimate({0, 0}, 4);
  CHECK(e.sector == 4);
  CHECK(e.magnitude == 0.0);
  const FluxEstimate f = estimate({0, -0.5}, 1);
  CHECK(f.sector == 6);
  CHECK(f.angle == doctest::Approx(-M_PI / 2));
  CHECK(f.magnitude == doctest::Approx(0.5));
}

TEST_CASE("open-loop estimate follows the plant stator flux") {
  // Drive the plant with a rotating six-step sequence and feed the
  // estimator the exact terminal quantities.
  const MotorParams p;
  MotorState plant;
  EstimatorState est{{}, p.rs};
  const double dt = 50e-6;
  const SwitchState seq[6] = {{1, 0, 0}, {1, 0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}, {1, 1, 0}};
  double worst = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const SwitchState sw = seq[(k / 40) % 6];
    const SpaceVector v = to_space_vector(clarke(inverter_phase_voltages(sw, p.vdc * 0.3)));
    const SpaceVector i = currents_from_fluxes(plant, p).stator;
    // Trapezoidal current average keeps the comparison at integration order.
    const MotorState next = step(plant, v, 0.0, p, dt);
    const SpaceVector i_next = currents_from_fluxes(next, p).stator;
    est = update_flux(est, v, (i + i_next) * 0.5, dt);
    plant = next;
    worst = std::max(worst, (est.integrated_flux - plant.stator_flux).norm());
  }
  CHECK(worst < 0.02 * p.rated_flux);
}
