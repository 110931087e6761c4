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

#include "dtcsim/machine.h"

#include <cmath>
#include <numbers>
#include <string>

#include "dtcsim/errors.h"

namespace dtcsim {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string("motor.") + name +
                          " must be finite and > 0");
  }
}

MotorState advance(const MotorState& s, const MotorStateDerivative& d, double h) {
  return {
      s.stator_flux + d.stator_flux * h,
      s.rotor_flux + d.rotor_flux * h,
      s.speed_mech + d.speed_mech * h,
      s.rotor_angle + d.rotor_angle * h,
  };
}

bool is_finite(const MotorState& s) {
  return std::isfinite(s.stator_flux.alpha) && std::isfinite(s.stator_flux.beta) &&
         std::isfinite(s.rotor_flux.alpha) && std::isfinite(s.rotor_flux.beta) &&
         std::isfinite(s.speed_mech) && std::isfinite(s.rotor_angle);
}

}  // namespace

void MotorParams::validate() const {
  require_positive(rs, "rs");
  require_positive(rr, "rr");
  require_positive(ls, "ls");
  require_positive(lr, "lr");
  require_positive(lm, "lm");
  require_positive(inertia, "inertia");
  require_positive(friction, "friction");
  require_positive(rated_flux, "rated_flux");
  require_positive(rated_torque, "rated_torque");
  require_positive(vdc, "vdc");
  if (pole_pairs < 1) {
    throw ValidationError("motor.pole_pairs must be >= 1");
  }
  if (!(leakage_determinant() > 0.0)) {
    throw ValidationError(
        "motor inductances are singular: ls * lr - lm^2 must be > 0");
  }
}

int legs_changed(const SwitchState& from, const SwitchState& to) {
  return (from.sa != to.sa) + (from.sb != to.sb) + (from.sc != to.sc);
}

PhaseTriple inverter_phase_voltages(const SwitchState& sw, double vdc) {
  const double a = sw.sa;
  const double b = sw.sb;
  const double c = sw.sc;
  const double k = vdc / 3.0;
  return {k * (2.0 * a - b - c), k * (2.0 * b - c - a), k * (2.0 * c - a - b)};
}

MachineCurrents currents_from_fluxes(const MotorState& state,
                                     const MotorParams& params) {
  const double det = params.leakage_determinant();
  if (!(det > 0.0)) {
    throw ValidationError(
        "motor inductances are singular: ls * lr - lm^2 must be > 0");
  }
  const SpaceVector& ls_flux = state.stator_flux;
  const SpaceVector& lr_flux = state.rotor_flux;
  return {
      (params.lr * ls_flux - params.lm * lr_flux) * (1.0 / det),
      (params.ls * lr_flux - params.lm * ls_flux) * (1.0 / det),
  };
}

double electromagnetic_torque(const MotorState& state, const MotorParams& params) {
  const SpaceVector i_s = currents_from_fluxes(state, params).stator;
  return 1.5 * params.pole_pairs * cross(state.stator_flux, i_s);
}

MotorStateDerivative derivative(const MotorState& state, const SpaceVector& v_s,
                                double t_load, const MotorParams& params) {
  const MachineCurrents i = currents_from_fluxes(state, params);
  const double omega_e = params.pole_pairs * state.speed_mech;
  const SpaceVector& rotor_flux = state.rotor_flux;
  const double torque = 1.5 * params.pole_pairs * cross(state.stator_flux, i.stator);

  MotorStateDerivative d;
  d.stator_flux = v_s - params.rs * i.stator;
  d.rotor_flux = {-params.rr * i.rotor.alpha - omega_e * rotor_flux.beta,
                  -params.rr * i.rotor.beta + omega_e * rotor_flux.alpha};
  d.speed_mech =
      (torque - t_load - params.friction * state.speed_mech) / params.inertia;
  d.rotor_angle = state.speed_mech;
  return d;
}

MotorState step(const MotorState& state, const SpaceVector& v_s, double t_load,
                const MotorParams& params, double dt) {
  if (!(dt > 0.0)) {
    throw ValidationError("dt must be > 0");
  }
  const MotorStateDerivative k1 = derivative(state, v_s, t_load, params);
  const MotorStateDerivative k2 =
      derivative(advance(state, k1, dt / 2), v_s, t_load, params);
  const MotorStateDerivative k3 =
      derivative(advance(state, k2, dt / 2), v_s, t_load, params);
  const MotorStateDerivative k4 = derivative(advance(state, k3, dt), v_s, t_load, params);

  MotorStateDerivative slope;
  slope.stator_flux =
      (k1.stator_flux + 2.0 * k2.stator_flux + 2.0 * k3.stator_flux + k4.stator_flux) *
      (1.0 / 6.0);
  slope.rotor_flux =
      (k1.rotor_flux + 2.0 * k2.rotor_flux + 2.0 * k3.rotor_flux + k4.rotor_flux) *
      (1.0 / 6.0);
  slope.speed_mech =
      (k1.speed_mech + 2.0 * k2.speed_mech + 2.0 * k3.speed_mech + k4.speed_mech) / 6.0;
  slope.rotor_angle =
      (k1.rotor_angle + 2.0 * k2.rotor_angle + 2.0 * k3.rotor_angle + k4.rotor_angle) /
      6.0;

  MotorState next = advance(state, slope, dt);
  if (!is_finite(next)) {
    throw InstabilityError("plant state left the finite range (dt too large?)");
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  next.rotor_angle = std::fmod(next.rotor_angle, kTwoPi);
  if (next.rotor_angle < 0.0) next.rotor_angle += kTwoPi;
  // fmod can round a tiny negative angle up to exactly 2 pi.
  if (next.rotor_angle >= kTwoPi) next.rotor_angle = 0.0;
  return next;
}

}  // namespace dtcsim
