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

#include <cstdint>

#include "dtcsim/frames.h"

namespace dtcsim {

/// Induction motor and DC-link parameters.
///
/// The defaults are a 4 kW, two pole pair machine commonly used in
/// simulation studies. They are not tied to any particular measured motor.
struct MotorParams {
  double rs = 1.405;               // ohm
  double rr = 1.395;               // ohm
  double ls = 0.1780;              // H
  double lr = 0.1780;              // H
  double lm = 0.1722;              // H
  int pole_pairs = 2;
  double inertia = 0.0131;         // kg m^2
  double friction = 0.002985;      // N m s / rad
  double rated_flux = 0.8;         // Wb
  double rated_torque = 26.0;      // N m
  double vdc = 540.0;              // V

  /// ls * lr - lm^2
  double leakage_determinant() const { return ls * lr - lm * lm; }

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

struct MotorState {
  SpaceVector stator_flux;  // Wb
  SpaceVector rotor_flux;   // Wb
  double speed_mech = 0.0;  // rad/s
  double rotor_angle = 0.0; // rad, wrapped to [0, 2 pi)

  friend bool operator==(const MotorState&, const MotorState&) = default;
};

/// Time derivative of every MotorState field.
struct MotorStateDerivative {
  SpaceVector stator_flux;
  SpaceVector rotor_flux;
  double speed_mech = 0.0;
  double rotor_angle = 0.0;
};

/// Two-level inverter leg states; 1 connects the phase to the positive rail.
struct SwitchState {
  std::uint8_t sa = 0;
  std::uint8_t sb = 0;
  std::uint8_t sc = 0;

  friend bool operator==(const SwitchState&, const SwitchState&) = default;

  bool is_zero_vector() const { return sa == sb && sb == sc; }
};

/// Number of legs that differ between two switch states.
int legs_changed(const SwitchState& from, const SwitchState& to);

/// Ideal inverter phase-to-neutral voltages for a balanced wye load.
PhaseTriple inverter_phase_voltages(const SwitchState& sw, double vdc);

struct MachineCurrents {
  SpaceVector stator;
  SpaceVector rotor;
};

MachineCurrents currents_from_fluxes(const MotorState& state,
                                     const MotorParams& params);

/// Air-gap torque 3/2 p (lambda_s x i_s) from the plant's own flux and current.
double electromagnetic_torque(const MotorState& state, const MotorParams& params);

MotorStateDerivative derivative(const MotorState& state, const SpaceVector& v_s,
                                double t_load, const MotorParams& params);

/// One classical RK4 step with v_s and t_load held constant over dt.
/// Throws InstabilityError if the result is not finite.
MotorState step(const MotorState& state, const SpaceVector& v_s, double t_load,
                const MotorParams& params, double dt);

}  // namespace dtcsim
