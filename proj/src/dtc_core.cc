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

#include "dtcsim/dtc_core.h"

#include <cmath>
#include <string>

#include "dtcsim/errors.h"

namespace dtcsim {

HysteresisConfig HysteresisConfig::defaults_for(const MotorParams& motor) {
  return {0.01 * motor.rated_flux, 0.02 * motor.rated_torque};
}

void HysteresisConfig::validate() const {
  if (!(flux_band > 0.0) || !std::isfinite(flux_band)) {
    throw ValidationError("hysteresis.flux_band must be finite and > 0");
  }
  if (!(torque_band > 0.0) || !std::isfinite(torque_band)) {
    throw ValidationError("hysteresis.torque_band must be finite and > 0");
  }
}

int flux_comparator(double error, double band, int prev) {
  if (error > band) return 1;
  if (error < -band) return 0;
  return prev;
}

int torque_comparator(double error, double band, int prev) {
  if (error > band) return 1;
  if (error < -band) return -1;
  if (prev > 0) return error > 0.0 ? 1 : 0;
  if (prev < 0) return error < 0.0 ? -1 : 0;
  return 0;
}

SwitchState active_vector(int index) {
  if (index < 1 || index > 6) {
    throw ValidationError("voltage vector index must be in 1..6, got " +
                          std::to_string(index));
  }
  return kActiveVectors[index - 1];
}

SwitchState select_vector(int flux_cmd, int torque_cmd, int sector,
                          const SwitchState& previous) {
  if (sector < 1 || sector > 6) {
    throw ValidationError("sector must be in 1..6, got " + std::to_string(sector));
  }
  if (torque_cmd == 0) {
    return legs_changed(previous, kZeroVectorLow) <=
                   legs_changed(previous, kZeroVectorHigh)
               ? kZeroVectorLow
               : kZeroVectorHigh;
  }
  const int advance = flux_cmd != 0 ? 1 : 2;
  const int offset = torque_cmd > 0 ? advance : -advance;
  const int index = ((sector - 1 + offset) % 6 + 6) % 6;
  return kActiveVectors[index];
}

}  // namespace dtcsim
