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

#include "dtcsim/machine.h"

namespace dtcsim {

/// One sampled row of a simulation. All values are taken at `time`, before
/// the plant is advanced with `sw`.
struct SimRecord {
  double time = 0.0;          // s
  double torque_est = 0.0;    // N m
  double torque_plant = 0.0;  // N m
  double torque_ref = 0.0;    // N m
  double flux_mag_est = 0.0;  // Wb
  double flux_ref = 0.0;      // Wb
  double flux_alpha = 0.0;    // Wb, estimated
  double flux_beta = 0.0;     // Wb, estimated
  double speed_mech = 0.0;    // rad/s
  int sector = 1;
  SwitchState sw;
  SpaceVector plant_flux;     // Wb, not part of the CSV schema

  friend bool operator==(const SimRecord&, const SimRecord&) = default;
};

}  // namespace dtcsim
