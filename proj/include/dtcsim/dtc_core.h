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

#include <array>

#include "dtcsim/machine.h"

namespace dtcsim {

struct HysteresisConfig {
  double flux_band = 0.0;    // Wb, half-width
  double torque_band = 0.0;  // N m, half-width

  /// 1% of rated flux and 2% of rated torque.
  static HysteresisConfig defaults_for(const MotorParams& motor);
  void validate() const;
};

struct ComparatorState {
  int flux_out = 0;    // {0, 1}
  int torque_out = 0;  // {-1, 0, +1}
};

/// Two-level flux comparator. error = reference - estimate.
int flux_comparator(double error, double band, int prev);

/// Three-level torque comparator with zero return: a saturated output falls
/// back to 0 once the error crosses zero, not at the opposite band edge.
int torque_comparator(double error, double band, int prev);

/// Switch patterns of the active vectors, indexed so that entry k (0-based)
/// lies at k * 60 degrees in the alpha-beta frame of clarke().
///
/// With this frame the 60-degree vector is (1,0,1), not the (1,1,0) of the
/// mirrored textbook frame.
inline constexpr std::array<SwitchState, 6> kActiveVectors = {{
    {1, 0, 0},
    {1, 0, 1},
    {0, 0, 1},
    {0, 1, 1},
    {0, 1, 0},
    {1, 1, 0},
}};

inline constexpr SwitchState kZeroVectorLow{0, 0, 0};
inline constexpr SwitchState kZeroVectorHigh{1, 1, 1};

/// Active vector V_index for index in 1..6 (V1 at 0 degrees, counter-clockwise).
SwitchState active_vector(int index);

/// Classic DTC switching table.
///
///   flux up,   torque up   -> V(sector + 1)
///   flux up,   torque down -> V(sector - 1)
///   flux down, torque up   -> V(sector + 2)
///   flux down, torque down -> V(sector - 2)
///   torque hold            -> whichever zero vector needs fewer leg changes
///
/// Throws ValidationError for sector outside 1..6.
SwitchState select_vector(int flux_cmd, int torque_cmd, int sector,
                          const SwitchState& previous);

}  // namespace dtcsim
