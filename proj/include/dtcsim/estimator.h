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

#include "dtcsim/frames.h"

namespace dtcsim {

/// Voltage-model stator flux estimator state: the running integral of
/// (v - rs * i) on each axis.
struct EstimatorState {
  SpaceVector integrated_flux;
  double rs_used = 0.0;
};

struct FluxEstimate {
  SpaceVector flux;
  double magnitude = 0.0;  // Wb
  double angle = 0.0;      // rad, in (-pi, pi]
  int sector = 1;          // 1..6
};

/// Forward-Euler accumulation of the stator voltage equation.
EstimatorState update_flux(const EstimatorState& state, const SpaceVector& v_s,
                           const SpaceVector& i_s, double dt);

double flux_magnitude(const SpaceVector& flux);

/// 3/2 p (flux x current).
double estimate_torque(const SpaceVector& flux, const SpaceVector& i_s,
                       int pole_pairs);

/// Sector k covers [(2k - 3) * 30deg, (2k - 1) * 30deg), so sector 1 is
/// centred on the alpha axis. Throws ZeroFluxError at the origin.
int flux_sector(const SpaceVector& flux);

/// Full estimate; at the origin the sector falls back to previous_sector.
FluxEstimate estimate(const SpaceVector& flux, int previous_sector);

}  // namespace dtcsim
