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

#include "dtcsim/estimator.h"

#include <cmath>
#include <numbers>

#include "dtcsim/errors.h"

namespace dtcsim {

EstimatorState update_flux(const EstimatorState& state, const SpaceVector& v_s,
                           const SpaceVector& i_s, double dt) {
  if (!(dt > 0.0)) {
    throw ValidationError("dt must be > 0");
  }
  EstimatorState next = state;
  next.integrated_flux.alpha += (v_s.alpha - state.rs_used * i_s.alpha) * dt;
  next.integrated_flux.beta += (v_s.beta - state.rs_used * i_s.beta) * dt;
  return next;
}

double flux_magnitude(const SpaceVector& flux) {
  return std::sqrt(flux.alpha * flux.alpha + flux.beta * flux.beta);
}

double estimate_torque(const SpaceVector& flux, const SpaceVector& i_s,
                       int pole_pairs) {
  return 1.5 * pole_pairs * (flux.alpha * i_s.beta - flux.beta * i_s.alpha);
}

int flux_sector(const SpaceVector& flux) {
  if (flux.alpha == 0.0 && flux.beta == 0.0) {
    throw ZeroFluxError("flux sector is undefined at the origin");
  }
  // Leading edge of sector k is at (2k - 3) * 30 degrees. A vector lies in
  // sector k when it is on or left of edge k and strictly right of edge k+1.
  // Comparing cross products keeps the exact boundaries half-open.
  constexpr double h = std::numbers::sqrt3 / 2.0;
  static constexpr SpaceVector kEdges[6] = {
      {h, -0.5}, {h, 0.5}, {0.0, 1.0}, {-h, 0.5}, {-h, -0.5}, {0.0, -1.0}};
  for (int k = 0; k < 6; ++k) {
    if (cross(kEdges[k], flux) >= 0.0 && cross(kEdges[(k + 1) % 6], flux) < 0.0) {
      return k + 1;
    }
  }
  // Unreachable for finite input.
  throw ZeroFluxError("flux sector is undefined for non-finite flux");
}

FluxEstimate estimate(const SpaceVector& flux, int previous_sector) {
  FluxEstimate out;
  out.flux = flux;
  out.magnitude = flux_magnitude(flux);
  out.angle = std::atan2(flux.beta, flux.alpha);
  out.sector = out.magnitude > 0.0 ? flux_sector(flux) : previous_sector;
  return out;
}

}  // namespace dtcsim
