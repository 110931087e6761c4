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

#include <span>
#include <vector>

#include "dtcsim/record.h"

namespace dtcsim {

/// Steady-state statistics of one time window. Ripple is measured on the
/// plant (air-gap) torque.
struct RippleReport {
  double t0 = 0.0;
  double t1 = 0.0;
  double torque_mean = 0.0;
  double torque_ripple_rms = 0.0;
  double torque_ripple_peak_to_peak = 0.0;
  double flux_ref_mean = 0.0;
  double flux_mag_rms_error = 0.0;
  std::size_t samples = 0;
};

struct ComparisonSummary {
  RippleReport conventional;
  RippleReport fuzzy;
  bool ratio_defined = false;
  double ratio = 0.0;              // fuzzy rms / conventional rms
  double reduction_percent = 0.0;  // (1 - ratio) * 100
};

/// Statistics over records with t0 <= time <= t1. Throws ValidationError if
/// the window is inverted or holds fewer than two records.
RippleReport torque_ripple(std::span<const SimRecord> records, double t0, double t1);

/// Same statistics over an arbitrary torque sample vector.
RippleReport ripple_of(std::span<const double> torque, double t0, double t1);

ComparisonSummary compare(const RippleReport& conventional, const RippleReport& fuzzy);

/// Time windows between consecutive reference/load change points, each
/// starting `settle` seconds after its change point.
struct Segment {
  double start = 0.0;  // change point
  double t0 = 0.0;     // window start (start + settle)
  double t1 = 0.0;     // window end
  double load = 0.0;   // load torque during the segment, N m
};

inline constexpr double kDefaultSettleTime = 0.1;

std::vector<Segment> steady_segments(std::span<const double> change_points,
                                     double duration, double settle = kDefaultSettleTime);

}  // namespace dtcsim
