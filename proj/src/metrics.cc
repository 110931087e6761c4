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

#include "dtcsim/metrics.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dtcsim/errors.h"

namespace dtcsim {

namespace {

struct Moments {
  double mean = 0.0;
  double rms = 0.0;
  double p2p = 0.0;
};

Moments moments(std::span<const double> v) {
  Moments m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - m.mean) * (x - m.mean);
  m.rms = std::sqrt(sq / static_cast<double>(v.size()));
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  m.p2p = *hi - *lo;
  return m;
}

void check_window(double t0, double t1, std::size_t n) {
  if (!(t0 < t1)) throw ValidationError("ripple window needs t0 < t1");
  if (n < 2) throw ValidationError("ripple window holds fewer than two records");
}

}  // namespace

RippleReport torque_ripple(std::span<const SimRecord> records, double t0, double t1) {
  std::vector<double> torque;
  double flux_ref_sum = 0.0;
  double flux_err_sq = 0.0;
  for (const SimRecord& r : records) {
    if (r.time < t0 || r.time > t1) continue;
    torque.push_back(r.torque_plant);
    flux_ref_sum += r.flux_ref;
    flux_err_sq += (r.flux_mag_est - r.flux_ref) * (r.flux_mag_est - r.flux_ref);
  }
  check_window(t0, t1, torque.size());

  const Moments m = moments(torque);
  const double n = static_cast<double>(torque.size());
  RippleReport rep;
  rep.t0 = t0;
  rep.t1 = t1;
  rep.torque_mean = m.mean;
  rep.torque_ripple_rms = m.rms;
  rep.torque_ripple_peak_to_peak = m.p2p;
  rep.flux_ref_mean = flux_ref_sum / n;
  rep.flux_mag_rms_error = std::sqrt(flux_err_sq / n);
  rep.samples = torque.size();
  return rep;
}

RippleReport ripple_of(std::span<const double> torque, double t0, double t1) {
  check_window(t0, t1, torque.size());
  const Moments m = moments(torque);
  RippleReport rep;
  rep.t0 = t0;
  rep.t1 = t1;
  rep.torque_mean = m.mean;
  rep.torque_ripple_rms = m.rms;
  rep.torque_ripple_peak_to_peak = m.p2p;
  rep.samples = torque.size();
  return rep;
}

ComparisonSummary compare(const RippleReport& conventional, const RippleReport& fuzzy) {
  ComparisonSummary s;
  s.conventional = conventional;
  s.fuzzy = fuzzy;
  if (conventional.torque_ripple_rms > 0.0) {
    s.ratio_defined = true;
    s.ratio = fuzzy.torque_ripple_rms / conventional.torque_ripple_rms;
    s.reduction_percent = (1.0 - s.ratio) * 100.0;
  }
  return s;
}

std::vector<Segment> steady_segments(std::span<const double> change_points,
                                     double duration, double settle) {
  std::set<double> points{0.0};
  for (double t : change_points) {
    if (t > 0.0 && t < duration) points.insert(t);
  }
  std::vector<double> sorted(points.begin(), points.end());
  sorted.push_back(duration);

  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double t0 = sorted[i] + settle;
    if (t0 < sorted[i + 1]) out.push_back({sorted[i], t0, sorted[i + 1], 0.0});
  }
  return out;
}

}  // namespace dtcsim
