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

#include <cmath>

namespace dtcsim {

/// Instantaneous three-phase quantity (currents or voltages).
struct PhaseTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  friend bool operator==(const PhaseTriple&, const PhaseTriple&) = default;
};

struct AlphaBetaZero {
  double alpha = 0.0;
  double beta = 0.0;
  double zero = 0.0;

  friend bool operator==(const AlphaBetaZero&, const AlphaBetaZero&) = default;
};

/// Stationary-frame vector. Used for currents, voltages and flux linkages.
struct SpaceVector {
  double alpha = 0.0;
  double beta = 0.0;

  SpaceVector& operator+=(const SpaceVector& o) {
    alpha += o.alpha;
    beta += o.beta;
    return *this;
  }
  SpaceVector& operator-=(const SpaceVector& o) {
    alpha -= o.alpha;
    beta -= o.beta;
    return *this;
  }
  SpaceVector& operator*=(double k) {
    alpha *= k;
    beta *= k;
    return *this;
  }

  friend SpaceVector operator+(SpaceVector l, const SpaceVector& r) { return l += r; }
  friend SpaceVector operator-(SpaceVector l, const SpaceVector& r) { return l -= r; }
  friend SpaceVector operator*(SpaceVector v, double k) { return v *= k; }
  friend SpaceVector operator*(double k, SpaceVector v) { return v *= k; }
  friend SpaceVector operator-(SpaceVector v) { return v *= -1.0; }
  friend bool operator==(const SpaceVector&, const SpaceVector&) = default;

  double norm() const { return std::hypot(alpha, beta); }
};

/// z-component of l x r.
inline double cross(const SpaceVector& l, const SpaceVector& r) {
  return l.alpha * r.beta - l.beta * r.alpha;
}

inline double dot(const SpaceVector& l, const SpaceVector& r) {
  return l.alpha * r.alpha + l.beta * r.beta;
}

// The transform is the amplitude-invariant 2/3 matrix
//
//         | 1     -1/2    -1/2  |
//   2/3 * | 0   -sqrt3/2 sqrt3/2|
//         | 1/2   1/2     1/2   |
//
// Note the beta row: phase c leads phase b, which mirrors the more common
// convention. Everything downstream (inverter vector angles, sectors) is
// expressed in this frame.
AlphaBetaZero clarke(const PhaseTriple& in);

/// Exact inverse of clarke().
PhaseTriple inverse_clarke(const AlphaBetaZero& in);

inline SpaceVector to_space_vector(const AlphaBetaZero& v) {
  return {v.alpha, v.beta};
}

}  // namespace dtcsim
