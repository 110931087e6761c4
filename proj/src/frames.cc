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

#include "dtcsim/frames.h"

#include <numbers>

namespace dtcsim {

namespace {
constexpr double kHalfSqrt3 = std::numbers::sqrt3 / 2.0;
}

AlphaBetaZero clarke(const PhaseTriple& in) {
  constexpr double k = 2.0 / 3.0;
  return {
      k * (in.a - 0.5 * in.b - 0.5 * in.c),
      k * (-kHalfSqrt3 * in.b + kHalfSqrt3 * in.c),
      k * 0.5 * (in.a + in.b + in.c),
  };
}

PhaseTriple inverse_clarke(const AlphaBetaZero& in) {
  // Inverse of the matrix above; the zero row carries weight 1 per phase.
  return {
      in.alpha + in.zero,
      -0.5 * in.alpha - kHalfSqrt3 * in.beta + in.zero,
      -0.5 * in.alpha + kHalfSqrt3 * in.beta + in.zero,
  };
}

}  // namespace dtcsim
