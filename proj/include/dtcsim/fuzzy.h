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
#include <string>
#include <string_view>
#include <vector>

#include "dtcsim/machine.h"

namespace dtcsim::fuzzy {

enum class Shape { kTriangle, kTrapezoid };

/// Piecewise-linear membership function. A triangle (a, b, c) is evaluated
/// as the trapezoid (a, b, b, c). Equal consecutive breakpoints form a
/// vertical edge, which is how shoulders at the universe edge are written.
struct MembershipFunction {
  std::string label;
  Shape shape = Shape::kTriangle;
  std::vector<double> breakpoints;

  static MembershipFunction triangle(std::string label, double a, double b, double c);
  static MembershipFunction trapezoid(std::string label, double a, double b, double c,
                                      double d);

  double operator()(double x) const;
  void validate() const;
};

double membership(const MembershipFunction& mf, double x);

struct LinguisticVariable {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::vector<MembershipFunction> sets;

  /// Index of the set labelled `label`, or -1.
  int index_of(std::string_view label) const;
  double clamp(double x) const;

  /// Checks breakpoints, label uniqueness, and that every point of the
  /// universe has positive membership in at least one set.
  void validate() const;
};

struct Rule {
  std::string torque_error;
  std::string flux_level;
  std::string output;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleBase {
  std::vector<Rule> rules;
};

/// Everything a rule-definition file describes.
struct Definition {
  LinguisticVariable torque_error;  // "te", normalized torque error
  LinguisticVariable flux_level;    // "flux", normalized flux reference
  LinguisticVariable output;        // "d", normalized flux reference change
  RuleBase rule_base;
};

/// Output fuzzy set sampled on a uniform grid over the output universe.
struct AggregateSet {
  std::vector<double> x;
  std::vector<double> mu;
};

inline constexpr int kDefaultGridPoints = 201;

/// Validated, index-resolved Mamdani system. Immutable after construction.
class Engine {
 public:
  /// Throws ValidationError when variables are malformed or the rule base is
  /// not total (every antecedent pair exactly once, all labels known).
  explicit Engine(Definition definition);

  const Definition& definition() const { return def_; }

  /// Rule firing strengths (min of the antecedent memberships), in rule order.
  std::vector<double> rule_strengths(double torque_error_norm,
                                     double flux_level_norm) const;

  /// Min-AND, clip, max-aggregate. Inputs are clamped to their universes.
  AggregateSet infer(double torque_error_norm, double flux_level_norm,
                     int grid_points = kDefaultGridPoints) const;

  /// Aggregate for explicit per-rule strengths. Used by tests to drive
  /// arbitrary strength combinations.
  AggregateSet aggregate(std::span<const double> strengths,
                         int grid_points = kDefaultGridPoints) const;

 private:
  struct ResolvedRule {
    int torque_error;
    int flux_level;
    int output;
  };

  Definition def_;
  std::vector<ResolvedRule> resolved_;
};

/// Centroid sum(x mu) / sum(mu); 0 when the set is empty.
double defuzzify(const AggregateSet& aggregate);

/// The built-in rule base and membership layout.
const Definition& default_definition();

/// Rule-definition text format:
///
///   # comment
///   [te -1 1]                      section: variable name and universe
///   NB trapezoid -1 -1 -0.66 -0.33 label shape breakpoints
///   [flux 0 1]
///   ...
///   [d -1 1]
///   ...
///   IF te=NB AND flux=S THEN d=Z   one rule per line, anywhere
///
/// Throws ParseError with the line number on malformed input.
Definition parse_definition(std::string_view text);
Definition load_definition(const std::string& path);
std::string format_definition(const Definition& definition);

struct OptimizerConfig {
  double torque_error_scale = 0.0;  // N m, normalization base
  double delta_max = 0.0;           // Wb per update
  double flux_min = 0.0;            // Wb
  double flux_max = 0.0;            // Wb
  double update_period = 0.0;       // s

  static OptimizerConfig defaults_for(const MotorParams& motor, double control_dt);
  void validate() const;
};

/// One update of the flux reference: normalize, infer, defuzzify, scale by
/// delta_max, add, clamp to [flux_min, flux_max].
double optimizer_step(const Engine& engine, const OptimizerConfig& cfg,
                      double torque_error, double flux_ref_current);

}  // namespace dtcsim::fuzzy
