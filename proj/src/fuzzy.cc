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

#include "dtcsim/fuzzy.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "dtcsim/errors.h"

namespace dtcsim::fuzzy {

MembershipFunction MembershipFunction::triangle(std::string label, double a, double b,
                                                double c) {
  return {std::move(label), Shape::kTriangle, {a, b, c}};
}

MembershipFunction MembershipFunction::trapezoid(std::string label, double a, double b,
                                                 double c, double d) {
  return {std::move(label), Shape::kTrapezoid, {a, b, c, d}};
}

double MembershipFunction::operator()(double x) const {
  const bool tri = shape == Shape::kTriangle;
  const double a = breakpoints[0];
  const double b = breakpoints[1];
  const double c = tri ? breakpoints[1] : breakpoints[2];
  const double d = tri ? breakpoints[2] : breakpoints[3];
  if (x < a || x > d) return 0.0;
  if (x >= b && x <= c) return 1.0;
  if (x < b) return (x - a) / (b - a);
  return (d - x) / (d - c);
}

void MembershipFunction::validate() const {
  const std::size_t expected = shape == Shape::kTriangle ? 3 : 4;
  if (breakpoints.size() != expected) {
    throw ValidationError("membership '" + label + "' needs " +
                          std::to_string(expected) + " breakpoints");
  }
  for (double b : breakpoints) {
    if (!std::isfinite(b)) {
      throw ValidationError("membership '" + label + "' has a non-finite breakpoint");
    }
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw ValidationError("membership '" + label + "' breakpoints must be nondecreasing");
  }
  if (breakpoints.front() == breakpoints.back()) {
    throw ValidationError("membership '" + label + "' has zero width");
  }
}

double membership(const MembershipFunction& mf, double x) { return mf(x); }

int LinguisticVariable::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

double LinguisticVariable::clamp(double x) const { return std::clamp(x, min, max); }

void LinguisticVariable::validate() const {
  if (!(min < max) || !std::isfinite(min) || !std::isfinite(max)) {
    throw ValidationError("variable '" + name + "' needs a finite universe with min < max");
  }
  if (sets.empty()) {
    throw ValidationError("variable '" + name + "' has no sets");
  }
  std::set<std::string> labels;
  for (const auto& mf : sets) {
    mf.validate();
    if (!labels.insert(mf.label).second) {
      throw ValidationError("variable '" + name + "' repeats label '" + mf.label + "'");
    }
  }

  // Coverage: a dense grid plus every breakpoint, since gaps between
  // adjacent sets are typically a single point.
  std::vector<double> probes;
  constexpr int kProbes = 10001;
  for (int i = 0; i < kProbes; ++i) {
    probes.push_back(min + (max - min) * i / (kProbes - 1));
  }
  for (const auto& mf : sets) {
    for (double b : mf.breakpoints) {
      if (b >= min && b <= max) probes.push_back(b);
    }
  }
  for (double x : probes) {
    const bool covered =
        std::any_of(sets.begin(), sets.end(), [x](const auto& mf) { return mf(x) > 0.0; });
    if (!covered) {
      std::ostringstream msg;
      msg << "variable '" << name << "' does not cover x = " << x;
      throw ValidationError(msg.str());
    }
  }
}

Engine::Engine(Definition definition) : def_(std::move(definition)) {
  def_.torque_error.validate();
  def_.flux_level.validate();
  def_.output.validate();

  const auto& te = def_.torque_error;
  const auto& fl = def_.flux_level;
  std::vector<int> seen(te.sets.size() * fl.sets.size(), 0);
  for (const Rule& r : def_.rule_base.rules) {
    const ResolvedRule rr{te.index_of(r.torque_error), fl.index_of(r.flux_level),
                          def_.output.index_of(r.output)};
    if (rr.torque_error < 0) {
      throw ValidationError("rule uses unknown torque-error label '" + r.torque_error + "'");
    }
    if (rr.flux_level < 0) {
      throw ValidationError("rule uses unknown flux label '" + r.flux_level + "'");
    }
    if (rr.output < 0) {
      throw ValidationError("rule uses unknown output label '" + r.output + "'");
    }
    int& count = seen[rr.torque_error * fl.sets.size() + rr.flux_level];
    if (++count > 1) {
      throw ValidationError("rule base repeats antecedent te=" + r.torque_error +
                            " flux=" + r.flux_level);
    }
    resolved_.push_back(rr);
  }
  for (std::size_t i = 0; i < te.sets.size(); ++i) {
    for (std::size_t j = 0; j < fl.sets.size(); ++j) {
      if (seen[i * fl.sets.size() + j] == 0) {
        throw ValidationError("rule base has no rule for te=" + te.sets[i].label +
                              " flux=" + fl.sets[j].label);
      }
    }
  }
}

std::vector<double> Engine::rule_strengths(double torque_error_norm,
                                           double flux_level_norm) const {
  const double te_x = def_.torque_error.clamp(torque_error_norm);
  const double fl_x = def_.flux_level.clamp(flux_level_norm);
  std::vector<double> te_mu;
  for (const auto& mf : def_.torque_error.sets) te_mu.push_back(mf(te_x));
  std::vector<double> fl_mu;
  for (const auto& mf : def_.flux_level.sets) fl_mu.push_back(mf(fl_x));

  std::vector<double> strengths;
  strengths.reserve(resolved_.size());
  for (const auto& r : resolved_) {
    strengths.push_back(std::min(te_mu[r.torque_error], fl_mu[r.flux_level]));
  }
  return strengths;
}

AggregateSet Engine::infer(double torque_error_norm, double flux_level_norm,
                           int grid_points) const {
  const std::vector<double> strengths = rule_strengths(torque_error_norm, flux_level_norm);
  return aggregate(strengths, grid_points);
}

AggregateSet Engine::aggregate(std::span<const double> strengths, int grid_points) const {
  if (strengths.size() != resolved_.size()) {
    throw ValidationError("expected one strength per rule");
  }
  if (grid_points < 2) {
    throw ValidationError("output grid needs at least 2 points");
  }
  // Rules sharing a consequent collapse to their strongest firing.
  std::vector<double> clip(def_.output.sets.size(), 0.0);
  for (std::size_t i = 0; i < resolved_.size(); ++i) {
    double& level = clip[resolved_[i].output];
    level = std::max(level, std::clamp(strengths[i], 0.0, 1.0));
  }

  const double lo = def_.output.min;
  const double hi = def_.output.max;
  AggregateSet out;
  out.x.resize(grid_points);
  out.mu.assign(grid_points, 0.0);
  for (int k = 0; k < grid_points; ++k) {
    const double x = lo + (hi - lo) * k / (grid_points - 1);
    out.x[k] = x;
    double mu = 0.0;
    for (std::size_t s = 0; s < clip.size(); ++s) {
      if (clip[s] > 0.0) mu = std::max(mu, std::min(clip[s], def_.output.sets[s](x)));
    }
    out.mu[k] = mu;
  }
  return out;
}

double defuzzify(const AggregateSet& aggregate) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < aggregate.x.size(); ++i) {
    num += aggregate.x[i] * aggregate.mu[i];
    den += aggregate.mu[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

const Definition& default_definition() {
  static const Definition def = [] {
    using MF = MembershipFunction;
    Definition d;
    d.torque_error = {"te",
                      -1.0,
                      1.0,
                      {MF::trapezoid("NB", -1.0, -1.0, -0.66, -0.33),
                       MF::triangle("NM", -0.66, -0.33, -0.05),
                       MF::triangle("NS", -0.33, -0.05, 0.05),
                       MF::triangle("PS", -0.05, 0.05, 0.33),
                       MF::triangle("PM", 0.05, 0.33, 0.66),
                       MF::trapezoid("PB", 0.33, 0.66, 1.0, 1.0)}};
    d.flux_level = {"flux",
                    0.0,
                    1.0,
                    {MF::trapezoid("S", 0.0, 0.0, 0.25, 0.5),
                     MF::triangle("M", 0.25, 0.5, 0.75),
                     MF::trapezoid("B", 0.5, 0.75, 1.0, 1.0)}};
    d.output = {"d",
                -1.0,
                1.0,
                {MF::trapezoid("NB", -1.0, -1.0, -0.8, -0.5),
                 MF::triangle("NM", -0.8, -0.5, -0.2),
                 MF::triangle("NS", -0.5, -0.2, 0.0),
                 MF::triangle("Z", -0.2, 0.0, 0.2),
                 MF::triangle("PS", 0.0, 0.2, 0.5),
                 MF::triangle("PM", 0.2, 0.5, 0.8),
                 MF::trapezoid("PB", 0.5, 0.8, 1.0, 1.0)}};

    // Rows: flux reference level. Columns: NB NM NS PS PM PB torque error.
    // The negative and positive halves carry the same consequents.
    const char* const te_labels[6] = {"NB", "NM", "NS", "PS", "PM", "PB"};
    const char* const table[3][6] = {
        {"Z", "PS", "PB", "Z", "PS", "PB"},   // S
        {"NS", "Z", "PM", "NS", "Z", "PM"},   // M
        {"NB", "NM", "Z", "NB", "NM", "Z"},   // B
    };
    const char* const flux_labels[3] = {"S", "M", "B"};
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 6; ++col) {
        d.rule_base.rules.push_back({te_labels[col], flux_labels[row], table[row][col]});
      }
    }
    return d;
  }();
  return def;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  return tokens;
}

double parse_number(const std::string& tok, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
  return v;
}

std::string expect_assignment(const std::string& tok, std::string_view key, int line) {
  const std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0 || tok.size() == prefix.size()) {
    throw ParseError(line, "expected '" + prefix + "<label>', got '" + tok + "'");
  }
  return tok.substr(prefix.size());
}

}  // namespace

Definition parse_definition(std::string_view text) {
  Definition def;
  LinguisticVariable* current = nullptr;
  bool have_te = false;
  bool have_flux = false;
  bool have_d = false;

  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::vector<std::string> tok = split_ws(raw);
    if (tok.empty()) continue;

    if (tok[0].front() == '[') {
      // Rejoin so "[te -1 1]" and "[ te -1 1 ]" both parse.
      std::string joined;
      for (const auto& t : tok) joined += t + " ";
      const auto close = joined.find(']');
      if (close == std::string::npos || joined.find_first_not_of(' ', close + 1) != std::string::npos) {
        throw ParseError(line_no, "malformed section header");
      }
      const std::vector<std::string> head = split_ws(joined.substr(1, close - 1));
      if (head.size() != 3) {
        throw ParseError(line_no, "section header needs '[name min max]'");
      }
      bool* seen = nullptr;
      if (head[0] == "te") {
        current = &def.torque_error;
        seen = &have_te;
      } else if (head[0] == "flux") {
        current = &def.flux_level;
        seen = &have_flux;
      } else if (head[0] == "d") {
        current = &def.output;
        seen = &have_d;
      } else {
        throw ParseError(line_no, "unknown variable '" + head[0] + "' (expected te, flux or d)");
      }
      if (*seen) throw ParseError(line_no, "variable '" + head[0] + "' defined twice");
      *seen = true;
      current->name = head[0];
      current->min = parse_number(head[1], line_no);
      current->max = parse_number(head[2], line_no);
      continue;
    }

    if (tok[0] == "IF") {
      if (tok.size() != 6 || tok[2] != "AND" || tok[4] != "THEN") {
        throw ParseError(line_no,
                         "rule must read 'IF te=<label> AND flux=<label> THEN d=<label>'");
      }
      def.rule_base.rules.push_back({expect_assignment(tok[1], "te", line_no),
                                     expect_assignment(tok[3], "flux", line_no),
                                     expect_assignment(tok[5], "d", line_no)});
      continue;
    }

    if (current == nullptr) {
      throw ParseError(line_no, "membership line outside of a [variable] section");
    }
    if (tok.size() < 2) throw ParseError(line_no, "membership line needs a shape");
    MembershipFunction mf;
    mf.label = tok[0];
    if (tok[1] == "triangle") {
      mf.shape = Shape::kTriangle;
    } else if (tok[1] == "trapezoid") {
      mf.shape = Shape::kTrapezoid;
    } else {
      throw ParseError(line_no, "unknown shape '" + tok[1] + "'");
    }
    const std::size_t need = mf.shape == Shape::kTriangle ? 3 : 4;
    if (tok.size() != 2 + need) {
      throw ParseError(line_no, tok[1] + " needs " + std::to_string(need) + " breakpoints");
    }
    for (std::size_t i = 2; i < tok.size(); ++i) {
      mf.breakpoints.push_back(parse_number(tok[i], line_no));
    }
    try {
      mf.validate();
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    current->sets.push_back(std::move(mf));
  }

  if (!have_te || !have_flux || !have_d) {
    throw ParseError(line_no, "definition needs [te], [flux] and [d] sections");
  }
  return def;
}

Definition load_definition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rule definition '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_definition(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::string format_definition(const Definition& def) {
  std::ostringstream out;
  out.precision(17);
  for (const LinguisticVariable* v : {&def.torque_error, &def.flux_level, &def.output}) {
    out << "[" << v->name << " " << v->min << " " << v->max << "]\n";
    for (const auto& mf : v->sets) {
      out << mf.label << (mf.shape == Shape::kTriangle ? " triangle" : " trapezoid");
      for (double b : mf.breakpoints) out << " " << b;
      out << "\n";
    }
    out << "\n";
  }
  for (const Rule& r : def.rule_base.rules) {
    out << "IF te=" << r.torque_error << " AND flux=" << r.flux_level
        << " THEN d=" << r.output << "\n";
  }
  return out.str();
}

OptimizerConfig OptimizerConfig::defaults_for(const MotorParams& motor, double control_dt) {
  return {0.04 * motor.rated_torque, 0.005 * motor.rated_flux, 0.25 * motor.rated_flux,
          1.05 * motor.rated_flux, 10.0 * control_dt};
}

void OptimizerConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string("optimizer.") + name + " must be finite and > 0");
    }
  };
  positive(torque_error_scale, "torque_error_scale");
  positive(delta_max, "delta_max");
  positive(flux_min, "flux_min");
  positive(flux_max, "flux_max");
  positive(update_period, "update_period");
  if (!(flux_min < flux_max)) {
    throw ValidationError("optimizer.flux_min must be < optimizer.flux_max");
  }
}

double optimizer_step(const Engine& engine, const OptimizerConfig& cfg,
                      double torque_error, double flux_ref_current) {
  const double te_norm = torque_error / cfg.torque_error_scale;
  const double level = (flux_ref_current - cfg.flux_min) / (cfg.flux_max - cfg.flux_min);
  const auto& out = engine.definition().output;
  // Map the output universe onto [-delta_max, +delta_max].
  const double half_width = std::max(std::abs(out.min), std::abs(out.max));
  const double delta =
      cfg.delta_max * std::clamp(defuzzify(engine.infer(te_norm, level)) / half_width, -1.0, 1.0);
  return std::clamp(flux_ref_current + delta, cfg.flux_min, cfg.flux_max);
}

}  // namespace dtcsim::fuzzy
