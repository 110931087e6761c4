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

#include "dtcsim/scenario_io.h"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "dtcsim/errors.h"

namespace dtcsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, int line, std::string_view key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "'" + std::string(key) + "' expects a number, got '" +
                               std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view text, int line, std::string_view key) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "'" + std::string(key) + "' expects an integer, got '" +
                               std::string(text) + "'");
  }
  return v;
}

ScheduleStep parse_step(std::string_view text, int line, std::string_view key) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError(line, "'" + std::string(key) + "' expects <time>:<value>");
  }
  return {parse_double(trim(text.substr(0, colon)), line, key),
          parse_double(trim(text.substr(colon + 1)), line, key)};
}

struct Parser {
  Scenario s = Scenario::defaults();
  std::string base_dir;
  std::set<std::string> seen;
  bool mode_set = false;
  bool speed_steps = false;
  bool torque_steps = false;
  bool load_steps = false;

  using Setter = std::function<void(std::string_view, int, std::string_view)>;

  std::map<std::string, Setter, std::less<>> setters() {
    std::map<std::string, Setter, std::less<>> m;
    auto real = [&m](const char* key, double& field) {
      m[key] = [&field](std::string_view v, int line, std::string_view k) {
        field = parse_double(v, line, k);
      };
    };
    auto integer = [&m](const char* key, int& field) {
      m[key] = [&field](std::string_view v, int line, std::string_view k) {
        field = parse_int(v, line, k);
      };
    };
    real("duration", s.duration);
    real("dt", s.dt);
    integer("substeps", s.substeps);
    real("startup_time", s.startup_time);
    real("initial_flux_ref", s.initial_flux_ref);
    real("speed_pi.kp", s.speed_pi.kp);
    real("speed_pi.ki", s.speed_pi.ki);
    real("speed_pi.torque_limit", s.speed_pi.torque_limit);
    real("hysteresis.flux_band", s.hysteresis.flux_band);
    real("hysteresis.torque_band", s.hysteresis.torque_band);
    real("optimizer.torque_error_scale", s.optimizer.torque_error_scale);
    real("optimizer.delta_max", s.optimizer.delta_max);
    real("optimizer.flux_min", s.optimizer.flux_min);
    real("optimizer.flux_max", s.optimizer.flux_max);
    real("optimizer.update_period", s.optimizer.update_period);
    real("motor.rs", s.motor.rs);
    real("motor.rr", s.motor.rr);
    real("motor.ls", s.motor.ls);
    real("motor.lr", s.motor.lr);
    real("motor.lm", s.motor.lm);
    integer("motor.pole_pairs", s.motor.pole_pairs);
    real("motor.inertia", s.motor.inertia);
    real("motor.friction", s.motor.friction);
    real("motor.rated_flux", s.motor.rated_flux);
    real("motor.rated_torque", s.motor.rated_torque);
    real("motor.vdc", s.motor.vdc);
    integer("record.stride", s.record_stride);
    m["record.max_rows"] = [this](std::string_view v, int line, std::string_view k) {
      const int n = parse_int(v, line, k);
      if (n < 1) throw ParseError(line, "'record.max_rows' must be >= 1");
      s.max_records = static_cast<std::size_t>(n);
    };
    m["controller"] = [this](std::string_view v, int line, std::string_view) {
      if (v == "conventional") {
        s.controller = ControllerKind::kConventional;
      } else if (v == "fuzzy_optimized") {
        s.controller = ControllerKind::kFuzzyOptimized;
      } else {
        throw ParseError(line, "controller must be conventional or fuzzy_optimized");
      }
    };
    m["mode"] = [this](std::string_view v, int line, std::string_view) {
      if (v == "speed") {
        s.mode = ReferenceMode::kSpeed;
      } else if (v == "torque") {
        s.mode = ReferenceMode::kTorque;
      } else {
        throw ParseError(line, "mode must be speed or torque");
      }
      mode_set = true;
    };
    m["optimizer.rules"] = [this](std::string_view v, int line, std::string_view) {
      std::filesystem::path p(v);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      try {
        s.rules = fuzzy::load_definition(p.string());
      } catch (const ParseError& e) {
        throw ParseError(line, p.string() + ": " + e.what());
      } catch (const std::exception& e) {
        throw ParseError(line, e.what());
      }
    };
    return m;
  }

  bool add_step(std::string_view key, std::string_view value, int line) {
    Schedule* sched = nullptr;
    bool* started = nullptr;
    if (key == "load.step") {
      sched = &s.load;
      started = &load_steps;
    } else if (key == "speed_ref.step") {
      sched = &s.speed_ref;
      started = &speed_steps;
    } else if (key == "torque_ref.step") {
      sched = &s.torque_ref;
      started = &torque_steps;
    } else {
      return false;
    }
    if (!*started) *sched = Schedule();
    *started = true;
    const ScheduleStep st = parse_step(value, line, key);
    sched->add(st.time, st.value);
    return true;
  }

  void run(std::string_view text) {
    const auto table = setters();
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
      const std::string_view key = trim(line.substr(0, eq));
      const std::string_view value = trim(line.substr(eq + 1));
      if (key.empty()) throw ParseError(line_no, "missing key");
      if (value.empty()) throw ParseError(line_no, "missing value for '" + std::string(key) + "'");
      if (add_step(key, value, line_no)) continue;
      const auto it = table.find(key);
      if (it == table.end()) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
      if (!seen.insert(std::string(key)).second) {
        throw ParseError(line_no, "repeated key '" + std::string(key) + "'");
      }
      it->second(value, line_no, key);
    }
    finish();
  }

  bool set(const char* key) const { return seen.count(key) > 0; }

  void finish() {
    if (!mode_set && torque_steps && !speed_steps) s.mode = ReferenceMode::kTorque;
    if (s.mode == ReferenceMode::kTorque && !speed_steps) s.speed_ref = Schedule();

    const HysteresisConfig h = HysteresisConfig::defaults_for(s.motor);
    if (!set("hysteresis.flux_band")) s.hysteresis.flux_band = h.flux_band;
    if (!set("hysteresis.torque_band")) s.hysteresis.torque_band = h.torque_band;

    // dt is only usable for derivation when positive; validate() reports it.
    const fuzzy::OptimizerConfig o =
        fuzzy::OptimizerConfig::defaults_for(s.motor, s.dt > 0.0 ? s.dt : 0.0);
    if (!set("optimizer.torque_error_scale")) s.optimizer.torque_error_scale = o.torque_error_scale;
    if (!set("optimizer.delta_max")) s.optimizer.delta_max = o.delta_max;
    if (!set("optimizer.flux_min")) s.optimizer.flux_min = o.flux_min;
    if (!set("optimizer.flux_max")) s.optimizer.flux_max = o.flux_max;
    if (!set("optimizer.update_period")) s.optimizer.update_period = o.update_period;

    if (!set("speed_pi.torque_limit")) s.speed_pi.torque_limit = 1.5 * s.motor.rated_torque;
    if (!set("initial_flux_ref")) s.initial_flux_ref = s.motor.rated_flux;
    // Shipped load steps are fractions of the default motor's rating and
    // are dropped past the end of a shorter run.
    if (!load_steps) {
      const Schedule shipped = Scenario::defaults().load;
      Schedule scaled;
      for (const ScheduleStep& st : shipped.steps()) {
        if (st.time > s.duration) continue;
        scaled.add(st.time, st.value / MotorParams{}.rated_torque * s.motor.rated_torque);
      }
      s.load = scaled;
    }
    s.validate();
  }
};

const char* short_name(ControllerKind k) { return to_string(k); }

}  // namespace

void RunConfig::validate() const {
  if (scenario_path.empty()) throw ValidationError("scenario path must not be empty");
  if (output_dir.empty()) throw ValidationError("output directory must not be empty");
  if (stride < 1) throw ValidationError("stride must be >= 1");
}

Scenario parse_scenario(std::string_view text, const std::string& base_dir) {
  Parser p;
  p.base_dir = base_dir;
  p.run(text);
  return p.s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  return parse_scenario(ss.str(), parent.empty() ? "." : parent.string());
}

std::string format_csv(std::span<const SimRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  char buf[512];
  for (const SimRecord& r : records) {
    const int n = std::snprintf(buf, sizeof(buf),
                                "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d,%d,%d\n",
                                r.time, r.torque_est, r.torque_plant, r.torque_ref,
                                r.flux_mag_est, r.flux_ref, r.flux_alpha, r.flux_beta,
                                r.speed_mech, r.sector, r.sw.sa, r.sw.sb, r.sw.sc);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

void emit_csv(std::span<const SimRecord> records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::string text = format_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

ComparisonResult compare_controllers(const Scenario& scenario, ControllerKind first,
                                     ControllerKind second) {
  auto variant = [&scenario](ControllerKind kind) {
    Scenario s = scenario;
    s.controller = kind;
    try {
      return run(s);
    } catch (const InstabilityError& e) {
      throw InstabilityError(std::string(short_name(kind)) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(short_name(kind)) + ": " + e.what());
    }
  };

  ComparisonResult out;
  out.first = first;
  out.second = second;
  auto pending = std::async(std::launch::async, variant, second);
  out.first_result = variant(first);
  out.second_result = pending.get();

  const auto& a = out.first_result.segments;
  const auto& b = out.second_result.segments;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    out.segments.push_back({a[i].segment, compare(a[i].report, b[i].report)});
  }
  return out;
}

namespace {

void append_report_line(std::string& out, const char* label, const RippleReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "  %s: torque_mean=%.6g ripple_rms=%.6g ripple_p2p=%.6g "
                "flux_ref_mean=%.6g flux_rms_error=%.6g samples=%zu\n",
                label, r.torque_mean, r.torque_ripple_rms, r.torque_ripple_peak_to_peak,
                r.flux_ref_mean, r.flux_mag_rms_error, r.samples);
  out += buf;
}

}  // namespace

std::string format_report(const ComparisonResult& result, const std::string& name) {
  std::string out = "dtcsim comparison report\n";
  out += "scenario: " + name + "\n";
  out += std::string("baseline: ") + short_name(result.first) + "\n";
  out += std::string("candidate: ") + short_name(result.second) + "\n";
  out += "segments: " + std::to_string(result.segments.size()) + "\n";
  char buf[256];
  int index = 0;
  for (const SegmentComparison& sc : result.segments) {
    std::snprintf(buf, sizeof(buf), "\nsegment %d: window=[%.6g, %.6g] s load=%.6g N m\n",
                  ++index, sc.segment.t0, sc.segment.t1, sc.segment.load);
    out += buf;
    append_report_line(out, short_name(result.first), sc.summary.conventional);
    append_report_line(out, short_name(result.second), sc.summary.fuzzy);
    if (sc.summary.ratio_defined) {
      std::snprintf(buf, sizeof(buf), "  ratio=%.6g reduction_percent=%.4g\n", sc.summary.ratio,
                    sc.summary.reduction_percent);
      out += buf;
    } else {
      out += "  ratio=undefined reduction_percent=undefined\n";
    }
  }
  return out;
}

CompareOutputs compare_command(const Scenario& scenario, const std::string& output_dir,
                               const std::string& name, ComparisonResult* result) {
  ComparisonResult r = compare_controllers(scenario);
  const std::filesystem::path dir(output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + output_dir + "': " + ec.message());

  CompareOutputs paths;
  paths.first_csv = (dir / (name + "_" + short_name(r.first) + ".csv")).string();
  paths.second_csv = (dir / (name + "_" + short_name(r.second) + ".csv")).string();
  paths.report = (dir / (name + "_report.txt")).string();
  emit_csv(r.first_result.records, paths.first_csv);
  emit_csv(r.second_result.records, paths.second_csv);

  const std::string text = format_report(r, name);
  std::ofstream out(paths.report, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + paths.report + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + paths.report + "' failed");
  if (result) *result = std::move(r);
  return paths;
}

}  // namespace dtcsim
