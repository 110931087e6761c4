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

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dtcsim/dtc_core.h"
#include "dtcsim/errors.h"
#include "dtcsim/estimator.h"
#include "dtcsim/frames.h"
#include "dtcsim/fuzzy.h"
#include "dtcsim/metrics.h"
#include "dtcsim/scenario_io.h"
#include "dtcsim/sim.h"

namespace py = pybind11;
using namespace dtcsim;

namespace {

py::array_t<double> column(const std::vector<SimRecord>& records, double SimRecord::*field) {
  py::array_t<double> out(static_cast<py::ssize_t>(records.size()));
  auto v = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < records.size(); ++i) v(i) = records[i].*field;
  return out;
}

py::dict columns(const std::vector<SimRecord>& records) {
  py::dict d;
  d["time"] = column(records, &SimRecord::time);
  d["torque_est"] = column(records, &SimRecord::torque_est);
  d["torque_plant"] = column(records, &SimRecord::torque_plant);
  d["torque_ref"] = column(records, &SimRecord::torque_ref);
  d["flux_mag_est"] = column(records, &SimRecord::flux_mag_est);
  d["flux_ref"] = column(records, &SimRecord::flux_ref);
  d["flux_alpha"] = column(records, &SimRecord::flux_alpha);
  d["flux_beta"] = column(records, &SimRecord::flux_beta);
  d["speed_mech"] = column(records, &SimRecord::speed_mech);
  py::array_t<int> sector(static_cast<py::ssize_t>(records.size()));
  py::array_t<std::uint8_t> sw({static_cast<py::ssize_t>(records.size()), py::ssize_t{3}});
  auto s = sector.mutable_unchecked<1>();
  auto w = sw.mutable_unchecked<2>();
  for (std::size_t i = 0; i < records.size(); ++i) {
    s(i) = records[i].sector;
    w(i, 0) = records[i].sw.sa;
    w(i, 1) = records[i].sw.sb;
    w(i, 2) = records[i].sw.sc;
  }
  d["sector"] = sector;
  d["switch"] = sw;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dtcsim, m) {
  m.doc() = "Direct torque control simulator with fuzzy flux-reference optimization";

  auto validation_error =
      py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ZeroFluxError>(m, "ZeroFluxError", PyExc_ArithmeticError);
  (void)validation_error;

  py::class_<PhaseTriple>(m, "PhaseTriple")
      .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"))
      .def_readwrite("a", &PhaseTriple::a)
      .def_readwrite("b", &PhaseTriple::b)
      .def_readwrite("c", &PhaseTriple::c)
      .def("__repr__", [](const PhaseTriple& p) {
        return py::str("PhaseTriple({}, {}, {})").format(p.a, p.b, p.c);
      });

  py::class_<AlphaBetaZero>(m, "AlphaBetaZero")
      .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("beta"),
           py::arg("zero") = 0.0)
      .def_readwrite("alpha", &AlphaBetaZero::alpha)
      .def_readwrite("beta", &AlphaBetaZero::beta)
      .def_readwrite("zero", &AlphaBetaZero::zero)
      .def("__repr__", [](const AlphaBetaZero& v) {
        return py::str("AlphaBetaZero({}, {}, {})").format(v.alpha, v.beta, v.zero);
      });

  py::class_<SpaceVector>(m, "SpaceVector")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
      .def_readwrite("alpha", &SpaceVector::alpha)
      .def_readwrite("beta", &SpaceVector::beta)
      .def("norm", &SpaceVector::norm);

  m.def("clarke", &clarke, py::arg("phases"));
  m.def("inverse_clarke", &inverse_clarke, py::arg("alpha_beta_zero"));

  py::class_<SwitchState>(m, "SwitchState")
      .def(py::init([](int a, int b, int c) {
             return SwitchState{std::uint8_t(a != 0), std::uint8_t(b != 0), std::uint8_t(c != 0)};
           }),
           py::arg("sa"), py::arg("sb"), py::arg("sc"))
      .def_property_readonly("sa", [](const SwitchState& s) { return int(s.sa); })
      .def_property_readonly("sb", [](const SwitchState& s) { return int(s.sb); })
      .def_property_readonly("sc", [](const SwitchState& s) { return int(s.sc); })
      .def("as_tuple",
           [](const SwitchState& s) { return py::make_tuple(int(s.sa), int(s.sb), int(s.sc)); })
      .def(py::self == py::self);

  m.def("inverter_phase_voltages", &inverter_phase_voltages, py::arg("switch"), py::arg("vdc"));
  m.def("select_vector", &select_vector, py::arg("flux_cmd"), py::arg("torque_cmd"),
        py::arg("sector"), py::arg("previous") = kZeroVectorLow);
  m.def("flux_comparator", &flux_comparator, py::arg("error"), py::arg("band"), py::arg("prev"));
  m.def("torque_comparator", &torque_comparator, py::arg("error"), py::arg("band"),
        py::arg("prev"));
  m.def("flux_sector", &flux_sector, py::arg("flux"));
  m.def("estimate_torque", &estimate_torque, py::arg("flux"), py::arg("current"),
        py::arg("pole_pairs"));

  py::class_<MotorParams>(m, "MotorParams")
      .def(py::init<>())
      .def_readwrite("rs", &MotorParams::rs)
      .def_readwrite("rr", &MotorParams::rr)
      .def_readwrite("ls", &MotorParams::ls)
      .def_readwrite("lr", &MotorParams::lr)
      .def_readwrite("lm", &MotorParams::lm)
      .def_readwrite("pole_pairs", &MotorParams::pole_pairs)
      .def_readwrite("inertia", &MotorParams::inertia)
      .def_readwrite("friction", &MotorParams::friction)
      .def_readwrite("rated_flux", &MotorParams::rated_flux)
      .def_readwrite("rated_torque", &MotorParams::rated_torque)
      .def_readwrite("vdc", &MotorParams::vdc)
      .def("validate", &MotorParams::validate);

  py::class_<fuzzy::OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_static("defaults_for", &fuzzy::OptimizerConfig::defaults_for, py::arg("motor"),
                  py::arg("control_dt"))
      .def_readwrite("torque_error_scale", &fuzzy::OptimizerConfig::torque_error_scale)
      .def_readwrite("delta_max", &fuzzy::OptimizerConfig::delta_max)
      .def_readwrite("flux_min", &fuzzy::OptimizerConfig::flux_min)
      .def_readwrite("flux_max", &fuzzy::OptimizerConfig::flux_max)
      .def_readwrite("update_period", &fuzzy::OptimizerConfig::update_period);

  py::class_<fuzzy::Engine>(m, "FuzzyEngine")
      .def(py::init([]() { return fuzzy::Engine(fuzzy::default_definition()); }))
      .def(py::init([](const std::string& text) {
             return fuzzy::Engine(fuzzy::parse_definition(text));
           }),
           py::arg("definition_text"))
      .def("rule_strengths", &fuzzy::Engine::rule_strengths, py::arg("torque_error_norm"),
           py::arg("flux_level_norm"))
      .def(
          "infer",
          [](const fuzzy::Engine& e, double te, double fl, int n) {
            const fuzzy::AggregateSet a = e.infer(te, fl, n);
            return py::make_tuple(py::array(py::cast(a.x)), py::array(py::cast(a.mu)));
          },
          py::arg("torque_error_norm"), py::arg("flux_level_norm"),
          py::arg("grid_points") = fuzzy::kDefaultGridPoints)
      .def(
          "crisp",
          [](const fuzzy::Engine& e, double te, double fl, int n) {
            return fuzzy::defuzzify(e.infer(te, fl, n));
          },
          py::arg("torque_error_norm"), py::arg("flux_level_norm"),
          py::arg("grid_points") = fuzzy::kDefaultGridPoints)
      .def("rules", [](const fuzzy::Engine& e) {
        py::list out;
        for (const fuzzy::Rule& r : e.definition().rule_base.rules) {
          out.append(py::make_tuple(r.torque_error, r.flux_level, r.output));
        }
        return out;
      });

  m.def("optimizer_step", &fuzzy::optimizer_step, py::arg("engine"), py::arg("config"),
        py::arg("torque_error"), py::arg("flux_ref"));
  m.def("default_rules_text",
        []() { return fuzzy::format_definition(fuzzy::default_definition()); });

  py::enum_<ControllerKind>(m, "ControllerKind")
      .value("conventional", ControllerKind::kConventional)
      .value("fuzzy_optimized", ControllerKind::kFuzzyOptimized);
  py::enum_<ReferenceMode>(m, "ReferenceMode")
      .value("torque", ReferenceMode::kTorque)
      .value("speed", ReferenceMode::kSpeed);

  py::class_<Schedule>(m, "Schedule")
      .def(py::init([](const std::vector<std::pair<double, double>>& steps) {
             std::vector<ScheduleStep> s;
             for (const auto& [t, v] : steps) s.push_back({t, v});
             return Schedule(std::move(s));
           }),
           py::arg("steps") = std::vector<std::pair<double, double>>{})
      .def("at", &Schedule::at, py::arg("t"))
      .def("steps", [](const Schedule& s) {
        std::vector<std::pair<double, double>> out;
        for (const ScheduleStep& st : s.steps()) out.emplace_back(st.time, st.value);
        return out;
      });

  py::class_<Scenario>(m, "Scenario")
      .def(py::init(&Scenario::defaults))
      .def_static("parse", &parse_scenario, py::arg("text"), py::arg("base_dir") = ".")
      .def_static("from_file", &load_scenario, py::arg("path"))
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("dt", &Scenario::dt)
      .def_readwrite("substeps", &Scenario::substeps)
      .def_readwrite("controller", &Scenario::controller)
      .def_readwrite("mode", &Scenario::mode)
      .def_readwrite("torque_ref", &Scenario::torque_ref)
      .def_readwrite("speed_ref", &Scenario::speed_ref)
      .def_readwrite("load", &Scenario::load)
      .def_readwrite("initial_flux_ref", &Scenario::initial_flux_ref)
      .def_readwrite("startup_time", &Scenario::startup_time)
      .def_readwrite("optimizer", &Scenario::optimizer)
      .def_readwrite("motor", &Scenario::motor)
      .def_readwrite("record_stride", &Scenario::record_stride)
      .def_property(
          "flux_band", [](const Scenario& s) { return s.hysteresis.flux_band; },
          [](Scenario& s, double v) { s.hysteresis.flux_band = v; })
      .def_property(
          "torque_band", [](const Scenario& s) { return s.hysteresis.torque_band; },
          [](Scenario& s, double v) { s.hysteresis.torque_band = v; })
      .def("validate", &Scenario::validate)
      .def("steps", &Scenario::steps);

  py::class_<RippleReport>(m, "RippleReport")
      .def_readonly("t0", &RippleReport::t0)
      .def_readonly("t1", &RippleReport::t1)
      .def_readonly("torque_mean", &RippleReport::torque_mean)
      .def_readonly("torque_ripple_rms", &RippleReport::torque_ripple_rms)
      .def_readonly("torque_ripple_peak_to_peak", &RippleReport::torque_ripple_peak_to_peak)
      .def_readonly("flux_ref_mean", &RippleReport::flux_ref_mean)
      .def_readonly("flux_mag_rms_error", &RippleReport::flux_mag_rms_error)
      .def_readonly("samples", &RippleReport::samples);

  py::class_<ComparisonSummary>(m, "ComparisonSummary")
      .def_readonly("conventional", &ComparisonSummary::conventional)
      .def_readonly("fuzzy", &ComparisonSummary::fuzzy)
      .def_readonly("ratio_defined", &ComparisonSummary::ratio_defined)
      .def_readonly("ratio", &ComparisonSummary::ratio)
      .def_readonly("reduction_percent", &ComparisonSummary::reduction_percent);

  m.def(
      "ripple",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> torque, double t0,
         double t1) {
        const auto v = torque.unchecked<1>();
        std::vector<double> samples(v.data(0), v.data(0) + v.shape(0));
        return ripple_of(samples, t0, t1);
      },
      py::arg("torque"), py::arg("t0") = 0.0, py::arg("t1") = 1.0);
  m.def("compare", &compare, py::arg("conventional"), py::arg("fuzzy"));

  py::class_<SimResult>(m, "SimResult")
      .def("columns", [](const SimResult& r) { return columns(r.records); })
      .def("__len__", [](const SimResult& r) { return r.records.size(); })
      .def("csv", [](const SimResult& r) { return format_csv(r.records); })
      .def("write_csv", [](const SimResult& r, const std::string& path) {
        emit_csv(r.records, path);
      })
      .def_property_readonly("final_flux_ref", [](const SimResult& r) { return r.final_flux_ref; })
      .def_property_readonly("final_speed",
                             [](const SimResult& r) { return r.final_state.speed_mech; })
      .def_property_readonly("final_stator_flux",
                             [](const SimResult& r) { return r.final_state.stator_flux; })
      .def_property_readonly("segments", [](const SimResult& r) {
        py::list out;
        for (const SegmentReport& s : r.segments) {
          out.append(py::make_tuple(s.segment.t0, s.segment.t1, s.segment.load, s.report));
        }
        return out;
      });

  m.def(
      "run",
      [](const Scenario& s) {
        py::gil_scoped_release release;
        return run(s);
      },
      py::arg("scenario"));

  m.def(
      "compare_controllers",
      [](const Scenario& s) {
        ComparisonResult c;
        {
          py::gil_scoped_release release;
          c = compare_controllers(s);
        }
        py::list out;
        for (const SegmentComparison& seg : c.segments) {
          out.append(py::make_tuple(seg.segment.t0, seg.segment.t1, seg.segment.load,
                                    seg.summary));
        }
        return py::make_tuple(out, format_report(c, "python"));
      },
      py::arg("scenario"));

  m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("base_dir") = ".");
  m.def("load_scenario", &load_scenario, py::arg("path"));

  m.attr("CSV_HEADER") = kCsvHeader;
}
