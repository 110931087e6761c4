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

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "dtcsim/errors.h"
#include "dtcsim/scenario_io.h"
#include "dtcsim/sim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInstability = 2;

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void print_segments(const std::vector<dtcsim::SegmentReport>& segments) {
  for (const auto& s : segments) {
    std::printf("segment [%.6g, %.6g] s load=%.6g N m: torque_mean=%.6g ripple_rms=%.6g "
                "ripple_p2p=%.6g flux_ref_mean=%.6g\n",
                s.segment.t0, s.segment.t1, s.segment.load, s.report.torque_mean,
                s.report.torque_ripple_rms, s.report.torque_ripple_peak_to_peak,
                s.report.flux_ref_mean);
  }
}

int do_run(const dtcsim::RunConfig& cfg, bool stride_given) {
  dtcsim::Scenario scenario = dtcsim::load_scenario(cfg.scenario_path);
  if (stride_given) scenario.record_stride = cfg.stride;
  scenario.validate();
  if (scenario.effective_stride() != scenario.record_stride) {
    std::fprintf(stderr, "note: stride raised to %d to respect record.max_rows\n",
                 scenario.effective_stride());
  }
  const dtcsim::SimResult result = dtcsim::run(scenario);
  std::filesystem::create_directories(cfg.output_dir);
  const std::string csv =
      (std::filesystem::path(cfg.output_dir) / (stem_of(cfg.scenario_path) + ".csv")).string();
  dtcsim::emit_csv(result.records, csv);
  std::printf("wrote %s (%zu records, controller %s)\n", csv.c_str(), result.records.size(),
              dtcsim::to_string(scenario.controller));
  print_segments(result.segments);
  return kExitOk;
}

int do_compare(const dtcsim::RunConfig& cfg) {
  const dtcsim::Scenario scenario = dtcsim::load_scenario(cfg.scenario_path);
  const std::string name = stem_of(cfg.scenario_path);
  const dtcsim::CompareOutputs out = dtcsim::compare_command(scenario, cfg.output_dir, name);
  std::printf("wrote %s\nwrote %s\nwrote %s\n\n", out.first_csv.c_str(), out.second_csv.c_str(),
              out.report.c_str());
  std::ifstream report(out.report);
  std::cout << report.rdbuf();
  return kExitOk;
}

int do_validate(const dtcsim::RunConfig& cfg) {
  const dtcsim::Scenario scenario = dtcsim::load_scenario(cfg.scenario_path);
  std::printf("%s: ok (controller %s, mode %s, %ld steps)\n", cfg.scenario_path.c_str(),
              dtcsim::to_string(scenario.controller), dtcsim::to_string(scenario.mode),
              scenario.steps());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct torque control simulator with fuzzy flux-reference optimization"};
  app.require_subcommand(1);

  dtcsim::RunConfig cfg;

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write its CSV");
  run_cmd->add_option("scenario", cfg.scenario_path, "Scenario file")->required();
  run_cmd->add_option("-o,--output", cfg.output_dir, "Output directory");
  auto* stride_opt =
      run_cmd->add_option("--stride", cfg.stride, "Record every Nth control period");

  auto* compare_cmd =
      app.add_subcommand("compare", "Run conventional and fuzzy_optimized and report ripple");
  compare_cmd->add_option("scenario", cfg.scenario_path, "Scenario file")->required();
  compare_cmd->add_option("-o,--output", cfg.output_dir, "Output directory");

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario");
  validate_cmd->add_option("scenario", cfg.scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    cfg.validate();
    if (*run_cmd) return do_run(cfg, stride_opt->count() > 0);
    if (*compare_cmd) return do_compare(cfg);
    return do_validate(cfg);
  } catch (const dtcsim::ValidationError& e) {
    std::fprintf(stderr, "%s: %s\n", cfg.scenario_path.c_str(), e.what());
    return kExitValidation;
  } catch (const dtcsim::InstabilityError& e) {
    std::fprintf(stderr, "instability: %s\n", e.what());
    return kExitInstability;
  } catch (const dtcsim::ZeroFluxError& e) {
    std::fprintf(stderr, "instability: %s\n", e.what());
    return kExitInstability;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
}
