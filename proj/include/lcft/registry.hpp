// Named experiments and the acceptance suite: the single reproducible entry
// point for everything the toolkit verifies.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lcft/config.hpp"
#include "lcft/report.hpp"

namespace lcft {

struct ExperimentOutcome {
  int exit_code = 0; // 0 pass, 1 fail, 2 unknown experiment
  bool pass = false;
  std::string summary;
};

std::vector<std::string> experiment_names();

// runs the named experiment from the config, writing CSV + JSON + manifest
// under cfg.output_dir (overridable by the LCFT_OUTPUT_DIR environment
// variable); unknown names exit 2 with a listing in the summary
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// the ten acceptance criteria, in order; emits one pass/fail line per
// criterion on stdout and writes per-criterion artifacts
std::vector<CriterionResult> run_acceptance_suite(const ExperimentConfig& cfg);

}  // namespace lcft
