#pragma once

#include <string>
#include <vector>

#include "g2lab/config.hpp"
#include "g2lab/report.hpp"
#include "g2lab/space.hpp"
#include "g2lab/transport.hpp"

namespace g2lab {

struct SuiteRow {
  std::string suite;
  CheckReport report;
};

// Run the configured suites; rows come back sorted by (suite, name, key).
std::vector<SuiteRow> run_suites(const ExperimentConfig& cfg);

// Execute a config file end to end: writes report.csv and summary.txt under
// the output directory (G2LAB_OUT overrides). Exit code 0 if every check
// passed, 1 if any failed or a suite errored, 2 on config errors.
int run_config(const std::string& config_path);

// Write a gnuplot script next to the report (one chart block per suite).
// Returns the script path.
std::string emit_plots(const std::string& report_path);

// Helpers shared with tests and bindings.
ReversibleGenerator space_from_config(const ExperimentConfig& cfg);
DiscreteMeasure measure_from_spec(const std::string& spec, const ReversibleGenerator& gen);

} // namespace g2lab
