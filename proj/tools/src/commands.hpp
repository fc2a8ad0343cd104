#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace noma::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

/// Human-readable per-tier coverage report for both schemes.
std::string analytic_report(const ScenarioConfig& config);
/// CSV rows for the configured sweep (or the single configured point).
std::string simulation_csv(const ScenarioConfig& config, bool simulate = true);
/// Optimum table followed by the scanned (beta, average coverage) grid.
std::string optimize_beta_report(const ScenarioConfig& config);

/// Full command line, args[0] being the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noma::cli
