#pragma once

#include <string>
#include <vector>

#include "nmgauge/config.hpp"
#include "nmgauge/report.hpp"

namespace nmgauge {

/// Subcommands: verify-gauge, verify-identities, bounds, susceptibility, sweep.
const std::vector<std::string>& subcommands();

struct SuiteResult {
  std::vector<ReportRow> rows;
  bool all_passed() const;
};

/// Runs one suite in-process. Throws ConfigError/BudgetError on bad input.
SuiteResult run_suite(const ExperimentConfig& config, const std::string& subcommand,
                      Execution exec = Execution::parallel);

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2 };

}  // namespace nmgauge
