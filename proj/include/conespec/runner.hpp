#pragma once

#include <ostream>
#include <string>

#include "conespec/run_config.hpp"

namespace conespec {

struct RunOutcome {
  bool pass = false;
  std::string verdict;  // one-line summary
  std::string report_path, csv_path;

  int exit_code() const { return pass ? 0 : 1; }
};

// Executes the configured command and writes the report and CSV atomically
// (temp file + rename). Throws on configuration or numerical failures; a
// returned outcome always has artifacts on disk, pass or fail.
RunOutcome run_command(const RunConfig& cfg);

// Exception-to-exit-code wrapper: 0 pass, 1 verdict failure, 2 configuration
// error, 3 numerical failure. Prints the verdict or the errors.
int run_cli(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace conespec
