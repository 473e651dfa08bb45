#pragma once

#include <iosfwd>
#include <string>

#include "collapse/config.hpp"

namespace collapse {

struct RunOptions {
  std::string out_path;         // empty: write to the out stream
  std::string trace_dir;        // empty: no trajectory/ledger files
  std::string format = "json";  // "json" | "csv" (plot-ready payload)
  int threads = 0;              // > 0 overrides the config's thread count
};

// Executes the configured command. The JSON summary (or, with format "csv",
// the plot-ready CSV payload) goes to out_path or the out stream; warnings
// and error diagnostics go to err. Returns the process exit code: 0 success,
// 2 validation error, 3 non-convergence, 4 numerical failure.
int run_command(const ExperimentConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace collapse
