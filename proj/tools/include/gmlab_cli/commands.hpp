#pragma once

#include <iosfwd>
#include <vector>

#include "gmlab/verifier.hpp"
#include "gmlab_cli/config.hpp"

namespace gmlab::cli {

enum ExitCode : int { kOk = 0, kChecksFailed = 1, kInvalidInput = 2, kNoConvergence = 3 };

/// Maps an error kind onto the exit code contract.
int exit_code_for(ErrorKind kind);

int cmd_thresholds(const ExperimentConfig& cfg, std::ostream& out);
int cmd_steady(const ExperimentConfig& cfg, std::ostream& out);
int cmd_solve(const ExperimentConfig& cfg, std::ostream& out);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out);
int cmd_bifurcations(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);

/// Cells in sigma-major, then d1, then d2 order.
std::vector<ScanCell> run_sweep(const ExperimentConfig& cfg);
void write_sweep_csv(std::ostream& os, const std::vector<ScanCell>& cells);
std::string sweep_to_json(const std::vector<ScanCell>& cells);

/// Parses argv (subcommand plus flags, --config file first, flags override)
/// and dispatches. Errors are printed to `err`; the return value is the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmlab::cli
