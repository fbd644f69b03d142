#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ricci/flow.hpp"

namespace ricci::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kNumericalFailure = 2,
  kConditionFailure = 3,
};

struct RunConfig {
  std::string command;
  std::optional<std::string> graph_file;
  std::optional<std::string> builtin;
  std::string target = "average";  // zero | average | path to an edge-value file
  IntegratorOptions integrator;
  double report_tol = 1e-3;        // residual bound for converged=true in flow reports
  std::optional<std::string> report_path;
  std::optional<std::string> csv_path;
  std::optional<std::string> plot_path;
  std::optional<double> stratify;
  bool verify = false;
  bool random_init = false;
  std::uint64_t seed = 0;
};

struct CommandResult {
  nlohmann::json report;
  int exit_code = kSuccess;
};

CommandResult cmd_info(const RunConfig& cfg);
CommandResult cmd_curvature(const RunConfig& cfg);
CommandResult cmd_flow(const RunConfig& cfg);
CommandResult cmd_uniformize(const RunConfig& cfg);

// Parses argv, dispatches, writes the report (to cfg.report_path or out) and
// returns the process exit code. Errors go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ricci::cli
