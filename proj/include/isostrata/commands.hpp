#pragma once

// Command dispatch for the isostrata tool. Every command produces a JSON
// report with a fixed key order; commands that build a catalog also produce
// the per-sample CSV.

#include <optional>
#include <string>

#include <json.hpp>

#include "isostrata/config.hpp"

namespace isostrata {

struct CommandParams {
  std::string command;
  int samples = 1000;
  /// Point for flow, classify and split; empty means not given.
  std::optional<Vec> at;
  /// Open stratum to restrict to when there is no dense stratum.
  std::optional<int> stratum;
  int fibers = 20;
};

struct CommandResult {
  /// 0 all checks pass, 1 a check failed, 2 error.
  int exit_code = 0;
  nlohmann::ordered_json report;
  /// Empty when the command produces no samples.
  std::string csv;
};

const std::vector<std::string>& command_names();

/// "origin" or comma-separated reals. Throws ParseError.
Vec parse_point(const std::string& text, int dim);

/// Runs one command. Errors are caught and reported with exit code 2.
CommandResult run_command(const RunConfig& cfg, const CommandParams& params);

/// Writes report.json (and samples.csv when present) into dir.
void write_outputs(const CommandResult& result, const std::string& dir);

}  // namespace isostrata
