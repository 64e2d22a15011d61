#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tsperiod/io/config.hpp"

namespace tsperiod::io {

struct CommandResult {
  nlohmann::ordered_json summary;
  std::vector<std::string> files;
};

/// Runs one subcommand (compress, detect, predict, evaluate, bench, serve).
/// Throws tsperiod::Error on failure.
CommandResult run_command(std::string_view cmd, const RunConfig& cfg);

struct Sweep {
  std::string name;
  std::vector<double> values;
};

/// Parses "name=start:stop:step" (inclusive stop) or "name=v1,v2,...".
Sweep parse_sweep(std::string_view text);

}  // namespace tsperiod::io
