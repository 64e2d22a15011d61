// Command-line front end over the tsperiod C API.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsperiod/tsperiod.h"

namespace {

int report_error(tsp_status s, const std::string& command) {
  nlohmann::ordered_json err{{"error", tsp_status_name(s)}, {"message", tsp_last_error()}, {"command", command}};
  if (const size_t line = tsp_last_error_line()) err["line"] = line;
  std::cerr << err.dump() << std::endl;
  return 1;
}

struct Flag {
  const char* name;  // CLI flag without dashes
  const char* key;   // config key
  const char* help;
};

// Value flags shared by every subcommand; each maps onto a config key.
const Flag kFlags[] = {
    {"delta", "delta", "trend-similarity threshold"},
    {"epsilon", "epsilon", "time-similarity threshold"},
    {"mu", "mu", "similarity window length multiplier"},
    {"phi", "phi", "candidate length ratio"},
    {"theta-gate", "theta_gate", "fixed significance gate"},
    {"max-layers", "max_layers", "maximum number of periodic layers"},
    {"workers", "workers", "worker threads"},
    {"partitions", "partitions", "data partitions (default workers*4)"},
    {"window", "window", "stream window length in ticks"},
    {"slide", "slide", "stream slide in ticks"},
    {"receive-ms", "receive_ms", "stream flush interval in milliseconds"},
    {"unit", "unit", "time step of predicted points"},
    {"seed", "seed", "random seed"},
    {"format", "format", "metrics format: json or csv"},
    {"model", "model", "model file for predict"},
    {"port", "port", "TCP port for serve (0 picks a free port)"},
    {"replay", "replay", "replay a file of 't,x' lines instead of listening"},
    {"rate", "rate", "replay rate in lines per second (0 = unthrottled)"},
    {"max-clients", "max_clients", "connections accepted before serve exits"},
    {"holdout", "holdout", "trailing fraction held out by evaluate"},
    {"bins", "bins", "symbol bins for the confidence metric"},
    {"cycle-hint", "cycle_hint", "samples per cycle used to fill gaps"},
    {"tick-seconds", "tick_seconds", "seconds per tick for ISO timestamps"},
    {"time-column", "time_column", "timestamp column name"},
    {"value-column", "value_column", "value column name"},
    {"timing-points", "timing_points", "points in the bench timing series"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inflection-point compression and multi-layer period detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsp_version()));

  std::string config_path, output, input;
  std::vector<std::string> sweeps;
  bool timing = false;
  std::map<std::string, std::string> values;

  const std::pair<const char*, const char*> commands[] = {
      {"compress", "compress a series into its inflection-point abstraction"},
      {"detect", "detect multi-layer periodicity and save the model"},
      {"predict", "predict the next period from a saved model"},
      {"evaluate", "hold out the tail, predict it and report metrics"},
      {"bench", "sweep parameters and write result tables"},
      {"serve", "compress streamed points window by window"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", input, "input CSV (timestamp,value)");
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("-o,--output", output, "output path prefix");
    for (const auto& f : kFlags) sub->add_option(std::string("--") + f.name, values[f.key], f.help);
    if (std::string(name) == "bench") {
      sub->add_option("--sweep", sweeps, "name=start:stop:step or name=v1,v2 (repeatable)");
      sub->add_flag("--timing", timing, "also measure parallel speedup");
    }
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();

  tsp_config* cfg = nullptr;
  tsp_status s = tsp_config_create(&cfg);
  if (s != TSP_OK) return report_error(s, command);
  auto set = [&](const std::string& key, const std::string& value) {
    if (s == TSP_OK) s = tsp_config_set(cfg, key.c_str(), value.c_str());
  };

  if (!config_path.empty()) s = tsp_config_load_json(cfg, config_path.c_str());
  if (!input.empty()) set("input", input);
  if (!output.empty()) set("output", output);
  for (const auto& f : kFlags)
    if (sub->count(std::string("--") + f.name) > 0) set(f.key, values[f.key]);
  for (const auto& sw : sweeps) set("sweep", sw);
  if (timing) set("timing", "true");

  char* summary = nullptr;
  if (s == TSP_OK) s = tsp_run(command.c_str(), cfg, &summary);
  tsp_config_destroy(cfg);
  if (s != TSP_OK) return report_error(s, command);
  std::cout << summary << std::endl;
  tsp_free_string(summary);
  return 0;
}
