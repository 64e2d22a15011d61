#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tsperiod/compression.hpp"
#include "tsperiod/io/csv.hpp"
#include "tsperiod/periodicity.hpp"

namespace tsperiod::io {

struct PipelineConfig {
  std::size_t workers = 1;
  std::size_t partitions = 0;  ///< 0 means workers * 4
  double window = 0.0;         ///< 0 disables windowing
  double slide = 0.0;          ///< 0 means tumbling (slide = window)
  double receive_ms = 1000.0;
  std::size_t effective_partitions() const noexcept { return partitions ? partitions : workers * 4; }
};

struct IoConfig {
  std::string input;
  std::string output = "tsperiod";
  std::string model;
  std::string format = "json";
  CsvSchema schema;
  std::string replay;
  int port = 0;
  double rate = 0.0;
  std::size_t max_clients = 1;
};

struct EvaluationConfig {
  double holdout = 0.2;  ///< trailing fraction held out for evaluate
  std::size_t bins = 8;
};

struct BenchConfig {
  std::vector<std::string> sweeps;
  bool timing = false;
  std::size_t timing_points = 1000000;
};

struct RunConfig {
  CompressionConfig compression;
  DetectionConfig detection;
  std::optional<double> unit;
  PipelineConfig pipeline;
  IoConfig io;
  EvaluationConfig evaluation;
  BenchConfig bench;
  std::uint64_t seed = 42;

  void validate() const;
  /// Detection settings with the run seed applied.
  DetectionConfig detection_config() const;
};

void apply_json(RunConfig& cfg, const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
/// Accepts flat keys ("delta") and sectioned ones ("compression.delta").
void set_option(RunConfig& cfg, std::string_view key, std::string_view value);
nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace tsperiod::io
