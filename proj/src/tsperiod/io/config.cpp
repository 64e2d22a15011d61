#include "tsperiod/io/config.hpp"

#include <charconv>
#include <fstream>

#include "tsperiod/error.hpp"

namespace tsperiod::io {
namespace {

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw Error(ErrorCode::InvalidConfig, "option '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw Error(ErrorCode::InvalidConfig,
                "option '" + std::string(key) + "' expects a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on" || v.empty()) return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::InvalidConfig, "option '" + std::string(key) + "' expects a boolean");
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  throw Error(ErrorCode::InvalidConfig, "config values must be scalars: " + v.dump());
}

}  // namespace

void RunConfig::validate() const {
  compression.validate();
  detection_config().validate();
  if (unit && !(*unit > 0.0)) throw Error(ErrorCode::InvalidConfig, "unit must be positive");
  if (pipeline.workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be at least 1");
  if (pipeline.window < 0.0 || pipeline.slide < 0.0) throw Error(ErrorCode::InvalidConfig, "window and slide must be non-negative");
  if (pipeline.window > 0.0 && pipeline.slide > pipeline.window)
    throw Error(ErrorCode::InvalidConfig, "slide must not exceed window");
  if (!(pipeline.receive_ms > 0.0)) throw Error(ErrorCode::InvalidConfig, "receive_ms must be positive");
  if (io.format != "json" && io.format != "csv") throw Error(ErrorCode::InvalidConfig, "format must be json or csv");
  if (!(evaluation.holdout > 0.0 && evaluation.holdout < 1.0))
    throw Error(ErrorCode::InvalidConfig, "holdout must lie in (0,1)");
  if (evaluation.bins < 1) throw Error(ErrorCode::InvalidConfig, "bins must be at least 1");
  if (io.rate < 0.0) throw Error(ErrorCode::InvalidConfig, "rate must be non-negative");
}

DetectionConfig RunConfig::detection_config() const {
  DetectionConfig d = detection;
  d.seed = seed;
  d.compression = compression;
  return d;
}

void set_option(RunConfig& cfg, std::string_view key, std::string_view value) {
  if (const auto dot = key.rfind('.'); dot != std::string_view::npos) key = key.substr(dot + 1);
  auto& d = cfg.detection;
  auto& p = cfg.pipeline;
  auto& io = cfg.io;
  if (key == "delta") cfg.compression.delta = to_double(key, value);
  else if (key == "epsilon") cfg.compression.epsilon = to_double(key, value);
  else if (key == "mu") d.mu = to_uint(key, value);
  else if (key == "phi") d.phi = to_double(key, value);
  else if (key == "theta_gate") {
    if (value.empty() || value == "null" || value == "auto") d.theta_gate.reset();
    else d.theta_gate = to_double(key, value);
  }
  else if (key == "min_periods") d.min_periods = to_uint(key, value);
  else if (key == "max_layers") d.max_layers = to_uint(key, value);
  else if (key == "permutations") d.permutations = to_uint(key, value);
  else if (key == "unit") {
    if (value.empty() || value == "null" || value == "auto") cfg.unit.reset();
    else cfg.unit = to_double(key, value);
  }
  else if (key == "workers") p.workers = to_uint(key, value);
  else if (key == "partitions") p.partitions = to_uint(key, value);
  else if (key == "window") p.window = to_double(key, value);
  else if (key == "slide") p.slide = to_double(key, value);
  else if (key == "receive_ms") p.receive_ms = to_double(key, value);
  else if (key == "seed") cfg.seed = to_uint(key, value);
  else if (key == "format") io.format = std::string(value);
  else if (key == "input") io.input = std::string(value);
  else if (key == "output") io.output = std::string(value);
  else if (key == "model") io.model = std::string(value);
  else if (key == "time_column") io.schema.time_column = std::string(value);
  else if (key == "value_column") io.schema.value_column = std::string(value);
  else if (key == "tick_seconds") io.schema.tick_seconds = to_double(key, value);
  else if (key == "cycle_hint") {
    if (value.empty() || value == "0" || value == "null") io.schema.cycle_hint.reset();
    else io.schema.cycle_hint = to_uint(key, value);
  }
  else if (key == "replay") io.replay = std::string(value);
  else if (key == "port") io.port = static_cast<int>(to_uint(key, value));
  else if (key == "rate") io.rate = to_double(key, value);
  else if (key == "max_clients") io.max_clients = to_uint(key, value);
  else if (key == "holdout") cfg.evaluation.holdout = to_double(key, value);
  else if (key == "bins") cfg.evaluation.bins = to_uint(key, value);
  else if (key == "sweep") cfg.bench.sweeps.emplace_back(value);
  else if (key == "timing") cfg.bench.timing = to_bool(key, value);
  else if (key == "timing_points") cfg.bench.timing_points = to_uint(key, value);
  else throw Error(ErrorCode::InvalidConfig, "unknown option '" + std::string(key) + "'");
}

void apply_json(RunConfig& cfg, const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "config document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      for (const auto& [sub, v] : value.items()) {
        if (v.is_null()) set_option(cfg, sub, "null");
        else if (v.is_array()) for (const auto& e : v) set_option(cfg, sub, scalar_text(e));
        else set_option(cfg, sub, scalar_text(v));
      }
    } else if (value.is_array()) {
      for (const auto& e : value) set_option(cfg, key, scalar_text(e));
    } else if (value.is_null()) {
      set_option(cfg, key, "null");
    } else {
      set_option(cfg, key, scalar_text(value));
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  RunConfig cfg;
  try {
    apply_json(cfg, nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "config '" + path + "': " + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["compression"] = {{"delta", cfg.compression.delta}, {"epsilon", cfg.compression.epsilon}};
  const auto& d = cfg.detection;
  j["detection"] = {{"mu", d.mu},
                    {"phi", d.phi},
                    {"theta_gate", d.theta_gate ? nlohmann::ordered_json(*d.theta_gate) : nlohmann::ordered_json()},
                    {"min_periods", d.min_periods},
                    {"max_layers", d.max_layers},
                    {"permutations", d.permutations}};
  j["prediction"] = {{"unit", cfg.unit ? nlohmann::ordered_json(*cfg.unit) : nlohmann::ordered_json()}};
  const auto& p = cfg.pipeline;
  j["pipeline"] = {{"workers", p.workers},
                   {"partitions", p.partitions},
                   {"window", p.window},
                   {"slide", p.slide},
                   {"receive_ms", p.receive_ms}};
  const auto& io = cfg.io;
  j["io"] = {{"input", io.input},
             {"output", io.output},
             {"model", io.model},
             {"format", io.format},
             {"time_column", io.schema.time_column},
             {"value_column", io.schema.value_column},
             {"tick_seconds", io.schema.tick_seconds},
             {"cycle_hint", io.schema.cycle_hint ? nlohmann::ordered_json(*io.schema.cycle_hint) : nlohmann::ordered_json()},
             {"replay", io.replay},
             {"port", io.port},
             {"rate", io.rate},
             {"max_clients", io.max_clients}};
  j["evaluation"] = {{"holdout", cfg.evaluation.holdout}, {"bins", cfg.evaluation.bins}};
  j["bench"] = {{"sweep", cfg.bench.sweeps}, {"timing", cfg.bench.timing}, {"timing_points", cfg.bench.timing_points}};
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace tsperiod::io
