#include "tsperiod/io/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tsperiod/error.hpp"
#include "tsperiod/evaluation.hpp"
#include "tsperiod/io/csv.hpp"
#include "tsperiod/io/model_json.hpp"
#include "tsperiod/io/report.hpp"
#include "tsperiod/pipeline/parallel_compress.hpp"
#include "tsperiod/pipeline/stream.hpp"
#include "tsperiod/prediction.hpp"
#include "tsperiod/synthetic.hpp"

namespace tsperiod::io {
namespace {

using nlohmann::ordered_json;

TimeSeries load_input(const RunConfig& cfg) {
  if (cfg.io.input.empty()) throw Error(ErrorCode::InvalidConfig, "no input file given");
  return ingest_csv(cfg.io.input, cfg.io.schema);
}

pipeline::ParallelCompressResult compress_with(const TimeSeries& series, const RunConfig& cfg,
                                               pipeline::WorkerPool& pool) {
  return pipeline::parallel_compress(series, cfg.compression, pool, cfg.pipeline.effective_partitions());
}

ordered_json stages_json(const std::vector<pipeline::StageMetrics>& stages) {
  auto arr = ordered_json::array();
  for (const auto& s : stages) arr.push_back(ordered_json::parse(pipeline::to_json(s)));
  return arr;
}

ordered_json layers_summary(const MultiLayerModel& model) {
  auto arr = ordered_json::array();
  for (const auto& l : model.layers) {
    arr.push_back({{"layer", l.index},
                   {"periods", l.periods.size()},
                   {"L", l.period_length_knots},
                   {"L_time", l.period_length_time},
                   {"theta_max", l.theta_max},
                   {"gate", l.gate}});
  }
  return arr;
}

std::string fixed(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string model_path(const RunConfig& cfg) {
  return cfg.io.model.empty() ? cfg.io.output + ".model.json" : cfg.io.model;
}

double confidence_for(const TimeSeries& series, double period_time, std::size_t bins) {
  const double step = median_interval(series);
  const auto len = static_cast<std::size_t>(std::llround(period_time / step));
  const auto symbols = symbolize(series, bins);
  if (len < 1 || len > symbols.size()) return std::nan("");
  const auto pattern = dominant_pattern(symbols, len, 1);
  return confidence(symbols, pattern, 1);
}

CommandResult cmd_compress(const RunConfig& cfg) {
  const auto series = load_input(cfg);
  pipeline::WorkerPool pool(cfg.pipeline.workers);
  const auto r = compress_with(series, cfg, pool);
  CommandResult out;
  const std::string abs_path = cfg.io.output + ".abstract.csv";
  std::ostringstream csv;
  write_knots_csv(csv, r.abstraction.knots());
  write_text_file(abs_path, csv.str());
  MetricsReport m;
  m.r_dc = compression_ratio(series, r.abstraction);
  m.acc_de = extraction_accuracy(series, r.abstraction);
  m.confidence = std::nan("");
  m.rmse = std::nan("");
  m.meta = {{"command", "compress"},
            {"dataset", cfg.io.input},
            {"delta", format_double(cfg.compression.delta)},
            {"epsilon", format_double(cfg.compression.epsilon)}};
  out.files = {abs_path, emit_report(m, cfg.io.format, cfg.io.output)};
  out.summary = {{"command", "compress"},
                 {"n", series.size()},
                 {"m", r.abstraction.size()},
                 {"r_dc", m.r_dc},
                 {"acc_de", m.acc_de},
                 {"shuffle_bytes", r.shuffle_bytes},
                 {"stages", stages_json(r.stages)}};
  return out;
}

MultiLayerModel build_model(const TimeSeries& series, const RunConfig& cfg, pipeline::WorkerPool& pool,
                            std::vector<pipeline::StageMetrics>* stages = nullptr) {
  auto r = compress_with(series, cfg, pool);
  if (stages) *stages = r.stages;
  auto model = detect_multi_layer(r.abstraction, cfg.detection_config(), &pool);
  model.unit = cfg.unit ? *cfg.unit : median_interval(series);
  return model;
}

CommandResult cmd_detect(const RunConfig& cfg) {
  const auto series = load_input(cfg);
  pipeline::WorkerPool pool(cfg.pipeline.workers);
  std::vector<pipeline::StageMetrics> stages;
  const auto model = build_model(series, cfg, pool, &stages);
  const std::string path = cfg.io.output + ".model.json";
  save_model(model, path);
  CommandResult out;
  out.files = {path};
  out.summary = {{"command", "detect"},
                 {"knots", model.source.size()},
                 {"layers", layers_summary(model)},
                 {"stages", stages_json(stages)}};
  return out;
}

CommandResult cmd_predict(const RunConfig& cfg) {
  const std::string path = model_path(cfg);
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::MissingModel,
                "no periodic model at '" + path + "'; run `tsperiod detect` on the input first (or pass --model)");
  const auto model = load_model(path);
  const double unit = cfg.unit ? *cfg.unit : model.unit;
  const auto r = predict_next_period(model, unit);
  CommandResult out;
  out.files = emit_report(r, cfg.io.output);
  out.summary = {{"command", "predict"},
                 {"model", path},
                 {"horizon", {r.horizon_start, r.horizon_end}},
                 {"knots", r.predicted_inflections.size()},
                 {"points", r.fitted.size()}};
  return out;
}

CommandResult cmd_evaluate(const RunConfig& cfg) {
  const auto series = load_input(cfg);
  const auto& pts = series.points();
  const auto train_n = static_cast<std::size_t>(std::floor(static_cast<double>(pts.size()) * (1.0 - cfg.evaluation.holdout)));
  if (train_n < 4 || train_n >= pts.size()) throw Error(ErrorCode::NotEnoughData, "holdout leaves no usable split");
  const auto train = validate_series({pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(train_n)}, "train");
  pipeline::WorkerPool pool(cfg.pipeline.workers);
  const auto r = compress_with(train, cfg, pool);
  auto model = detect_multi_layer(r.abstraction, cfg.detection_config(), &pool);
  model.unit = cfg.unit ? *cfg.unit : median_interval(train);
  const auto pred = predict_next_period(model, model.unit);

  // Score the forecast on its own grid, reading the truth off the held-out raw skyline.
  const auto truth_knots = to_knots(pts);
  const double tail_end = pts.back().t;
  std::vector<TimePoint> observed, predicted;
  for (const auto& p : pred.fitted.points()) {
    if (p.t > tail_end) break;
    observed.push_back({p.t, skyline_value(truth_knots, p.t)});
    predicted.push_back(p);
  }
  if (observed.size() < 2) throw Error(ErrorCode::NotEnoughData, "held-out tail does not overlap the forecast");

  MetricsReport m;
  m.r_dc = compression_ratio(train, r.abstraction);
  m.acc_de = extraction_accuracy(train, r.abstraction);
  m.confidence = confidence_for(train, model.layers.front().period_length_time, cfg.evaluation.bins);
  m.rmse = rmse(validate_series(observed), validate_series(predicted));
  m.meta = {{"command", "evaluate"},
            {"dataset", cfg.io.input},
            {"layers", std::to_string(model.layers.size())},
            {"period", format_double(model.layers.front().period_length_time)},
            {"holdout_points", std::to_string(pts.size() - train_n)},
            {"scored_points", std::to_string(observed.size())}};
  CommandResult out;
  out.files = emit_report(pred, cfg.io.output);
  out.files.push_back(emit_report(m, cfg.io.format, cfg.io.output));
  out.summary = metrics_to_json(m);
  return out;
}

std::vector<TimeSeries> bench_datasets(const RunConfig& cfg) {
  if (!cfg.io.input.empty()) return {load_input(cfg)};
  std::vector<TimeSeries> out;
  for (std::uint64_t s = 0; s < 3; ++s) out.push_back(synthetic::noisy_sine(50.0, 20, 20.0, cfg.seed + s));
  return out;
}

std::string dataset_name(const RunConfig& cfg, std::size_t i) {
  return cfg.io.input.empty() ? "noisy_sine_" + std::to_string(cfg.seed + i) : cfg.io.input;
}

CommandResult cmd_bench(const RunConfig& cfg) {
  Sweep delta{"delta", {}}, epsilon{"epsilon", {}}, mu{"mu", {6, 8, 10, 12, 14}}, phi{"phi", {0.1, 0.3, 0.5}},
      workers{"workers", {1, 2, 4, 8}};
  bool threshold_set = false;
  const auto grid = parse_sweep("threshold=0.75:0.95:0.05").values;
  for (const auto& text : cfg.bench.sweeps) {
    auto s = parse_sweep(text);
    if (s.name == "threshold") {
      delta.values = epsilon.values = s.values;
      threshold_set = true;
    } else if (s.name == "delta") {
      delta.values = s.values;
    } else if (s.name == "epsilon") {
      epsilon.values = s.values;
    } else if (s.name == "mu") {
      mu = s;
    } else if (s.name == "phi") {
      phi = s;
    } else if (s.name == "workers") {
      workers = s;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown sweep '" + s.name + "'");
    }
  }
  // Without any threshold sweep, both thresholds move together over the default grid.
  std::vector<std::pair<double, double>> thresholds;
  if (!threshold_set && delta.values.empty() && epsilon.values.empty()) {
    for (double v : grid) thresholds.emplace_back(v, v);
  } else if (threshold_set) {
    for (double v : delta.values) thresholds.emplace_back(v, v);
  } else {
    const auto dv = delta.values.empty() ? std::vector<double>{cfg.compression.delta} : delta.values;
    const auto ev = epsilon.values.empty() ? std::vector<double>{cfg.compression.epsilon} : epsilon.values;
    for (double d : dv)
      for (double e : ev) thresholds.emplace_back(d, e);
  }

  const auto datasets = bench_datasets(cfg);
  std::ostringstream t1;
  t1 << "dataset,delta,epsilon,n,m,r_dc,acc_de\n";
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    for (const auto& [d, e] : thresholds) {
      CompressionConfig cc{d, e};
      const auto a = compress(datasets[i], cc);
      t1 << dataset_name(cfg, i) << ',' << fixed(d) << ',' << fixed(e) << ',' << datasets[i].size() << ','
         << a.size() << ',' << fixed(compression_ratio(datasets[i], a)) << ','
         << fixed(extraction_accuracy(datasets[i], a)) << '\n';
    }
  }

  pipeline::WorkerPool pool(cfg.pipeline.workers);
  std::ostringstream t2;
  t2 << "dataset,mu,phi,layers,period,theta_max,confidence\n";
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto abstraction = compress(datasets[i], cfg.compression);
    for (double mv : mu.values) {
      for (double pv : phi.values) {
        auto dc = cfg.detection_config();
        dc.mu = static_cast<std::size_t>(mv);
        dc.phi = pv;
        t2 << dataset_name(cfg, i) << ',' << dc.mu << ',' << fixed(pv) << ',';
        try {
          const auto model = detect_multi_layer(abstraction, dc, &pool);
          const auto& l1 = model.layers.front();
          t2 << model.layers.size() << ',' << fixed(l1.period_length_time) << ',' << fixed(l1.theta_max) << ','
             << fixed(confidence_for(datasets[i], l1.period_length_time, cfg.evaluation.bins)) << '\n';
        } catch (const Error& e) {
          t2 << "0,,," << '\n';
        }
      }
    }
  }

  CommandResult out;
  const std::string p1 = cfg.io.output + ".thresholds.csv", p2 = cfg.io.output + ".detection.csv";
  write_text_file(p1, t1.str());
  write_text_file(p2, t2.str());
  out.files = {p1, p2};

  if (cfg.bench.timing) {
    const auto big = synthetic::noisy_sine(50.0, std::max<std::size_t>(1, cfg.bench.timing_points / 50), 20.0, cfg.seed);
    std::ostringstream t3;
    t3 << "workers,points,wall_ms,speedup,shuffle_bytes,busy_variance\n";
    double base = 0.0;
    for (double wv : workers.values) {
      const auto w = static_cast<std::size_t>(wv);
      pipeline::WorkerPool wp(w);
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = pipeline::parallel_compress(big, cfg.compression, wp, w * 4);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      if (base == 0.0) base = ms;
      t3 << w << ',' << big.size() << ',' << fixed(ms) << ',' << fixed(base / ms) << ',' << r.shuffle_bytes << ','
         << fixed(r.busy_variance) << '\n';
    }
    const std::string p3 = cfg.io.output + ".runtime.csv";
    write_text_file(p3, t3.str());
    out.files.push_back(p3);
  }
  out.summary = {{"command", "bench"}, {"datasets", datasets.size()}, {"files", out.files}};
  return out;
}

CommandResult cmd_serve(const RunConfig& cfg) {
  const double window = cfg.pipeline.window > 0.0 ? cfg.pipeline.window : 1000.0;
  const double slide = cfg.pipeline.slide > 0.0 ? cfg.pipeline.slide : window;
  pipeline::WindowAssembler assembler(window, slide, cfg.pipeline.effective_partitions());
  pipeline::WorkerPool pool(cfg.pipeline.workers);
  const std::string path = cfg.io.output + ".stream.jsonl";
  std::ofstream sink(path, std::ios::trunc);
  if (!sink) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  std::size_t windows = 0;
  auto process = [&](const std::vector<pipeline::WindowBatch>& batches) {
    for (const auto& b : batches) {
      ordered_json line{{"window_id", b.window_id},
                        {"start", b.start_t},
                        {"end", b.end_t},
                        {"partial", b.partial},
                        {"points", b.size()}};
      try {
        const auto series = validate_series(b.points());
        std::vector<std::size_t> sizes;
        for (const auto& p : b.partitions) sizes.push_back(p.size());
        const auto r = pipeline::parallel_compress(series, cfg.compression, pool, sizes, b.partitions.size());
        line["inflections"] = r.abstraction.size();
        line["r_dc"] = compression_ratio(series, r.abstraction);
        line["acc_de"] = extraction_accuracy(series, r.abstraction);
        line["stages"] = stages_json(r.stages);
      } catch (const Error& e) {
        line["error"] = std::string(error_name(e.code()));
      }
      sink << line.dump() << '\n';
      sink.flush();
      ++windows;
    }
  };
  const pipeline::BatchHandler handler = [&](std::span<const pipeline::Record> batch) { process(assembler.push(batch)); };
  pipeline::StreamStats stats;
  if (!cfg.io.replay.empty()) {
    std::ifstream in(cfg.io.replay);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + cfg.io.replay + "'");
    stats = pipeline::replay_lines(in, cfg.io.rate, cfg.pipeline.receive_ms, handler);
  } else {
    pipeline::LineListener listener(cfg.io.port);
    std::cerr << "listening on 127.0.0.1:" << listener.port() << std::endl;
    stats = listener.run(handler, cfg.pipeline.receive_ms, cfg.io.max_clients);
  }
  process(assembler.finish());
  CommandResult out;
  out.files = {path};
  out.summary = {{"command", "serve"},
                 {"lines", stats.lines},
                 {"points", stats.points},
                 {"malformed", stats.malformed},
                 {"rejected", assembler.rejected()},
                 {"batches", stats.batches},
                 {"windows", windows}};
  return out;
}

}  // namespace

Sweep parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error(ErrorCode::InvalidConfig, "sweep must look like name=start:stop:step");
  Sweep s{std::string(text.substr(0, eq)), {}};
  const std::string body(text.substr(eq + 1));
  auto num = [&](const std::string& v) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "bad sweep value '" + v + "'");
    }
  };
  if (body.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(num(item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
      throw Error(ErrorCode::InvalidConfig, "sweep range needs start:stop:step with step > 0");
    // Index-based stepping avoids accumulating rounding error.
    const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      const double v = parts[0] + static_cast<double>(i) * parts[2];
      s.values.push_back(std::round(v * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) s.values.push_back(num(item));
  }
  if (s.values.empty()) throw Error(ErrorCode::InvalidConfig, "sweep has no values");
  return s;
}

CommandResult run_command(std::string_view cmd, const RunConfig& cfg) {
  cfg.validate();
  if (cmd == "compress") return cmd_compress(cfg);
  if (cmd == "detect") return cmd_detect(cfg);
  if (cmd == "predict") return cmd_predict(cfg);
  if (cmd == "evaluate") return cmd_evaluate(cfg);
  if (cmd == "bench") return cmd_bench(cfg);
  if (cmd == "serve") return cmd_serve(cfg);
  throw Error(ErrorCode::InvalidConfig, "unknown command '" + std::string(cmd) + "'");
}

}  // namespace tsperiod::io
