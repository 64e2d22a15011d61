#include "tsperiod/tsperiod.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "tsperiod/error.hpp"
#include "tsperiod/evaluation.hpp"
#include "tsperiod/io/commands.hpp"
#include "tsperiod/io/config.hpp"
#include "tsperiod/io/csv.hpp"
#include "tsperiod/io/model_json.hpp"
#include "tsperiod/io/report.hpp"
#include "tsperiod/pipeline/parallel_compress.hpp"
#include "tsperiod/pipeline/worker_pool.hpp"

struct tsp_config {
  tsperiod::io::RunConfig cfg;
};
struct tsp_series {
  tsperiod::TimeSeries series;
};
struct tsp_abstract {
  tsperiod::AbstractSeries abstraction;
};
struct tsp_model {
  tsperiod::MultiLayerModel model;
};
struct tsp_prediction {
  tsperiod::PredictionResult result;
};

namespace {

thread_local std::string g_last_error;
thread_local std::size_t g_last_line = 0;

tsp_status to_status(tsperiod::ErrorCode code) {
  return static_cast<tsp_status>(static_cast<int>(code) + 1);
}

tsp_status fail(tsp_status s, std::string message, std::size_t line = 0) {
  g_last_error = std::move(message);
  g_last_line = line;
  return s;
}

template <class F>
tsp_status guarded(F&& f) {
  try {
    g_last_error.clear();
    g_last_line = 0;
    f();
    return TSP_OK;
  } catch (const tsperiod::Error& e) {
    return fail(to_status(e.code()), e.what(), e.line());
  } catch (const std::bad_alloc&) {
    return fail(TSP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TSP_ERR_INTERNAL, e.what());
  }
}

const tsperiod::io::RunConfig& config_or_default(const tsp_config* cfg) {
  static const tsperiod::io::RunConfig defaults;
  return cfg ? cfg->cfg : defaults;
}

char* dup_string(const std::string& s) {
  auto* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define TSP_REQUIRE(cond)                                                       \
  do {                                                                          \
    if (!(cond)) return fail(TSP_ERR_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* tsp_version(void) { return "1.0.0"; }

const char* tsp_status_name(tsp_status status) {
  switch (status) {
    case TSP_OK: return "Ok";
    case TSP_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case TSP_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(tsperiod::ErrorCode::IoError)) return "Unknown";
  return tsperiod::error_name(static_cast<tsperiod::ErrorCode>(code)).data();
}

const char* tsp_last_error(void) { return g_last_error.c_str(); }
size_t tsp_last_error_line(void) { return g_last_line; }
void tsp_free_string(char* s) { delete[] s; }

tsp_status tsp_config_create(tsp_config** out) {
  TSP_REQUIRE(out);
  return guarded([&] { *out = new tsp_config{}; });
}

tsp_status tsp_config_load_json(tsp_config* cfg, const char* path) {
  TSP_REQUIRE(cfg && path);
  return guarded([&] {
    auto loaded = tsperiod::io::load_config(path);
    cfg->cfg = std::move(loaded);
  });
}

tsp_status tsp_config_set(tsp_config* cfg, const char* key, const char* value) {
  TSP_REQUIRE(cfg && key && value);
  return guarded([&] {
    auto copy = cfg->cfg;
    tsperiod::io::set_option(copy, key, value);
    copy.validate();
    cfg->cfg = std::move(copy);
  });
}

tsp_status tsp_config_to_json(const tsp_config* cfg, char** out_json) {
  TSP_REQUIRE(cfg && out_json);
  return guarded([&] { *out_json = dup_string(tsperiod::io::to_json(cfg->cfg).dump(2)); });
}

void tsp_config_destroy(tsp_config* cfg) { delete cfg; }

tsp_status tsp_series_create(const tsp_point* points, size_t count, tsp_series** out) {
  TSP_REQUIRE(out && (points || count == 0));
  return guarded([&] {
    std::vector<tsperiod::TimePoint> pts(count);
    for (size_t i = 0; i < count; ++i) pts[i] = {points[i].t, points[i].x};
    *out = new tsp_series{tsperiod::validate_series(std::move(pts))};
  });
}

tsp_status tsp_series_load_csv(const char* path, const tsp_config* cfg, tsp_series** out) {
  TSP_REQUIRE(path && out);
  return guarded([&] { *out = new tsp_series{tsperiod::io::ingest_csv(path, config_or_default(cfg).io.schema)}; });
}

tsp_status tsp_series_save_csv(const tsp_series* s, const char* path) {
  TSP_REQUIRE(s && path);
  return guarded([&] {
    std::ofstream f(path);
    if (!f) throw tsperiod::Error(tsperiod::ErrorCode::IoError, std::string("cannot write '") + path + "'");
    tsperiod::io::write_points_csv(f, s->series.points());
  });
}

size_t tsp_series_length(const tsp_series* s) { return s ? s->series.size() : 0; }

tsp_status tsp_series_get(const tsp_series* s, size_t i, tsp_point* out) {
  TSP_REQUIRE(s && out);
  if (i >= s->series.size()) return fail(TSP_ERR_INDEX, "series index out of range");
  *out = {s->series[i].t, s->series[i].x};
  return TSP_OK;
}

void tsp_series_destroy(tsp_series* s) { delete s; }

tsp_status tsp_compress(const tsp_series* s, const tsp_config* cfg, tsp_abstract** out) {
  TSP_REQUIRE(s && out);
  return guarded([&] {
    const auto& rc = config_or_default(cfg);
    tsperiod::pipeline::WorkerPool pool(rc.pipeline.workers);
    auto r = tsperiod::pipeline::parallel_compress(s->series, rc.compression, pool, rc.pipeline.effective_partitions());
    *out = new tsp_abstract{std::move(r.abstraction)};
  });
}

size_t tsp_abstract_size(const tsp_abstract* a) { return a ? a->abstraction.size() : 0; }

tsp_status tsp_abstract_get(const tsp_abstract* a, size_t i, tsp_point* out) {
  TSP_REQUIRE(a && out);
  if (i >= a->abstraction.size()) return fail(TSP_ERR_INDEX, "knot index out of range");
  *out = {a->abstraction[i].t, a->abstraction[i].k};
  return TSP_OK;
}

tsp_status tsp_abstract_save_csv(const tsp_abstract* a, const char* path) {
  TSP_REQUIRE(a && path);
  return guarded([&] {
    std::ofstream f(path);
    if (!f) throw tsperiod::Error(tsperiod::ErrorCode::IoError, std::string("cannot write '") + path + "'");
    tsperiod::io::write_knots_csv(f, a->abstraction.knots());
  });
}

void tsp_abstract_destroy(tsp_abstract* a) { delete a; }

tsp_status tsp_detect(const tsp_abstract* a, const tsp_config* cfg, tsp_model** out) {
  TSP_REQUIRE(a && out);
  return guarded([&] {
    const auto& rc = config_or_default(cfg);
    tsperiod::pipeline::WorkerPool pool(rc.pipeline.workers);
    auto model = tsperiod::detect_multi_layer(a->abstraction, rc.detection_config(), &pool);
    if (rc.unit) model.unit = *rc.unit;
    *out = new tsp_model{std::move(model)};
  });
}

tsp_status tsp_model_load(const char* path, tsp_model** out) {
  TSP_REQUIRE(path && out);
  return guarded([&] { *out = new tsp_model{tsperiod::io::load_model(path)}; });
}

tsp_status tsp_model_save(const tsp_model* m, const char* path) {
  TSP_REQUIRE(m && path);
  return guarded([&] { tsperiod::io::save_model(m->model, path); });
}

size_t tsp_model_layer_count(const tsp_model* m) { return m ? m->model.layers.size() : 0; }

tsp_status tsp_model_layer(const tsp_model* m, size_t layer, tsp_layer_info* out) {
  TSP_REQUIRE(m && out);
  if (layer >= m->model.layers.size()) return fail(TSP_ERR_INDEX, "layer index out of range");
  const auto& l = m->model.layers[layer];
  *out = {l.index, l.periods.size(), l.period_length_knots, l.period_length_time, l.theta_max, l.gate};
  return TSP_OK;
}

tsp_status tsp_model_set_unit(tsp_model* m, double unit) {
  TSP_REQUIRE(m);
  if (!(unit > 0.0) || !std::isfinite(unit)) return fail(TSP_ERR_INVALID_CONFIG, "unit must be positive");
  m->model.unit = unit;
  return TSP_OK;
}

void tsp_model_destroy(tsp_model* m) { delete m; }

tsp_status tsp_predict(const tsp_model* m, tsp_prediction** out) {
  TSP_REQUIRE(m && out);
  return guarded([&] { *out = new tsp_prediction{tsperiod::predict_next_period(m->model, m->model.unit)}; });
}

size_t tsp_prediction_length(const tsp_prediction* p) { return p ? p->result.fitted.size() : 0; }

tsp_status tsp_prediction_get(const tsp_prediction* p, size_t i, tsp_point* out) {
  TSP_REQUIRE(p && out);
  if (i >= p->result.fitted.size()) return fail(TSP_ERR_INDEX, "prediction index out of range");
  *out = {p->result.fitted[i].t, p->result.fitted[i].x};
  return TSP_OK;
}

tsp_status tsp_prediction_horizon(const tsp_prediction* p, double* start, double* end) {
  TSP_REQUIRE(p && start && end);
  *start = p->result.horizon_start;
  *end = p->result.horizon_end;
  return TSP_OK;
}

tsp_status tsp_prediction_save(const tsp_prediction* p, const char* prefix) {
  TSP_REQUIRE(p && prefix);
  return guarded([&] { tsperiod::io::emit_report(p->result, prefix); });
}

void tsp_prediction_destroy(tsp_prediction* p) { delete p; }

tsp_status tsp_evaluate(const tsp_series* raw, const tsp_abstract* a, tsp_metrics* out) {
  TSP_REQUIRE(raw && a && out);
  return guarded([&] {
    *out = {tsperiod::compression_ratio(raw->series, a->abstraction),
            tsperiod::extraction_accuracy(raw->series, a->abstraction), std::nan(""), std::nan("")};
  });
}

tsp_status tsp_run(const char* command, const tsp_config* cfg, char** summary_json) {
  TSP_REQUIRE(command);
  return guarded([&] {
    auto r = tsperiod::io::run_command(command, config_or_default(cfg));
    r.summary["files"] = r.files;
    if (summary_json) *summary_json = dup_string(r.summary.dump());
  });
}

}  // extern "C"
