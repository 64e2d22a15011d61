/* tsperiod C API: inflection-point compression, multi-layer period detection
 * and next-period prediction for univariate time series.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Functions return TSP_OK or an error status;
 * tsp_last_error() describes the most recent failure on the calling thread.
 */
#ifndef TSPERIOD_TSPERIOD_H
#define TSPERIOD_TSPERIOD_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(TSP_BUILDING_LIBRARY)
#    define TSP_API __declspec(dllexport)
#  else
#    define TSP_API __declspec(dllimport)
#  endif
#else
#  define TSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsp_status {
  TSP_OK = 0,
  TSP_ERR_DUPLICATE_TIMESTAMP,
  TSP_ERR_INVALID_VALUE,
  TSP_ERR_TOO_SHORT,
  TSP_ERR_OUT_OF_SEGMENT,
  TSP_ERR_DEGENERATE_SEGMENT,
  TSP_ERR_DEGENERATE_SPAN,
  TSP_ERR_NO_PERIODICITY,
  TSP_ERR_NO_SIGNIFICANT_PERIOD,
  TSP_ERR_NOT_ENOUGH_DATA,
  TSP_ERR_SHAPE,
  TSP_ERR_INDEX,
  TSP_ERR_INVALID_CONFIG,
  TSP_ERR_EMPTY_LAYER,
  TSP_ERR_EMPTY_MODEL,
  TSP_ERR_MISSING_MODEL,
  TSP_ERR_EMPTY_ABSTRACTION,
  TSP_ERR_PATTERN_TOO_LONG,
  TSP_ERR_UNKNOWN_TRANSFORM,
  TSP_ERR_CYCLIC_LINEAGE,
  TSP_ERR_PARSE,
  TSP_ERR_EMPTY_COLUMN,
  TSP_ERR_IO,
  TSP_ERR_INVALID_ARGUMENT,
  TSP_ERR_INTERNAL
} tsp_status;

typedef struct tsp_config tsp_config;
typedef struct tsp_series tsp_series;
typedef struct tsp_abstract tsp_abstract;
typedef struct tsp_model tsp_model;
typedef struct tsp_prediction tsp_prediction;

typedef struct tsp_point {
  double t;
  double x;
} tsp_point;

typedef struct tsp_layer_info {
  size_t index;
  size_t period_count;
  double period_length_knots;
  double period_length_time;
  double theta_max;
  double gate;
} tsp_layer_info;

/* Metrics that were not computed are NaN. */
typedef struct tsp_metrics {
  double r_dc;
  double acc_de;
  double confidence;
  double rmse;
} tsp_metrics;

TSP_API const char* tsp_version(void);
TSP_API const char* tsp_status_name(tsp_status status);
/* Message of the last failure on this thread; empty after a success. */
TSP_API const char* tsp_last_error(void);
/* Source line of the last parse failure on this thread, or 0. */
TSP_API size_t tsp_last_error_line(void);
TSP_API void tsp_free_string(char* s);

/* Configuration. Keys are flat ("delta") or sectioned ("compression.delta"). */
TSP_API tsp_status tsp_config_create(tsp_config** out);
TSP_API tsp_status tsp_config_load_json(tsp_config* cfg, const char* path);
TSP_API tsp_status tsp_config_set(tsp_config* cfg, const char* key, const char* value);
TSP_API tsp_status tsp_config_to_json(const tsp_config* cfg, char** out_json);
TSP_API void tsp_config_destroy(tsp_config* cfg);

/* Series */
TSP_API tsp_status tsp_series_create(const tsp_point* points, size_t count, tsp_series** out);
TSP_API tsp_status tsp_series_load_csv(const char* path, const tsp_config* cfg, tsp_series** out);
TSP_API tsp_status tsp_series_save_csv(const tsp_series* s, const char* path);
TSP_API size_t tsp_series_length(const tsp_series* s);
TSP_API tsp_status tsp_series_get(const tsp_series* s, size_t i, tsp_point* out);
TSP_API void tsp_series_destroy(tsp_series* s);

/* Compression (cfg may be NULL for defaults) */
TSP_API tsp_status tsp_compress(const tsp_series* s, const tsp_config* cfg, tsp_abstract** out);
TSP_API size_t tsp_abstract_size(const tsp_abstract* a);
TSP_API tsp_status tsp_abstract_get(const tsp_abstract* a, size_t i, tsp_point* out);
TSP_API tsp_status tsp_abstract_save_csv(const tsp_abstract* a, const char* path);
TSP_API void tsp_abstract_destroy(tsp_abstract* a);

/* Detection */
TSP_API tsp_status tsp_detect(const tsp_abstract* a, const tsp_config* cfg, tsp_model** out);
TSP_API tsp_status tsp_model_load(const char* path, tsp_model** out);
TSP_API tsp_status tsp_model_save(const tsp_model* m, const char* path);
TSP_API size_t tsp_model_layer_count(const tsp_model* m);
TSP_API tsp_status tsp_model_layer(const tsp_model* m, size_t layer, tsp_layer_info* out);
/* Overrides the time step used when fitting predictions. */
TSP_API tsp_status tsp_model_set_unit(tsp_model* m, double unit);
TSP_API void tsp_model_destroy(tsp_model* m);

/* Prediction */
TSP_API tsp_status tsp_predict(const tsp_model* m, tsp_prediction** out);
TSP_API size_t tsp_prediction_length(const tsp_prediction* p);
TSP_API tsp_status tsp_prediction_get(const tsp_prediction* p, size_t i, tsp_point* out);
TSP_API tsp_status tsp_prediction_horizon(const tsp_prediction* p, double* start, double* end);
/* Writes <prefix>.prediction.csv and <prefix>.prediction.json. */
TSP_API tsp_status tsp_prediction_save(const tsp_prediction* p, const char* prefix);
TSP_API void tsp_prediction_destroy(tsp_prediction* p);

/* Compression metrics of `a` against its raw series; confidence and rmse are NaN. */
TSP_API tsp_status tsp_evaluate(const tsp_series* raw, const tsp_abstract* a, tsp_metrics* out);

/* Runs a CLI subcommand (compress, detect, predict, evaluate, bench, serve).
 * On success *summary_json (if non-NULL) receives a string to free with tsp_free_string. */
TSP_API tsp_status tsp_run(const char* command, const tsp_config* cfg, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* TSPERIOD_TSPERIOD_H */
