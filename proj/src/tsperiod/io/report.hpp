#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "tsperiod/evaluation.hpp"
#include "tsperiod/prediction.hpp"

namespace tsperiod::io {

void write_text_file(const std::string& path, const std::string& content);

/// Flat object: r_dc, acc_de, confidence, rmse, then meta keys in order.
/// Metrics that were not computed (NaN) are written as null.
nlohmann::ordered_json metrics_to_json(const MetricsReport& m);
std::string metrics_csv(const MetricsReport& m);

/// Writes `<prefix>.metrics.json` or `<prefix>.metrics.csv`; returns the path.
std::string emit_report(const MetricsReport& m, const std::string& format, const std::string& prefix);
/// Writes `<prefix>.prediction.csv` and `<prefix>.prediction.json`.
std::vector<std::string> emit_report(const PredictionResult& r, const std::string& prefix);

}  // namespace tsperiod::io
