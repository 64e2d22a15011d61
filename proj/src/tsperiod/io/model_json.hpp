#pragma once

#include <string>

#include "json.hpp"
#include "tsperiod/periodicity.hpp"
#include "tsperiod/prediction.hpp"

namespace tsperiod::io {

inline constexpr int kModelVersion = 1;

nlohmann::ordered_json model_to_json(const MultiLayerModel& model);
MultiLayerModel model_from_json(const nlohmann::json& doc);

void save_model(const MultiLayerModel& model, const std::string& path);
MultiLayerModel load_model(const std::string& path);

/// Sidecar document: horizon, predicted knots and per-layer weights.
nlohmann::ordered_json prediction_to_json(const PredictionResult& result);

}  // namespace tsperiod::io
