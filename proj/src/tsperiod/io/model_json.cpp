#include "tsperiod/io/model_json.hpp"

#include <fstream>

#include "tsperiod/error.hpp"
#include "tsperiod/io/report.hpp"

namespace tsperiod::io {
namespace {

nlohmann::ordered_json knots_json(const std::vector<InflectionPoint>& knots) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& k : knots) arr.push_back({k.t, k.k});
  return arr;
}

std::vector<InflectionPoint> knots_from(const nlohmann::json& arr) {
  std::vector<InflectionPoint> out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::ParseError, "knot must be a [t, k] pair");
    out.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return out;
}

}  // namespace

nlohmann::ordered_json model_to_json(const MultiLayerModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "tsperiod-model";
  j["version"] = kModelVersion;
  j["unit"] = model.unit;
  j["source"] = {{"source_len", model.source.source_len()}, {"knots", knots_json(model.source.knots())}};
  auto layers = nlohmann::ordered_json::array();
  for (const auto& l : model.layers) {
    nlohmann::ordered_json lj;
    lj["layer"] = l.index;
    lj["L"] = l.period_length_knots;
    lj["L_time"] = l.period_length_time;
    lj["theta_max"] = l.theta_max;
    lj["gate"] = l.gate;
    lj["spectrum_index"] = l.spectrum_index;
    lj["best_pair"] = {{"n_a", l.best_pair.n_a}, {"n_b", l.best_pair.n_b}, {"area", l.best_pair.area}, {"q", l.best_pair.q}};
    auto periods = nlohmann::ordered_json::array();
    for (const auto& p : l.periods) {
      periods.push_back({{"start_t", p.start_t}, {"end_t", p.end_t}, {"knots", knots_json(p.abstraction.knots())}});
    }
    lj["periods"] = std::move(periods);
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  return j;
}

MultiLayerModel model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("version", 0) != kModelVersion)
      throw Error(ErrorCode::ParseError, "unsupported model version " + doc.value("version", nlohmann::json()).dump());
    MultiLayerModel m;
    m.unit = doc.at("unit").get<double>();
    const auto& src = doc.at("source");
    m.source = AbstractSeries(knots_from(src.at("knots")), src.at("source_len").get<std::size_t>());
    for (const auto& lj : doc.at("layers")) {
      PeriodicLayer l;
      l.index = lj.at("layer").get<std::size_t>();
      l.period_length_knots = lj.at("L").get<double>();
      l.period_length_time = lj.at("L_time").get<double>();
      l.theta_max = lj.at("theta_max").get<double>();
      l.gate = lj.value("gate", 0.0);
      l.spectrum_index = lj.value("spectrum_index", std::size_t{0});
      if (lj.contains("best_pair")) {
        const auto& bp = lj["best_pair"];
        l.best_pair = {bp.at("n_a").get<std::size_t>(), bp.at("n_b").get<std::size_t>(), bp.at("area").get<double>(),
                       bp.at("q").get<double>()};
      }
      std::size_t ordinal = 0;
      for (const auto& pj : lj.at("periods")) {
        Period p;
        p.start_t = pj.at("start_t").get<double>();
        p.end_t = pj.at("end_t").get<double>();
        auto knots = knots_from(pj.at("knots"));
        const std::size_t n = knots.size();
        p.abstraction = AbstractSeries(std::move(knots), n);
        p.layer = l.index;
        p.ordinal = ordinal++;
        l.periods.push_back(std::move(p));
      }
      m.layers.push_back(std::move(l));
    }
    if (m.layers.empty()) throw Error(ErrorCode::EmptyModel, "model has no layers");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed model document: ") + e.what());
  }
}

void save_model(const MultiLayerModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model).dump(1) + "\n");
}

MultiLayerModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open model '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "model '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

nlohmann::ordered_json prediction_to_json(const PredictionResult& r) {
  nlohmann::ordered_json j;
  j["horizon"] = {r.horizon_start, r.horizon_end};
  j["knots"] = knots_json(r.predicted_inflections);
  j["per_layer_weights"] = r.layer_weights;
  return j;
}

}  // namespace tsperiod::io
