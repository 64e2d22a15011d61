#include "tsperiod/io/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tsperiod/error.hpp"
#include "tsperiod/io/csv.hpp"
#include "tsperiod/io/model_json.hpp"

namespace tsperiod::io {
namespace {

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json();
}

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : ""; }

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

nlohmann::ordered_json metrics_to_json(const MetricsReport& m) {
  nlohmann::ordered_json j;
  j["r_dc"] = number_or_null(m.r_dc);
  j["acc_de"] = number_or_null(m.acc_de);
  j["confidence"] = number_or_null(m.confidence);
  j["rmse"] = number_or_null(m.rmse);
  for (const auto& [k, v] : m.meta) j[k] = v;
  return j;
}

std::string metrics_csv(const MetricsReport& m) {
  std::ostringstream os;
  os << "r_dc,acc_de,confidence,rmse";
  for (const auto& [k, v] : m.meta) os << ',' << k;
  os << '\n' << cell(m.r_dc) << ',' << cell(m.acc_de) << ',' << cell(m.confidence) << ',' << cell(m.rmse);
  for (const auto& [k, v] : m.meta) os << ',' << v;
  os << '\n';
  return os.str();
}

std::string emit_report(const MetricsReport& m, const std::string& format, const std::string& prefix) {
  if (format == "json") {
    const std::string path = prefix + ".metrics.json";
    write_text_file(path, metrics_to_json(m).dump(1) + "\n");
    return path;
  }
  if (format == "csv") {
    const std::string path = prefix + ".metrics.csv";
    write_text_file(path, metrics_csv(m));
    return path;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown report format '" + format + "'");
}

std::vector<std::string> emit_report(const PredictionResult& r, const std::string& prefix) {
  std::ostringstream csv;
  csv << "timestamp,predicted_x\n";
  for (const auto& p : r.fitted.points()) csv << format_double(p.t) << ',' << format_double(p.x) << '\n';
  const std::string csv_path = prefix + ".prediction.csv";
  const std::string json_path = prefix + ".prediction.json";
  write_text_file(csv_path, csv.str());
  write_text_file(json_path, prediction_to_json(r).dump(1) + "\n");
  return {csv_path, json_path};
}

}  // namespace tsperiod::io
