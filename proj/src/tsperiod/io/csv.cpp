#include "tsperiod/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "tsperiod/error.hpp"

namespace tsperiod::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool is_missing(std::string_view s) {
  if (s.empty()) return true;
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "na" || lower == "nan" || lower == "null" || lower == "none" || lower == "?";
}

// Days since 1970-01-01 in the proleptic Gregorian calendar.
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool read_int(std::string_view& s, std::size_t digits, int& out) {
  if (s.size() < digits) return false;
  out = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    out = out * 10 + (s[i] - '0');
  }
  s.remove_prefix(digits);
  return true;
}

bool eat(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

struct Row {
  double t;
  std::optional<double> x;
};

void fill_missing(std::vector<Row>& rows, const std::optional<std::size_t>& cycle) {
  std::vector<std::size_t> present;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].x) present.push_back(i);
  if (present.empty()) throw Error(ErrorCode::EmptyColumn, "value column has no data");
  if (present.size() == rows.size()) return;

  std::vector<std::optional<double>> filled(rows.size());
  if (cycle && *cycle > 0) {
    const std::size_t c = *cycle;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].x) continue;
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t j = i % c; j < rows.size(); j += c) {
        if (rows[j].x) {
          sum += *rows[j].x;
          ++count;
        }
      }
      if (count > 0) filled[i] = sum / static_cast<double>(count);
    }
  }
  std::size_t next = 0;  // index into present
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].x) continue;
    if (filled[i]) continue;
    while (next < present.size() && present[next] < i) ++next;
    if (next == 0) {
      filled[i] = *rows[present.front()].x;
    } else if (next == present.size()) {
      filled[i] = *rows[present.back()].x;
    } else {
      const Row& l = rows[present[next - 1]];
      const Row& r = rows[present[next]];
      filled[i] = *l.x + (*r.x - *l.x) * (rows[i].t - l.t) / (r.t - l.t);
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].x) rows[i].x = filled[i];
}

}  // namespace

std::optional<double> parse_iso8601(std::string_view s) {
  int y, mo, d, h = 0, mi = 0, sec = 0;
  if (!read_int(s, 4, y) || !eat(s, '-') || !read_int(s, 2, mo) || !eat(s, '-') || !read_int(s, 2, d))
    return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  double frac = 0.0;
  double offset = 0.0;
  if (!s.empty() && (s.front() == 'T' || s.front() == ' ')) {
    s.remove_prefix(1);
    if (!read_int(s, 2, h) || !eat(s, ':') || !read_int(s, 2, mi)) return std::nullopt;
    if (eat(s, ':')) {
      if (!read_int(s, 2, sec)) return std::nullopt;
      if (!s.empty() && (s.front() == '.' || s.front() == ',')) {
        s.remove_prefix(1);
        double scale = 0.1;
        std::size_t n = 0;
        while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.front()))) {
          frac += (s.front() - '0') * scale;
          scale /= 10.0;
          s.remove_prefix(1);
          ++n;
        }
        if (n == 0) return std::nullopt;
      }
    }
    if (h > 24 || mi > 59 || sec > 60) return std::nullopt;
    if (eat(s, 'Z')) {
    } else if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
      const int sign = s.front() == '-' ? -1 : 1;
      s.remove_prefix(1);
      int oh, om = 0;
      if (!read_int(s, 2, oh)) return std::nullopt;
      eat(s, ':');
      if (!s.empty() && !read_int(s, 2, om)) return std::nullopt;
      offset = sign * (oh * 3600.0 + om * 60.0);
    }
  }
  if (!s.empty()) return std::nullopt;
  const double days = static_cast<double>(days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)));
  return days * 86400.0 + h * 3600.0 + mi * 60.0 + sec + frac - offset;
}

TimeSeries parse_csv(std::istream& in, const CsvSchema& schema, std::string name) {
  if (!(schema.tick_seconds > 0.0)) throw Error(ErrorCode::InvalidConfig, "tick_seconds must be positive");
  std::string line;
  std::size_t line_no = 0;
  std::size_t tcol = 0, vcol = 1;
  bool header_done = false;
  enum class Clock { Unknown, Numeric, Calendar } clock = Clock::Unknown;
  std::vector<Row> rows;
  double origin = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (trim(view).empty() || trim(view).front() == '#') continue;
    const auto cells = split_row(view);
    if (!header_done) {
      header_done = true;
      const bool numeric = cells.size() >= 2 && parse_number(cells[0]).has_value();
      const bool calendar = cells.size() >= 2 && parse_iso8601(cells[0]).has_value();
      if (!numeric && !calendar) {
        auto find = [&](const std::string& col) {
          auto it = std::find(cells.begin(), cells.end(), std::string_view(col));
          if (it == cells.end()) throw Error(ErrorCode::ParseError, "missing column '" + col + "'", line_no);
          return static_cast<std::size_t>(it - cells.begin());
        };
        tcol = find(schema.time_column);
        vcol = find(schema.value_column);
        continue;
      }
    }
    if (cells.size() <= std::max(tcol, vcol))
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": too few columns", line_no);
    const auto tcell = cells[tcol];
    double t;
    if (clock != Clock::Calendar && parse_number(tcell)) {
      if (clock == Clock::Unknown) clock = Clock::Numeric;
      t = *parse_number(tcell);
    } else if (clock != Clock::Numeric && parse_iso8601(tcell)) {
      const double secs = *parse_iso8601(tcell);
      if (clock == Clock::Unknown) {
        clock = Clock::Calendar;
        origin = secs;
      }
      t = (secs - origin) / schema.tick_seconds;
    } else {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": bad timestamp '" + std::string(tcell) + "'", line_no);
    }
    if (!std::isfinite(t))
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": non-finite timestamp", line_no);
    Row row{t, std::nullopt};
    const auto vcell = cells[vcol];
    if (!is_missing(vcell)) {
      const auto v = parse_number(vcell);
      if (!v) throw Error(ErrorCode::ParseError,
                          "line " + std::to_string(line_no) + ": bad value '" + std::string(vcell) + "'", line_no);
      if (std::isfinite(*v)) row.x = *v;
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyColumn, "no data rows");
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
  fill_missing(rows, schema.cycle_hint);
  std::vector<TimePoint> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back({r.t, *r.x});
  return validate_series(std::move(pts), std::move(name));
}

TimeSeries ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_csv(in, schema, path);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_points_csv(std::ostream& out, std::span<const TimePoint> points) {
  out << "timestamp,value\n";
  for (const auto& p : points) out << format_double(p.t) << ',' << format_double(p.x) << '\n';
}

void write_knots_csv(std::ostream& out, std::span<const InflectionPoint> knots) {
  out << "timestamp,value\n";
  for (const auto& k : knots) out << format_double(k.t) << ',' << format_double(k.k) << '\n';
}

}  // namespace tsperiod::io
