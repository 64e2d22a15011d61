#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tsperiod/pipeline/window.hpp"

namespace tsperiod::pipeline {

/// Parses "<timestamp>,<value>". Returns nullopt for anything else.
std::optional<Record> parse_point_line(std::string_view line);

/// Incremental counterpart of window_split: emits each window as soon as a
/// point at or beyond its end arrives, and the rest on finish().
class WindowAssembler {
 public:
  WindowAssembler(double window, double slide, std::size_t partitions);

  std::vector<WindowBatch> push(std::span<const Record> batch);
  std::vector<WindowBatch> finish();
  std::size_t rejected() const noexcept { return rejected_; }

 private:
  std::vector<WindowBatch> drain(bool final);

  double window_;
  double slide_;
  std::size_t partitions_;
  std::vector<Record> buffer_;
  std::optional<std::int64_t> next_;
  std::size_t rejected_ = 0;
  std::vector<double> gaps_;
};

struct StreamStats {
  std::size_t lines = 0;
  std::size_t points = 0;
  std::size_t malformed = 0;
  std::size_t batches = 0;
};

using BatchHandler = std::function<void(std::span<const Record>)>;

/// TCP listener for the line protocol. Port 0 binds an ephemeral port.
class LineListener {
 public:
  explicit LineListener(int port);
  ~LineListener();
  LineListener(const LineListener&) = delete;
  LineListener& operator=(const LineListener&) = delete;

  int port() const noexcept { return port_; }

  /// Serves `max_clients` connections in turn, flushing parsed points to
  /// `handler` every `receive_ms` milliseconds and when a client hangs up.
  StreamStats run(const BatchHandler& handler, double receive_ms, std::size_t max_clients);

 private:
  int fd_ = -1;
  int port_ = 0;
};

/// Replays CSV/line input at `rate` points per second (0 = unthrottled).
StreamStats replay_lines(std::istream& in, double rate, double receive_ms, const BatchHandler& handler);

}  // namespace tsperiod::pipeline
