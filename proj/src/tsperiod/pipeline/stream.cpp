#include "tsperiod/pipeline/stream.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include "tsperiod/error.hpp"

namespace tsperiod::pipeline {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::optional<Record> parse_point_line(std::string_view line) {
  const auto comma = line.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  Record r;
  if (!parse_double(line.substr(0, comma), r.t) || !parse_double(line.substr(comma + 1), r.x)) return std::nullopt;
  return r;
}

WindowAssembler::WindowAssembler(double window, double slide, std::size_t partitions)
    : window_(window), slide_(slide), partitions_(std::max<std::size_t>(1, partitions)) {
  if (!(slide > 0.0) || !(window >= slide) || !std::isfinite(window))
    throw Error(ErrorCode::InvalidConfig, "window durations need window >= slide > 0");
}

std::vector<WindowBatch> WindowAssembler::push(std::span<const Record> batch) {
  for (const auto& r : batch) {
    if (!buffer_.empty() && !(r.t > buffer_.back().t)) {
      ++rejected_;
      continue;
    }
    if (!buffer_.empty()) gaps_.push_back(r.t - buffer_.back().t);
    if (!next_) next_ = static_cast<std::int64_t>(std::floor(r.t / slide_));
    buffer_.push_back(r);
  }
  return drain(false);
}

std::vector<WindowBatch> WindowAssembler::finish() { return drain(true); }

std::vector<WindowBatch> WindowAssembler::drain(bool final) {
  std::vector<WindowBatch> out;
  if (buffer_.empty() || !next_) return out;
  const double last = buffer_.back().t;
  double step = 0.0;
  if (final && !gaps_.empty()) {
    auto g = gaps_;
    auto mid = g.begin() + static_cast<std::ptrdiff_t>((g.size() - 1) / 2);
    std::nth_element(g.begin(), mid, g.end());
    step = *mid;
  }
  for (;;) {
    const std::int64_t j = *next_;
    const double start = static_cast<double>(j) * slide_;
    const double end = start + window_;
    if (!final && last < end) break;
    if (final && start > last) break;
    auto b = make_window(buffer_, j, window_, slide_, partitions_, final && end > last + step);
    if (b.size() > 0) out.push_back(std::move(b));
    ++*next_;
  }
  const double keep_from = static_cast<double>(*next_) * slide_;
  auto it = std::lower_bound(buffer_.begin(), buffer_.end(), keep_from,
                             [](const Record& r, double t) { return r.t < t; });
  // Keep the newest point so ordering checks still work after trimming.
  if (it == buffer_.end() && it != buffer_.begin()) --it;
  buffer_.erase(buffer_.begin(), it);
  return out;
}

LineListener::LineListener(int port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw Error(ErrorCode::IoError, "socket() failed");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 4) < 0) {
    ::close(fd_);
    throw Error(ErrorCode::IoError, "cannot listen on port " + std::to_string(port) + ": " + std::strerror(errno));
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

LineListener::~LineListener() {
  if (fd_ >= 0) ::close(fd_);
}

StreamStats LineListener::run(const BatchHandler& handler, double receive_ms, std::size_t max_clients) {
  StreamStats stats;
  const auto interval = std::chrono::duration<double, std::milli>(std::max(1.0, receive_ms));
  for (std::size_t client = 0; client < max_clients; ++client) {
    const int conn = ::accept(fd_, nullptr, nullptr);
    if (conn < 0) throw Error(ErrorCode::IoError, "accept() failed");
    std::string pending;
    std::vector<Record> batch;
    auto flush = [&] {
      if (batch.empty()) return;
      handler(batch);
      ++stats.batches;
      batch.clear();
    };
    auto deadline = std::chrono::steady_clock::now() + interval;
    bool open = true;
    char buf[4096];
    while (open) {
      const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      pollfd pfd{conn, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(std::max<long long>(0, wait.count())));
      if (ready > 0) {
        const ssize_t got = ::recv(conn, buf, sizeof buf, 0);
        if (got <= 0) {
          open = false;
        } else {
          pending.append(buf, static_cast<std::size_t>(got));
          std::size_t pos;
          while ((pos = pending.find('\n')) != std::string::npos) {
            const std::string_view line(pending.data(), pos);
            ++stats.lines;
            if (auto r = parse_point_line(line)) {
              batch.push_back(*r);
              ++stats.points;
            } else if (!trim(line).empty()) {
              ++stats.malformed;
            }
            pending.erase(0, pos + 1);
          }
        }
      }
      if (std::chrono::steady_clock::now() >= deadline) {
        flush();
        deadline = std::chrono::steady_clock::now() + interval;
      }
    }
    if (auto r = parse_point_line(pending)) {
      batch.push_back(*r);
      ++stats.points;
      ++stats.lines;
    }
    flush();
    ::close(conn);
  }
  return stats;
}

StreamStats replay_lines(std::istream& in, double rate, double receive_ms, const BatchHandler& handler) {
  StreamStats stats;
  const double interval_ms = std::max(1.0, receive_ms);
  const std::size_t per_batch =
      rate > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(rate * interval_ms / 1000.0)) : 4096;
  std::vector<Record> batch;
  std::string line;
  auto flush = [&] {
    if (batch.empty()) return;
    handler(batch);
    ++stats.batches;
    batch.clear();
    if (rate > 0.0) std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(interval_ms));
  };
  while (std::getline(in, line)) {
    ++stats.lines;
    if (auto r = parse_point_line(line)) {
      batch.push_back(*r);
      ++stats.points;
      if (batch.size() >= per_batch) flush();
    } else if (!trim(line).empty() && stats.lines > 1) {
      ++stats.malformed;  // a non-numeric first line is taken as a CSV header
    }
  }
  flush();
  return stats;
}

}  // namespace tsperiod::pipeline
