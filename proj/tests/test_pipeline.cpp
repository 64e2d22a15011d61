#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "doctest.h"
#include "tsperiod/compression.hpp"
#include "tsperiod/error.hpp"
#include "tsperiod/pipeline/dataset.hpp"
#include "tsperiod/pipeline/executor.hpp"
#include "tsperiod/pipeline/parallel_compress.hpp"
#include "tsperiod/pipeline/plan.hpp"
#include "tsperiod/pipeline/stream.hpp"
#include "tsperiod/pipeline/window.hpp"
#include "tsperiod/pipeline/worker_pool.hpp"
#include "tsperiod/synthetic.hpp"

using namespace tsperiod;
using namespace tsperiod::pipeline;

namespace {

std::vector<Record> ticks(std::size_t n) {
  std::vector<Record> r;
  for (std::size_t i = 0; i < n; ++i) r.push_back({static_cast<double>(i), static_cast<double>(i % 3)});
  return r;
}

LineageGraph chain(std::initializer_list<const char*> transforms) {
  LineageGraph g;
  std::size_t i = 0;
  for (const char* t : transforms) {
    LineageNode n{std::string("n") + std::to_string(i), t, {}};
    if (i) n.parents.push_back(i - 1);
    g.push_back(n);
    ++i;
  }
  return g;
}

}  // namespace

TEST_CASE("window split") {
  const auto s = ticks(10);
  const auto w = window_split(s, 4, 2);
  REQUIRE(w.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(w[j].start_t == 2.0 * static_cast<double>(j));
    CHECK(w[j].partial == (j == 4));
  }
  CHECK(w[0].size() == 4);
  CHECK(w[4].size() == 2);

  const auto tumbling = window_split(s, 5, 5);
  REQUIRE(tumbling.size() == 2);
  CHECK(tumbling[0].size() + tumbling[1].size() == 10);

  CHECK(window_split(std::vector<Record>{}, 4, 2).empty());
  CHECK_THROWS_AS(window_split(s, 0, 0), Error);
  CHECK_THROWS_AS(window_split(s, 2, 4), Error);
}

TEST_CASE("window coverage") {
  const auto s = ticks(97);
  for (auto [win, slide] : {std::pair{10.0, 3.0}, {8.0, 8.0}, {7.0, 2.0}}) {
    const auto w = window_split(s, win, slide, 3);
    std::vector<int> seen(s.size(), 0);
    for (const auto& b : w) {
      CHECK(b.partitions.size() == std::min<std::size_t>(3, b.size()));
      for (const auto& p : b.points()) ++seen[static_cast<std::size_t>(p.t)];
    }
    const int cap = static_cast<int>(std::ceil(win / slide));
    for (int c : seen) {
      CHECK(c >= 1);
      CHECK(c <= cap);
      if (win == slide) CHECK(c == 1);
    }
  }
}

TEST_CASE("dependency classification") {
  CHECK(classify_dependency("map_points") == DependencyKind::Narrow);
  CHECK(classify_dependency("mark_inflections_chunk") == DependencyKind::Narrow);
  CHECK(classify_dependency("boundary_merge") == DependencyKind::Narrow);
  CHECK(classify_dependency("group_reduce") == DependencyKind::Wide);
  CHECK(classify_dependency("combine_inflections") == DependencyKind::Wide);
  CHECK(classify_dependency("similarity_pairs") == DependencyKind::Wide);
  CHECK_THROWS_AS(classify_dependency("teleport"), Error);
}

TEST_CASE("stage planning") {
  CHECK(plan_stages(chain({"source", "map_points", "map_points"})).stages.size() == 1);
  CHECK(plan_stages(chain({"map_points", "group_reduce", "map_points"})).stages.size() == 2);
  const auto p = plan_stages(chain({"source", "mark_inflections_chunk", "combine_inflections", "map_points"}), 4);
  REQUIRE(p.stages.size() == 2);
  CHECK(p.stages[0].tasks == 4);

  auto cyclic = chain({"source", "map_points", "map_points"});
  cyclic[1].parents.push_back(2);
  CHECK_THROWS_AS(plan_stages(cyclic), Error);

  // Diamond with one wide branch: the join waits for the wide side.
  LineageGraph d{{"s", "source", {}}, {"a", "map_points", {0}}, {"b", "group_reduce", {0}}, {"j", "map_points", {1, 2}}};
  const auto dp = plan_stages(d);
  CHECK(dp.stages.size() == 2);
}

TEST_CASE("parallel compress job has two stages") {
  const auto s = synthetic::noisy_sine(50, 10, 20, 1);
  WorkerPool pool(2);
  const auto r = parallel_compress(s, {}, pool, 8);
  CHECK(r.stages.size() == 2);
  CHECK(r.shuffle_bytes > 0);
  CHECK(r.abstraction == compress(s, {}));
}

TEST_CASE("serialization round trip") {
  std::vector<Partition> parts{{{0, 1}, {1, 2}}, {}, {{2, -0.5}}};
  const auto bytes = serialize(parts);
  CHECK(bytes.size() == 8 + 3 * 8 + 3 * 16);
  CHECK(deserialize(bytes) == parts);
}

TEST_CASE("worker pool") {
  for (std::size_t w : {1u, 2u, 4u, 8u}) {
    WorkerPool pool(w);
    std::vector<std::atomic<int>> hits(1000);
    const auto busy = pool.parallel_for(1000, [&](std::size_t i, std::size_t worker) {
      CHECK(worker < w);
      hits[i]++;
    });
    CHECK(busy.size() == w);
    for (auto& h : hits) CHECK(h.load() == 1);

    // The lowest failing index wins.
    try {
      pool.parallel_for(100, [](std::size_t i, std::size_t) {
        if (i == 37 || i == 80) throw Error(ErrorCode::IndexError, std::to_string(i));
      });
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(std::string(e.what()) == "37");
    }

    // Nested calls run inline.
    std::atomic<int> inner{0};
    pool.parallel_for(4, [&](std::size_t, std::size_t) { pool.parallel_for(3, [&](std::size_t, std::size_t) { ++inner; }); });
    CHECK(inner.load() == 12);
  }
}

TEST_CASE("chunked compression equals sequential") {
  std::mt19937_64 rng(31);
  const auto s = synthetic::noisy_sine(37, 12, 15, 3);
  const auto seq = compress(s, {});
  WorkerPool pool(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t parts = 1 + rng() % 40;
    std::vector<std::size_t> cuts;
    for (std::size_t i = 0; i + 1 < parts; ++i) cuts.push_back(1 + rng() % (s.size() - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::size_t> sizes;
    std::size_t prev = 0;
    for (auto c : cuts) sizes.push_back(c - prev), prev = c;
    sizes.push_back(s.size() - prev);
    const std::size_t chunks = 1 + rng() % 30;
    CHECK(parallel_compress(s, {}, pool, sizes, chunks).abstraction == seq);
  }
  // Tiny partitions: one or two points each.
  std::vector<std::size_t> ones(s.size(), 1);
  CHECK(parallel_compress(s, {}, pool, ones, s.size()).abstraction == seq);
}

TEST_CASE("executor is deterministic across worker counts") {
  const auto s = synthetic::noisy_sine(50, 40, 10, 8);
  std::optional<AbstractSeries> first;
  for (std::size_t w : {1u, 2u, 4u, 8u}) {
    WorkerPool pool(w);
    for (int rep = 0; rep < 3; ++rep) {
      const auto r = parallel_compress(s, {0.8, 0.9}, pool, 16);
      if (!first) first = r.abstraction;
      CHECK(r.abstraction == *first);
      CHECK(r.stages.size() == 2);
      CHECK(r.stages[0].busy_ms_per_worker.size() == w);
    }
  }
}

TEST_CASE("line parsing and window assembly") {
  CHECK(parse_point_line("1.5,2") == Record{1.5, 2});
  CHECK(parse_point_line(" 3 , -4 \r") == Record{3, -4});
  CHECK_FALSE(parse_point_line("timestamp,value"));
  CHECK_FALSE(parse_point_line("1,2,3"));
  CHECK_FALSE(parse_point_line(""));

  const auto s = ticks(10);
  WindowAssembler wa(4, 2, 1);
  std::vector<WindowBatch> got;
  for (std::size_t i = 0; i < s.size(); i += 3) {
    const auto part = std::span<const Record>(s).subspan(i, std::min<std::size_t>(3, s.size() - i));
    for (auto& b : wa.push(part)) got.push_back(std::move(b));
  }
  for (auto& b : wa.finish()) got.push_back(std::move(b));
  const auto ref = window_split(s, 4, 2);
  REQUIRE(got.size() == ref.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].window_id == ref[i].window_id);
    CHECK(got[i].points() == ref[i].points());
    CHECK(got[i].partial == ref[i].partial);
  }
}

TEST_CASE("replay and TCP ingestion") {
  std::istringstream in("timestamp,value\n0,1\n1,2\nbad\n2,3\n");
  std::vector<Record> seen;
  const auto stats = replay_lines(in, 0, 1000, [&](std::span<const Record> b) { seen.insert(seen.end(), b.begin(), b.end()); });
  CHECK(stats.points == 3);
  CHECK(stats.malformed == 1);
  CHECK(seen == std::vector<Record>{{0, 1}, {1, 2}, {2, 3}});

  LineListener listener(0);
  REQUIRE(listener.port() > 0);
  std::thread client([port = listener.port()] {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) {
      const char msg[] = "0,1\n1,2\n2,";
      ::send(fd, msg, sizeof msg - 1, 0);
      std::this_thread::sleep_for(std::chrono::milliseconds(30));
      const char rest[] = "3\n3,4";
      ::send(fd, rest, sizeof rest - 1, 0);
    }
    ::close(fd);
  });
  std::vector<Record> tcp;
  const auto ts = listener.run([&](std::span<const Record> b) { tcp.insert(tcp.end(), b.begin(), b.end()); }, 10, 1);
  client.join();
  CHECK(ts.points == 4);
  CHECK(tcp == std::vector<Record>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
}
