#include "tsperiod/pipeline/parallel_compress.hpp"

#include <algorithm>
#include <memory>

#include "tsperiod/error.hpp"

namespace tsperiod::pipeline {
namespace {

InflectionPoint knot(const Record& r) { return {r.t, r.x}; }
Record record(const InflectionPoint& k) { return {k.t, k.k}; }

// Marks the points owned by partition i, peeking one point into each neighbour.
Partition mark_chunk(const PartitionedDataset& raw, std::size_t i) {
  const auto& part = raw.partition(i);
  const bool first_part = i == 0;
  const bool last_part = i + 1 == raw.partition_count();
  Partition out;
  for (std::size_t j = 0; j < part.size(); ++j) {
    const bool global_first = first_part && j == 0;
    const bool global_last = last_part && j + 1 == part.size();
    if (global_first || global_last) {
      out.push_back(part[j]);
      continue;
    }
    const Record& prev = j > 0 ? part[j - 1] : raw.partition(i - 1).back();
    const Record& next = j + 1 < part.size() ? part[j + 1] : raw.partition(i + 1).front();
    if (is_trend_change(prev, part[j], next)) out.push_back(part[j]);
  }
  return out;
}

// Speculative pass: assumes the knot just before the chunk survived.
Partition prune_chunk(const PartitionedDataset& chunks, std::size_t i, const CompressionConfig& cfg) {
  const auto& c = chunks.partition(i);
  const bool first = i == 0, last = i + 1 == chunks.partition_count();
  const std::size_t lo = first ? 1 : 0;
  const std::size_t hi = last ? c.size() - 1 : c.size();
  Partition out;
  if (first) out.push_back(c.front());
  if (hi > lo) {
    const auto ks = to_knots(std::span(c).subspan(lo, hi - lo));
    const InflectionPoint anchor = first ? knot(c.front()) : knot(chunks.partition(i - 1).back());
    const InflectionPoint next = last ? knot(c.back()) : knot(chunks.partition(i + 1).front());
    for (const auto& k : prune_pass(anchor, ks, next, cfg)) out.push_back(record(k));
  }
  if (last && !(first && c.size() == 1)) out.push_back(c.back());
  return out;
}

// Replays the pass from the true anchor until it agrees with the speculative
// run, then keeps the speculative tail.
Partition merge_chunk(const PartitionedDataset& speculative, std::span<const Partition> done, std::size_t i,
                      const CompressionConfig& cfg) {
  const auto& spec = speculative.partition(i);
  if (i == 0) return spec;
  const auto& chunks = *speculative.parent();
  const auto& c = chunks.partition(i);
  const Record assumed = chunks.partition(i - 1).back();
  const Record* anchor = nullptr;
  for (std::size_t j = i; j-- > 0;) {
    if (!done[j].empty()) {
      anchor = &done[j].back();
      break;
    }
  }
  if (anchor == nullptr) throw Error(ErrorCode::ShapeError, "boundary merge lost the first knot");
  if (anchor->t == assumed.t) return spec;

  const bool last = i + 1 == chunks.partition_count();
  const std::size_t hi = last ? c.size() - 1 : c.size();
  InflectionPoint left = knot(*anchor);
  double spec_anchor_t = assumed.t;
  std::size_t s = 0;  // cursor into spec
  Partition out;
  for (std::size_t j = 0; j < hi; ++j) {
    const InflectionPoint next = j + 1 < c.size() ? knot(c[j + 1]) : knot(chunks.partition(i + 1).front());
    const bool keep = !is_pseudo(left, knot(c[j]), next, cfg);
    if (keep) {
      out.push_back(c[j]);
      left = knot(c[j]);
    }
    if (s < spec.size() && spec[s].t == c[j].t) {
      spec_anchor_t = c[j].t;
      ++s;
    }
    if (left.t == spec_anchor_t) {
      out.insert(out.end(), spec.begin() + static_cast<std::ptrdiff_t>(s), spec.end());
      return out;
    }
  }
  if (last) out.push_back(c.back());
  return out;
}

// Balanced re-split of all marked knots into `chunks` non-empty slices.
Partition combine(const PartitionedDataset& marked, std::size_t i, std::size_t chunks) {
  std::size_t total = marked.record_count();
  const std::size_t b = i * total / chunks, e = (i + 1) * total / chunks;
  Partition out;
  out.reserve(e - b);
  std::size_t offset = 0;
  for (const auto& p : marked.partitions()) {
    const std::size_t pb = offset, pe = offset + p.size();
    offset = pe;
    if (pe <= b || pb >= e) continue;
    const std::size_t from = std::max(b, pb) - pb, to = std::min(e, pe) - pb;
    out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(from), p.begin() + static_cast<std::ptrdiff_t>(to));
  }
  return out;
}

std::vector<Partition> cut(const TimeSeries& series, const std::vector<std::size_t>& sizes) {
  std::vector<Partition> out;
  std::size_t pos = 0;
  for (std::size_t s : sizes) {
    if (s == 0) throw Error(ErrorCode::InvalidConfig, "empty raw partition");
    if (pos + s > series.size()) throw Error(ErrorCode::ShapeError, "partition sizes exceed the series");
    out.emplace_back(series.points().begin() + static_cast<std::ptrdiff_t>(pos),
                     series.points().begin() + static_cast<std::ptrdiff_t>(pos + s));
    pos += s;
  }
  if (pos != series.size()) throw Error(ErrorCode::ShapeError, "partition sizes do not cover the series");
  return out;
}

}  // namespace

Job compress_job(std::vector<Partition> raw, const CompressionConfig& cfg, std::size_t prune_chunks) {
  cfg.validate();
  if (prune_chunks == 0) throw Error(ErrorCode::InvalidConfig, "prune chunk count must be positive");
  Job job(std::make_shared<const PartitionedDataset>(std::move(raw), "source"), "raw");
  job.then({"mark", "mark_inflections_chunk", mark_chunk, {}, {}});
  job.then({"combine", "combine_inflections",
            [prune_chunks](const PartitionedDataset& marked, std::size_t i) {
              return combine(marked, i, std::min(prune_chunks, marked.record_count()));
            },
            {},
            [prune_chunks](const PartitionedDataset& marked) {
              return std::min(prune_chunks, marked.record_count());
            }});
  job.then({"prune_chunk", "map_points",
            [cfg](const PartitionedDataset& chunks, std::size_t i) { return prune_chunk(chunks, i, cfg); }, {}, {}});
  job.then({"boundary_merge", "boundary_merge", {},
            [cfg](const PartitionedDataset& spec, std::span<const Partition> done, std::size_t i) {
              return merge_chunk(spec, done, i, cfg);
            },
            {}});
  return job;
}

ParallelCompressResult parallel_compress(const TimeSeries& series, const CompressionConfig& cfg, WorkerPool& pool,
                                         const std::vector<std::size_t>& partition_sizes, std::size_t prune_chunks) {
  auto job = compress_job(cut(series, partition_sizes), cfg, prune_chunks);
  auto exec = execute(job, pool);
  ParallelCompressResult r;
  r.abstraction = AbstractSeries(to_knots(exec.output->collect()), series.size());
  r.shuffle_bytes = exec.shuffle_bytes();
  r.busy_variance = exec.busy_variance();
  r.stages = std::move(exec.stages);
  return r;
}

ParallelCompressResult parallel_compress(const TimeSeries& series, const CompressionConfig& cfg, WorkerPool& pool,
                                         std::size_t partitions, std::size_t prune_chunks) {
  if (partitions == 0) throw Error(ErrorCode::InvalidConfig, "partition count must be positive");
  const std::size_t parts = std::min(partitions, series.size());
  std::vector<std::size_t> sizes(parts);
  for (std::size_t i = 0; i < parts; ++i) sizes[i] = (i + 1) * series.size() / parts - i * series.size() / parts;
  return parallel_compress(series, cfg, pool, sizes, prune_chunks ? prune_chunks : parts);
}

}  // namespace tsperiod::pipeline
