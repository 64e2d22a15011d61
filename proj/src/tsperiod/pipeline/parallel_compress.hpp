#pragma once

#include <cstddef>
#include <vector>

#include "tsperiod/compression.hpp"
#include "tsperiod/pipeline/executor.hpp"

namespace tsperiod::pipeline {

struct ParallelCompressResult {
  AbstractSeries abstraction;
  std::vector<StageMetrics> stages;
  std::size_t shuffle_bytes = 0;
  double busy_variance = 0.0;
};

/// Lineage: source -> mark_inflections_chunk -> combine_inflections ->
/// prune_chunk (map_points) -> boundary_merge.
Job compress_job(std::vector<Partition> raw, const CompressionConfig& cfg, std::size_t prune_chunks);

/// Chunk-parallel compression; output equals compress() for any chunking.
ParallelCompressResult parallel_compress(const TimeSeries& series, const CompressionConfig& cfg, WorkerPool& pool,
                                         std::size_t partitions, std::size_t prune_chunks = 0);

/// Same, with explicit raw partition sizes (all positive, summing to n).
ParallelCompressResult parallel_compress(const TimeSeries& series, const CompressionConfig& cfg, WorkerPool& pool,
                                         const std::vector<std::size_t>& partition_sizes, std::size_t prune_chunks);

}  // namespace tsperiod::pipeline
