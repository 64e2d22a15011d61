#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tsperiod/pipeline/dataset.hpp"
#include "tsperiod/pipeline/plan.hpp"
#include "tsperiod/pipeline/worker_pool.hpp"

namespace tsperiod::pipeline {

struct Operator {
  std::string name;
  std::string transform;
  /// Builds output partition `index` from the parent. Narrow operators only
  /// touch a bounded neighbourhood of `index`; wide ones may read everything.
  std::function<Partition(const PartitionedDataset& parent, std::size_t index)> fn;
  /// Optional sequential variant: partitions are built in index order and see
  /// the outputs already produced by this operator.
  std::function<Partition(const PartitionedDataset& parent, std::span<const Partition> done, std::size_t index)>
      ordered;
  /// Output partition count; unset keeps the parent's count.
  std::function<std::size_t(const PartitionedDataset& parent)> output_partitions;
};

/// Linear lineage of operators over one source dataset.
class Job {
 public:
  explicit Job(std::shared_ptr<const PartitionedDataset> source, std::string name = "source");
  Job& then(Operator op);

  const LineageGraph& lineage() const noexcept { return graph_; }
  const std::vector<Operator>& operators() const noexcept { return ops_; }
  const std::shared_ptr<const PartitionedDataset>& source() const noexcept { return source_; }

 private:
  std::shared_ptr<const PartitionedDataset> source_;
  LineageGraph graph_;
  std::vector<Operator> ops_;  // ops_[i] produces node i + 1
};

struct StageMetrics {
  std::size_t stage = 0;
  std::size_t tasks = 0;
  double wall_ms = 0.0;
  std::size_t shuffle_bytes = 0;
  std::vector<double> busy_ms_per_worker;
};

struct ExecutionResult {
  std::shared_ptr<const PartitionedDataset> output;
  std::vector<StageMetrics> stages;
  std::size_t shuffle_bytes() const noexcept;
  /// Variance of total busy time across workers.
  double busy_variance() const;
};

ExecutionResult execute(const Job& job, WorkerPool& pool);

std::string to_json(const StageMetrics& m);

}  // namespace tsperiod::pipeline
