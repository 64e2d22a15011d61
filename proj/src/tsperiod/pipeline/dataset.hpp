#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tsperiod/series.hpp"

namespace tsperiod::pipeline {

using Record = TimePoint;
using Partition = std::vector<Record>;

/// Immutable partitioned collection with a lineage link to the dataset it was derived from.
class PartitionedDataset {
 public:
  PartitionedDataset(std::vector<Partition> partitions, std::string transform,
                     std::shared_ptr<const PartitionedDataset> parent = nullptr);

  std::size_t partition_count() const noexcept { return partitions_.size(); }
  const Partition& partition(std::size_t i) const { return partitions_.at(i); }
  const std::vector<Partition>& partitions() const noexcept { return partitions_; }
  const std::string& transform() const noexcept { return transform_; }
  const std::shared_ptr<const PartitionedDataset>& parent() const noexcept { return parent_; }

  std::size_t record_count() const noexcept;
  /// All records in partition order.
  std::vector<Record> collect() const;

 private:
  std::vector<Partition> partitions_;
  std::string transform_;
  std::shared_ptr<const PartitionedDataset> parent_;
};

/// Contiguous split into `parts` slices whose sizes differ by at most one.
std::vector<Partition> split_even(std::span<const Record> records, std::size_t parts);

/// Wire format used at wide edges: per partition a u64 count, then (t, x) doubles.
std::vector<unsigned char> serialize(const std::vector<Partition>& partitions);
std::vector<Partition> deserialize(std::span<const unsigned char> bytes);

}  // namespace tsperiod::pipeline
