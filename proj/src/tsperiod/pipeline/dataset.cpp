#include "tsperiod/pipeline/dataset.hpp"

#include <cstdint>
#include <cstring>

#include "tsperiod/error.hpp"

namespace tsperiod::pipeline {

PartitionedDataset::PartitionedDataset(std::vector<Partition> partitions, std::string transform,
                                       std::shared_ptr<const PartitionedDataset> parent)
    : partitions_(std::move(partitions)), transform_(std::move(transform)), parent_(std::move(parent)) {
  if (partitions_.empty()) throw Error(ErrorCode::InvalidConfig, "dataset needs at least one partition");
}

std::size_t PartitionedDataset::record_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : partitions_) n += p.size();
  return n;
}

std::vector<Record> PartitionedDataset::collect() const {
  std::vector<Record> out;
  out.reserve(record_count());
  for (const auto& p : partitions_) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Partition> split_even(std::span<const Record> records, std::size_t parts) {
  if (parts == 0) throw Error(ErrorCode::InvalidConfig, "partition count must be positive");
  std::vector<Partition> out(parts);
  const std::size_t n = records.size();
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t b = i * n / parts, e = (i + 1) * n / parts;
    out[i].assign(records.begin() + static_cast<std::ptrdiff_t>(b), records.begin() + static_cast<std::ptrdiff_t>(e));
  }
  return out;
}

std::vector<unsigned char> serialize(const std::vector<Partition>& partitions) {
  std::size_t total = 8;
  for (const auto& p : partitions) total += 8 + p.size() * 16;
  std::vector<unsigned char> out(total);
  unsigned char* w = out.data();
  auto put64 = [&w](std::uint64_t v) {
    std::memcpy(w, &v, 8);
    w += 8;
  };
  auto putd = [&w](double v) {
    std::memcpy(w, &v, 8);
    w += 8;
  };
  put64(partitions.size());
  for (const auto& p : partitions) {
    put64(p.size());
    for (const auto& r : p) {
      putd(r.t);
      putd(r.x);
    }
  }
  return out;
}

std::vector<Partition> deserialize(std::span<const unsigned char> bytes) {
  std::size_t pos = 0;
  auto get64 = [&]() {
    if (pos + 8 > bytes.size()) throw Error(ErrorCode::ParseError, "truncated partition buffer");
    std::uint64_t v;
    std::memcpy(&v, bytes.data() + pos, 8);
    pos += 8;
    return v;
  };
  auto getd = [&]() {
    const std::uint64_t bits = get64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  };
  std::vector<Partition> out(get64());
  for (auto& p : out) {
    p.resize(get64());
    for (auto& r : p) {
      r.t = getd();
      r.x = getd();
    }
  }
  return out;
}

}  // namespace tsperiod::pipeline
