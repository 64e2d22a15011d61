#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tsperiod/pipeline/dataset.hpp"

namespace tsperiod::pipeline {

struct WindowBatch {
  std::int64_t window_id = 0;  ///< j in [j*slide, j*slide + window)
  double start_t = 0.0;
  double end_t = 0.0;
  std::vector<Partition> partitions;
  bool partial = false;

  std::size_t size() const noexcept;
  std::vector<Record> points() const;
};

/// Windows on the grid j*slide, starting with the one that holds the first
/// point; empty windows are skipped. A window is partial when it
/// reaches past the stream's covered time (last timestamp + one sampling step).
std::vector<WindowBatch> window_split(std::span<const Record> stream, double window, double slide,
                                      std::size_t partitions = 1);

/// Builds one batch from the points of window j.
WindowBatch make_window(std::span<const Record> stream, std::int64_t j, double window, double slide,
                        std::size_t partitions, bool partial);

}  // namespace tsperiod::pipeline
