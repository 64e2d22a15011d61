#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tsperiod::pipeline {

enum class DependencyKind { Narrow, Wide };

/// Registered tags: source, map_points, mark_inflections_chunk, boundary_merge,
/// combine_inflections, similarity_pairs, group_reduce, collect.
DependencyKind classify_dependency(std::string_view transform);

struct LineageNode {
  std::string name;
  std::string transform;
  std::vector<std::size_t> parents;
};

using LineageGraph = std::vector<LineageNode>;

struct Stage {
  std::size_t id = 0;
  std::vector<std::size_t> nodes;  // topological order
  std::size_t tasks = 0;
};

struct StagePlan {
  std::vector<Stage> stages;
};

/// Fuses narrow chains and starts a new stage after every wide edge.
StagePlan plan_stages(const LineageGraph& graph, std::size_t partitions = 1);

}  // namespace tsperiod::pipeline
