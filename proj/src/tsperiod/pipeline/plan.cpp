#include "tsperiod/pipeline/plan.hpp"

#include <algorithm>
#include <queue>

#include "tsperiod/error.hpp"

namespace tsperiod::pipeline {

DependencyKind classify_dependency(std::string_view transform) {
  if (transform == "source" || transform == "map_points" || transform == "mark_inflections_chunk" ||
      transform == "boundary_merge")
    return DependencyKind::Narrow;
  if (transform == "combine_inflections" || transform == "similarity_pairs" || transform == "group_reduce" ||
      transform == "collect")
    return DependencyKind::Wide;
  throw Error(ErrorCode::UnknownTransform, "unknown transformation tag '" + std::string(transform) + "'");
}

StagePlan plan_stages(const LineageGraph& graph, std::size_t partitions) {
  const std::size_t n = graph.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p : graph[i].parents) {
      if (p >= n) throw Error(ErrorCode::IndexError, "lineage parent out of range");
      children[p].push_back(i);
      ++indegree[i];
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t c : children[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (order.size() != n) throw Error(ErrorCode::CyclicLineage, "lineage graph has a cycle");

  std::vector<std::size_t> stage_of(n, 0);
  std::size_t max_stage = 0;
  for (std::size_t v : order) {
    const bool wide = classify_dependency(graph[v].transform) == DependencyKind::Wide;
    std::size_t s = 0;
    for (std::size_t p : graph[v].parents) s = std::max(s, stage_of[p] + (wide ? 1 : 0));
    stage_of[v] = s;
    max_stage = std::max(max_stage, s);
  }
  StagePlan plan;
  if (n == 0) return plan;
  plan.stages.resize(max_stage + 1);
  for (std::size_t s = 0; s <= max_stage; ++s) plan.stages[s].id = s;
  for (std::size_t v : order) {
    auto& st = plan.stages[stage_of[v]];
    st.nodes.push_back(v);
    st.tasks = partitions;  // one task per partition runs the fused chain
  }
  return plan;
}

}  // namespace tsperiod::pipeline
