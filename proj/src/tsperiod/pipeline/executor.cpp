#include "tsperiod/pipeline/executor.hpp"

#include <chrono>
#include <sstream>

#include "tsperiod/error.hpp"

namespace tsperiod::pipeline {

Job::Job(std::shared_ptr<const PartitionedDataset> source, std::string name) : source_(std::move(source)) {
  if (!source_) throw Error(ErrorCode::InvalidConfig, "job needs a source dataset");
  graph_.push_back({std::move(name), "source", {}});
}

Job& Job::then(Operator op) {
  classify_dependency(op.transform);
  if (!op.fn && !op.ordered) throw Error(ErrorCode::InvalidConfig, "operator '" + op.name + "' has no body");
  graph_.push_back({op.name, op.transform, {graph_.size() - 1}});
  ops_.push_back(std::move(op));
  return *this;
}

std::size_t ExecutionResult::shuffle_bytes() const noexcept {
  std::size_t b = 0;
  for (const auto& s : stages) b += s.shuffle_bytes;
  return b;
}

double ExecutionResult::busy_variance() const {
  std::vector<double> total;
  for (const auto& s : stages) {
    total.resize(std::max(total.size(), s.busy_ms_per_worker.size()), 0.0);
    for (std::size_t w = 0; w < s.busy_ms_per_worker.size(); ++w) total[w] += s.busy_ms_per_worker[w];
  }
  if (total.empty()) return 0.0;
  double mean = 0.0;
  for (double v : total) mean += v;
  mean /= static_cast<double>(total.size());
  double var = 0.0;
  for (double v : total) var += (v - mean) * (v - mean);
  return var / static_cast<double>(total.size());
}

ExecutionResult execute(const Job& job, WorkerPool& pool) {
  const auto plan = plan_stages(job.lineage());
  std::vector<std::shared_ptr<const PartitionedDataset>> data(job.lineage().size());
  data[0] = job.source();
  ExecutionResult result;
  for (const auto& stage : plan.stages) {
    StageMetrics m;
    m.stage = stage.id;
    m.busy_ms_per_worker.assign(pool.size(), 0.0);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t node : stage.nodes) {
      if (node == 0) continue;
      const Operator& op = job.operators()[node - 1];
      std::shared_ptr<const PartitionedDataset> parent = data[job.lineage()[node].parents.front()];
      if (classify_dependency(op.transform) == DependencyKind::Wide) {
        // Everything crossing a wide edge goes through the wire format.
        const auto bytes = serialize(parent->partitions());
        m.shuffle_bytes += bytes.size();
        parent = std::make_shared<const PartitionedDataset>(deserialize(bytes), parent->transform(), parent->parent());
      }
      const std::size_t count = op.output_partitions ? op.output_partitions(*parent) : parent->partition_count();
      std::vector<Partition> out(count);
      if (op.ordered) {
        const auto s0 = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < count; ++i)
          out[i] = op.ordered(*parent, std::span<const Partition>(out.data(), i), i);
        m.busy_ms_per_worker[0] +=
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s0).count();
      } else {
        const auto busy = pool.parallel_for(count, [&](std::size_t i, std::size_t) { out[i] = op.fn(*parent, i); });
        for (std::size_t w = 0; w < busy.size(); ++w) m.busy_ms_per_worker[w] += busy[w];
      }
      m.tasks += count;
      data[node] = std::make_shared<const PartitionedDataset>(std::move(out), op.transform, data[job.lineage()[node].parents.front()]);
    }
    m.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    result.stages.push_back(std::move(m));
  }
  result.output = data.back();
  return result;
}

std::string to_json(const StageMetrics& m) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << "{\"stage\":" << m.stage << ",\"tasks\":" << m.tasks << ",\"wall_ms\":" << m.wall_ms
     << ",\"shuffle_bytes\":" << m.shuffle_bytes << ",\"busy_ms_per_worker\":[";
  for (std::size_t i = 0; i < m.busy_ms_per_worker.size(); ++i) os << (i ? "," : "") << m.busy_ms_per_worker[i];
  os << "]}";
  return os.str();
}

}  // namespace tsperiod::pipeline
