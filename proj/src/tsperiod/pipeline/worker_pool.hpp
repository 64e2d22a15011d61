#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tsperiod::pipeline {

/// Fixed-size pool. The calling thread acts as worker 0, so `workers` = 1
/// spawns no threads at all.
class WorkerPool {
 public:
  using Task = std::function<void(std::size_t task, std::size_t worker)>;

  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const noexcept { return workers_; }

  /// Runs every task once and blocks until all are done. If tasks throw, the
  /// exception of the lowest failing index is rethrown. Returns busy
  /// milliseconds per worker. Calls made from inside a task run inline.
  std::vector<double> parallel_for(std::size_t n, const Task& fn);

 private:
  struct Job;
  void worker_loop(std::size_t worker);
  void drain(Job& job, std::size_t worker);

  std::size_t workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable wake_;
  std::condition_variable done_;
  Job* job_ = nullptr;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stop_ = false;
};

}  // namespace tsperiod::pipeline
