#include "tsperiod/pipeline/worker_pool.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <limits>

#include "tsperiod/error.hpp"

namespace tsperiod::pipeline {
namespace {
thread_local bool in_task = false;
}

struct WorkerPool::Job {
  const Task* fn = nullptr;
  std::size_t n = 0;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::size_t err_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr err;
  std::vector<double> busy_ms;
};

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers) {
  if (workers_ == 0) throw Error(ErrorCode::InvalidConfig, "worker count must be at least 1");
  for (std::size_t w = 1; w < workers_; ++w) threads_.emplace_back([this, w] { worker_loop(w); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::drain(Job& job, std::size_t worker) {
  const bool outer = in_task;
  in_task = true;
  for (;;) {
    const std::size_t i = job.next.fetch_add(1);
    if (i >= job.n || job.failed.load()) break;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      (*job.fn)(i, worker);
    } catch (...) {
      std::lock_guard lock(job.err_mu);
      if (i < job.err_index) {
        job.err_index = i;
        job.err = std::current_exception();
      }
      job.failed.store(true);
    }
    job.busy_ms[worker] +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  in_task = outer;
}

void WorkerPool::worker_loop(std::size_t worker) {
  std::size_t seen = 0;
  for (;;) {
    Job* job = nullptr;
    {
      std::unique_lock lock(mu_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
    }
    drain(*job, worker);
    {
      std::lock_guard lock(mu_);
      --pending_;
    }
    done_.notify_all();
  }
}

std::vector<double> WorkerPool::parallel_for(std::size_t n, const Task& fn) {
  Job job;
  job.fn = &fn;
  job.n = n;
  job.busy_ms.assign(workers_, 0.0);
  if (workers_ == 1 || in_task || n <= 1) {
    drain(job, 0);
  } else {
    {
      std::lock_guard lock(mu_);
      job_ = &job;
      pending_ = workers_ - 1;
      ++generation_;
    }
    wake_.notify_all();
    drain(job, 0);
    std::unique_lock lock(mu_);
    // Every worker must check in for this generation before `job` dies.
    done_.wait(lock, [&] { return pending_ == 0; });
    job_ = nullptr;
  }
  if (job.err) std::rethrow_exception(job.err);
  return job.busy_ms;
}

}  // namespace tsperiod::pipeline
