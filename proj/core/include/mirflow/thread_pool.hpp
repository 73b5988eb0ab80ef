// Fixed-size worker pool used by the dataflow executor. Work is handed out
// as an index range; workers claim indices through an atomic cursor so
// uneven task costs balance out.
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mirflow {

class ThreadPool {
 public:
  // workers is the total degree of parallelism including the calling
  // thread; 1 means fully inline execution with no threads spawned.
  explicit ThreadPool(std::size_t workers);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t worker_count() const { return spawned_.size() + 1; }

  // Runs fn(i) for every i in [0, count), blocking until all complete.
  // If any invocation throws, the exception from the smallest index is
  // rethrown after the whole batch has drained. Not reentrant.
  void run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop();
  void run_slice(std::size_t count, const std::function<void(std::size_t)>& fn);

  std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::size_t count_ = 0;
  const std::function<void(std::size_t)>* fn_ = nullptr;
  std::atomic<std::size_t> next_{0};
  std::size_t done_ = 0;
  std::size_t err_index_ = 0;
  std::exception_ptr err_;
  std::vector<std::thread> spawned_;
};

}  // namespace mirflow
