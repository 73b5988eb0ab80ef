#include "mirflow/thread_pool.hpp"

#include <limits>

namespace mirflow {

ThreadPool::ThreadPool(std::size_t workers) {
  if (workers < 1) workers = 1;
  spawned_.reserve(workers - 1);
  for (std::size_t i = 0; i + 1 < workers; ++i) {
    spawned_.emplace_back([this] { worker_loop(); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lk(mu_);
    stop_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : spawned_) t.join();
}

void ThreadPool::worker_loop() {
  std::uint64_t seen = 0;
  for (;;) {
    std::size_t count;
    const std::function<void(std::size_t)>* fn;
    {
      std::unique_lock<std::mutex> lk(mu_);
      work_cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      count = count_;
      fn = fn_;
    }
    run_slice(count, *fn);
  }
}

void ThreadPool::run_slice(std::size_t count, const std::function<void(std::size_t)>& fn) {
  std::size_t completed = 0;
  for (;;) {
    std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
    if (i >= count) break;
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lk(mu_);
      if (!err_ || i < err_index_) {
        err_index_ = i;
        err_ = std::current_exception();
      }
    }
    ++completed;
  }
  if (completed > 0) {
    std::lock_guard<std::mutex> lk(mu_);
    done_ += completed;
    if (done_ == count) done_cv_.notify_all();
  }
}

void ThreadPool::run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (spawned_.empty()) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lk(mu_);
    count_ = count;
    fn_ = &fn;
    next_.store(0, std::memory_order_relaxed);
    done_ = 0;
    err_index_ = std::numeric_limits<std::size_t>::max();
    err_ = nullptr;
    ++generation_;
  }
  work_cv_.notify_all();
  run_slice(count, fn);
  std::exception_ptr err;
  {
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [&] { return done_ == count_; });
    fn_ = nullptr;
    err = err_;
    err_ = nullptr;
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace mirflow
