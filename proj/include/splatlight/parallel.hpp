// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace splatlight {

// Persistent worker pool. Work is split into contiguous index ranges, one per
// worker, so every output element is computed by exactly one thread with a
// fixed internal reduction order. Results are therefore bit-identical for any
// thread count, including 1.
class ThreadPool {
 public:
  static ThreadPool& instance() {
    static ThreadPool pool;
    return pool;
  }

  ~ThreadPool() { shutdown(); }

  void set_thread_count(int n) {
    if (n < 1) n = 1;
    if (n == threads_requested_) return;
    shutdown();
    threads_requested_ = n;
    for (int i = 1; i < n; i++)
      workers_.emplace_back([this, i] { worker_loop(i); });
  }

  int thread_count() const { return threads_requested_; }

  // fn(begin, end) over [0, n) split into one contiguous range per thread.
  void parallel_ranges(int64_t n, const std::function<void(int64_t, int64_t)>& fn) {
    if (n <= 0) return;
    int workers = threads_requested_;
    if (workers <= 1 || n < 2 * workers) {
      fn(0, n);
      return;
    }
    {
      std::unique_lock<std::mutex> lock(mutex_);
      job_ = &fn;
      job_n_ = n;
      job_workers_ = workers;
      pending_ = workers - 1;
      generation_++;
      cv_start_.notify_all();
    }
    // Range 0 runs on the calling thread.
    int64_t chunk = (n + workers - 1) / workers;
    fn(0, std::min<int64_t>(chunk, n));
    std::unique_lock<std::mutex> lock(mutex_);
    cv_done_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
  }

 private:
  ThreadPool() = default;

  void worker_loop(int index) {
    uint64_t seen = 0;
    for (;;) {
      const std::function<void(int64_t, int64_t)>* job = nullptr;
      int64_t n = 0;
      int workers = 0;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        job = job_;
        n = job_n_;
        workers = job_workers_;
      }
      if (job && index < workers) {
        int64_t chunk = (n + workers - 1) / workers;
        int64_t begin = index * chunk;
        int64_t end = std::min<int64_t>(begin + chunk, n);
        if (begin < end) (*job)(begin, end);
      }
      {
        std::unique_lock<std::mutex> lock(mutex_);
        if (--pending_ == 0) cv_done_.notify_all();
      }
    }
  }

  void shutdown() {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      stop_ = true;
      cv_start_.notify_all();
    }
    for (auto& t : workers_) t.join();
    workers_.clear();
    stop_ = false;
  }

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable cv_start_, cv_done_;
  const std::function<void(int64_t, int64_t)>* job_ = nullptr;
  int64_t job_n_ = 0;
  int job_workers_ = 1;
  int pending_ = 0;
  uint64_t generation_ = 0;
  bool stop_ = false;
  int threads_requested_ = 1;
};

inline void set_thread_count(int n) { ThreadPool::instance().set_thread_count(n); }
inline int thread_count() { return ThreadPool::instance().thread_count(); }

template <typename Fn>
inline void parallel_for(int64_t n, Fn&& fn) {
  std::function<void(int64_t, int64_t)> body = [&fn](int64_t begin, int64_t end) {
    for (int64_t i = begin; i < end; i++) fn(i);
  };
  ThreadPool::instance().parallel_ranges(n, body);
}

}  // namespace splatlight
