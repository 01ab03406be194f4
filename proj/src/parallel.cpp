#include "declab/parallel.hpp"

#include <algorithm>

namespace declab {

ThreadPool::ThreadPool(int threads) {
  int extra = std::max(0, threads - 1);
  workers_.reserve(extra);
  for (int i = 0; i < extra; ++i)
    workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::unique_lock<std::mutex> lk(mu_);
    stop_ = true;
  }
  cv_start_.notify_all();
  for (auto& w : workers_) w.join();
}

void ThreadPool::run_task() {
  // fields are only mutated under mu_ while no task is in flight; the
  // caller (main or a worker that just held the lock) sees a consistent
  // snapshot for the current generation
  const std::function<void(long, long)>* fn = fn_;
  const long begin = begin_, end = end_, chunk = chunk_;
  for (;;) {
    long c = next_chunk_.fetch_add(1, std::memory_order_relaxed);
    long i0 = begin + c * chunk;
    if (i0 >= end) break;
    long i1 = std::min(end, i0 + chunk);
    (*fn)(i0, i1);
  }
}

void ThreadPool::worker_loop() {
  long seen = 0;
  for (;;) {
    {
      std::unique_lock<std::mutex> lk(mu_);
      cv_start_.wait(lk, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      ++active_;
      // snapshot happens inside run_task; entering it while holding active_
      // blocks the next generation's assignment until we are done
    }
    run_task();
    {
      std::unique_lock<std::mutex> lk(mu_);
      if (--active_ == 0) cv_done_.notify_all();
    }
  }
}

void ThreadPool::parallel_for(long begin, long end, const std::function<void(long, long)>& fn) {
  if (begin >= end) return;
  if (workers_.empty() || end - begin == 1) {
    fn(begin, end);
    return;
  }
  {
    std::unique_lock<std::mutex> lk(mu_);
    // wait out any straggler still finishing a previous generation
    cv_done_.wait(lk, [&] { return active_ == 0; });
    fn_ = &fn;
    begin_ = begin;
    end_ = end;
    chunk_ = 1;
    next_chunk_.store(0, std::memory_order_relaxed);
    ++generation_;
  }
  cv_start_.notify_all();
  run_task();
  {
    std::unique_lock<std::mutex> lk(mu_);
    cv_done_.wait(lk, [&] { return active_ == 0; });
  }
}

void parallel_for(ThreadPool* pool, long begin, long end,
                  const std::function<void(long, long)>& fn) {
  if (pool) {
    pool->parallel_for(begin, end, fn);
  } else {
    if (begin < end) fn(begin, end);
  }
}

} // namespace declab
