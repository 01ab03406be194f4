#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace declab {

// Persistent worker pool for row-parallel stencils and per-sample sweep maps.
// parallel_for hands out fixed-size chunks, so per-chunk partial sums are
// independent of the thread count and results stay bit-reproducible.
// Intended to be driven from one orchestrating thread.
class ThreadPool {
public:
  explicit ThreadPool(int threads);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int thread_count() const { return static_cast<int>(workers_.size()) + 1; }

  // fn(i0, i1) processes the half-open index range [i0, i1).
  void parallel_for(long begin, long end, const std::function<void(long, long)>& fn);

private:
  void worker_loop();
  void run_task();

  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_start_, cv_done_;

  const std::function<void(long, long)>* fn_ = nullptr;
  long begin_ = 0, end_ = 0, chunk_ = 1;
  std::atomic<long> next_chunk_{0};

  long generation_ = 0;
  int active_ = 0;
  bool stop_ = false;
};

// Serial fallback when no pool is supplied.
void parallel_for(ThreadPool* pool, long begin, long end,
                  const std::function<void(long, long)>& fn);

} // namespace declab
