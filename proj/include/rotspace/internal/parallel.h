#ifndef ROTSPACE_INTERNAL_PARALLEL_H_
#define ROTSPACE_INTERNAL_PARALLEL_H_

#include <algorithm>
#include <cstddef>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace rotspace::internal {

// A fixed number of workers, even beyond the hardware concurrency, so that
// multi-threaded code paths are exercised on small machines too.
class WorkerArena {
 public:
  explicit WorkerArena(int threads)
      : threads_(std::max(1, threads)),
        limit_(tbb::global_control::max_allowed_parallelism, threads_),
        arena_(threads_) {}

  int threads() const { return threads_; }

  // Calls body(i) for every i in [0, n). Iterations must write disjoint data.
  template <typename Body>
  void ForEach(std::size_t n, const Body& body) {
    if (threads_ == 1) {
      for (std::size_t i = 0; i < n; ++i) body(i);
      return;
    }
    arena_.execute([&] {
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n),
                        [&](const tbb::blocked_range<std::size_t>& range) {
                          for (std::size_t i = range.begin(); i != range.end(); ++i) body(i);
                        });
    });
  }

 private:
  int threads_;
  tbb::global_control limit_;
  tbb::task_arena arena_;
};

}  // namespace rotspace::internal

#endif  // ROTSPACE_INTERNAL_PARALLEL_H_
