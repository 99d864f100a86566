#pragma once

#include <cstddef>
#include <functional>

namespace hjlab {

// Runs independent work items on a fixed number of threads.  Items write to
// their own result slots, so results never depend on the worker count.
class Executor {
 public:
  explicit Executor(int workers = 1);

  // Worker count from HJLAB_WORKERS, defaulting to the hardware concurrency.
  static Executor from_env();

  int workers() const { return workers_; }

  // Calls f(i) for i in [0, n).  If any call throws, the exception of the
  // lowest failing index is rethrown after all workers finish.
  void for_each(std::size_t n, const std::function<void(std::size_t)>& f) const;

 private:
  int workers_;
};

}  // namespace hjlab
