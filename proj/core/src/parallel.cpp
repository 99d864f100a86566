#include "hjlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "hjlab/error.hpp"

namespace hjlab {

Executor::Executor(int workers) : workers_(std::max(1, workers)) {}

Executor Executor::from_env() {
  if (const char* env = std::getenv("HJLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024) {
      throw Error(ErrorKind::kRejectedInput, std::string("HJLAB_WORKERS must be a positive integer, got '") + env + "'");
    }
    return Executor(static_cast<int>(v));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return Executor(hw == 0 ? 1 : static_cast<int>(hw));
}

void Executor::for_each(std::size_t n, const std::function<void(std::size_t)>& f) const {
  if (n == 0) return;
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers_), n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw - 1);
    for (std::size_t w = 1; w < nw; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hjlab
