#include "sndeco/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sndeco {

unsigned Parallelism::resolved() const {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("SNDECO_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware count
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n_tasks, const Parallelism& par,
                  const std::function<void(std::size_t, unsigned)>& body) {
  const unsigned n_workers = static_cast<unsigned>(
      std::min<std::size_t>(par.resolved(), std::max<std::size_t>(n_tasks, 1)));
  if (n_workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) body(t, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        for (;;) {
          const std::size_t t = next.fetch_add(1);
          if (t >= n_tasks) return;
          try {
            body(t, w);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(n_tasks);
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sndeco
