#pragma once

#include <cstddef>
#include <functional>

namespace sndeco {

/// Number of worker threads. 0 means "use the default", which is the
/// SNDECO_THREADS environment variable if set, else the hardware count.
struct Parallelism {
  unsigned workers = 0;
  unsigned resolved() const;
};

/// Calls body(task, worker) for every task in [0, n_tasks). Tasks are
/// handed out dynamically; `worker` is in [0, resolved workers) and lets the
/// body pick per-worker scratch space. The body must only write to state
/// owned by its task or its worker.
void parallel_for(std::size_t n_tasks, const Parallelism& par,
                  const std::function<void(std::size_t, unsigned)>& body);

}  // namespace sndeco
