#pragma once

#include <cstddef>
#include <functional>

namespace pddcov {

// Runs body(i) for i in [0, count). threads <= 0 means hardware concurrency.
// Indices are handed out dynamically; bodies must only write to
// index-addressed slots so results do not depend on the thread count. The
// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

int effective_threads(int requested);

}  // namespace pddcov
