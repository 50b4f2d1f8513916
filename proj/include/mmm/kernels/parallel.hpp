#pragma once

#include <cstddef>
#include <functional>

namespace mmm {

// Worker count: MMM_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Calls body(i) for every i in [0, n), split across worker_count() threads
// in contiguous blocks. The first exception thrown by any worker is
// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mmm
