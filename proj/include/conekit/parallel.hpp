#pragma once

#include <cstddef>
#include <functional>

namespace conekit {

// Worker count: CONEKIT_THREADS if set (>= 1), else the hardware concurrency.
unsigned thread_count();

// Runs f(i) for i in [0, n) on up to thread_count() threads. Callers write
// results into slot i, so output order never depends on scheduling. The
// first exception thrown by any f(i) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace conekit
