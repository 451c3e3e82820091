#pragma once

#include <cstddef>
#include <functional>

namespace iscore {

// Runs fn(0..n-1) on up to `threads` workers pulling from a shared counter.
// Results must be written to per-index slots; with seed streams derived per
// index, output is identical for any thread count. threads <= 1 runs inline.
// The first exception thrown by a task is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// ISCORE_THREADS if set, otherwise hardware concurrency.
int default_thread_count();

} // namespace iscore
