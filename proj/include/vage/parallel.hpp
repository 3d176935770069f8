#pragma once

#include <cstddef>
#include <functional>

namespace vage {

/// Thread count from VAGE_THREADS, else hardware concurrency (at least 1).
unsigned default_threads();

/// Calls body(i) for every i in [0, n) using up to `threads` workers
/// (0 means default_threads()). Each index runs exactly once; callers write
/// results into per-index slots and reduce afterwards in index order, which
/// keeps output independent of the thread count. The first exception thrown
/// by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace vage
