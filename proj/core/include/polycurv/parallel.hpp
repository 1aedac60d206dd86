#pragma once

#include <cstddef>
#include <functional>

namespace polycurv {

/// Number of worker threads used by parallel loops. Defaults to the hardware
/// concurrency; the POLYCURV_THREADS environment variable caps it.
int thread_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks so
/// each index is computed exactly once and written to its own slot; callers
/// get bit-identical results regardless of the thread count as long as fn(i)
/// only writes to state owned by index i. Falls back to a serial loop for
/// small n or when only one thread is available.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace polycurv
