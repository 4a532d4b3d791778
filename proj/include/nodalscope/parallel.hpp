#pragma once

#include <cstddef>
#include <functional>

namespace nodalscope {

/// Worker count: NODALSCOPE_THREADS if set and positive, else hardware concurrency.
int default_threads();

/// Calls fn(i) for i in [0, n) across `threads` workers (0 = default_threads()).
/// Work is split into contiguous chunks; fn must be safe to call concurrently.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace nodalscope
