#pragma once

#include <cstddef>
#include <functional>

namespace anisoframe {

// Worker count: ANISOFRAME_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, n). Each index is handled exactly once; fn must not share mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace anisoframe
