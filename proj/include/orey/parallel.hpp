#pragma once

#include <cstddef>
#include <functional>

namespace orey {

/// Worker count: hardware concurrency, capped by the OREY_THREADS
/// environment variable when it holds a positive integer.
std::size_t thread_count();

/// Calls body(i) for i in [0, n) over contiguous chunks. Each index is
/// handled exactly once; results must go to disjoint slots. The first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace orey
