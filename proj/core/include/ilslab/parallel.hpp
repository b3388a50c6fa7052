#pragma once

#include <cstddef>
#include <functional>

namespace ilslab {

/// Worker count: ILSLAB_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Each index is handled exactly once;
/// callers write results into per-index slots so the outcome never depends
/// on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ilslab
