#pragma once

#include <cstddef>
#include <functional>

namespace exciton
{

// Worker count: EXCITON_INDEX_THREADS when set to a positive value, otherwise
// hardware concurrency (0 or unset means auto).
std::size_t thread_count();

// Runs body(i) for i in [0, count) across thread_count() workers in
// contiguous chunks. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

}  // namespace exciton
