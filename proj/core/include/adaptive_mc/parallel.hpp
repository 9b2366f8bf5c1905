#pragma once

#include <cstddef>
#include <functional>

namespace adaptive_mc {

/// Worker count: ADAPTIVE_MC_THREADS when set to a positive integer,
/// otherwise std::thread::hardware_concurrency() (at least 1).
std::size_t worker_count();

/// Calls body(i) for every i in [0, count) on up to worker_count() threads.
/// Each index must write only to its own output slot; results are then
/// independent of scheduling. The first exception thrown by any body is
/// rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace adaptive_mc
