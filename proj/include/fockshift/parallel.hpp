#pragma once

#include <cstddef>
#include <functional>

namespace fockshift {

/// Worker count: hardware concurrency, capped by FOCKSHIFT_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Indices are handed out in contiguous
/// chunks; callers write results into per-index slots so the outcome does
/// not depend on scheduling. The first exception thrown by any worker is
/// rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fockshift
