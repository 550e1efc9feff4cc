#pragma once

#include <cstddef>
#include <functional>

namespace quadsketch {

/// Worker cap: QUADSKETCH_THREADS if set and positive, else hardware concurrency.
std::size_t thread_cap();

/// Runs body(i) for i in [0, count) on up to thread_cap() threads. Each index
/// runs exactly once; callers keep results per index, so output order never
/// depends on scheduling. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace quadsketch
