#pragma once

#include <cstddef>
#include <functional>

namespace lindblad {

/// Worker count: min(hardware_concurrency, LINDBLAD_RELAX_THREADS when set).
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Falls back to a
/// plain loop when n is small or only one worker is available. Exceptions from
/// workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lindblad
