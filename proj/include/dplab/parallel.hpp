#pragma once

#include <cstddef>
#include <functional>

namespace dplab {

/// Worker threads used by replication loops: the override if set, else
/// DPLAB_THREADS, else the hardware concurrency. Always >= 1.
std::size_t thread_count();
/// 0 clears the override.
void set_thread_count(std::size_t n);

/// Calls body(i) for every i in [0, n), spread over thread_count() workers.
/// Bodies must write only to slots owned by their index. The first
/// exception (by index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dplab
