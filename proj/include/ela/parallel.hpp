#pragma once

#include <cstddef>
#include <functional>

namespace ela {

/// Worker count from the ELA_WORKERS environment variable; defaults to the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ela
