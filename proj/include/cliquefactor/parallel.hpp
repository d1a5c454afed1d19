#pragma once

#include <cstddef>
#include <functional>

namespace cliquefactor {

/// Worker cap: CLIQUE_FACTOR_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
std::size_t thread_limit();

/// Runs body(i) for i in [0, count) on up to thread_limit() threads. Bodies
/// must write only to per-index state; the first exception thrown (lowest
/// index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cliquefactor
