#pragma once

#include <cstddef>
#include <functional>

namespace confgeo {

// Worker count: CONFGEO_THREADS when set to a positive value, otherwise
// the hardware concurrency.
int thread_count();

// Calls fn(i) for i in [0, n) on up to thread_count() threads. Callers
// write into pre-sized slots so reductions afterwards run in index order
// and results do not depend on scheduling. The first exception thrown by
// any fn is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace confgeo
