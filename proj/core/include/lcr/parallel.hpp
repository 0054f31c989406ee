#pragma once

#include <functional>

namespace lcr {

// Worker cap: LIGHTCONE_RDM_THREADS if set (>= 1), else hardware threads.
int max_threads();

// Runs fn(0..count-1) on up to max_threads() workers. Exceptions from the
// body are rethrown on the caller thread; results must be written to
// per-index slots to keep output ordering canonical.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace lcr
