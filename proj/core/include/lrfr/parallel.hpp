#pragma once

#include <functional>

#include "lrfr/common.hpp"

namespace lrfr {

/// 0 or negative request resolves to the hardware concurrency.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each item must
/// write only to its own output slot, so the result is identical for any
/// thread count. If items throw, the exception of the smallest index is
/// rethrown after all workers have stopped.
void run_indexed(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace lrfr
