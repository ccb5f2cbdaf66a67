#pragma once

#include <functional>

namespace opconvex {

/// Worker count for parallel scans: OPCONVEX_THREADS when set (clamped to
/// hardware), otherwise 1.  Single-threaded by default so runs are easy to
/// reason about; parallel runs must produce identical reports anyway.
int thread_budget();

/// Runs fn(i) for i in [0, n) split into contiguous chunks across
/// thread_budget() workers.  Callers keep determinism by writing per-index
/// results into preallocated storage and reducing afterwards.
void parallel_for(long n, const std::function<void(long)>& fn);

} // namespace opconvex
