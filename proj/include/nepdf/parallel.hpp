#pragma once

#include <functional>

namespace nepdf {

//! Worker cap from the NEPDF_THREADS environment variable
//! (unset or 0 = hardware concurrency).
int worker_count();

//! Runs fn(worker, begin, end) over contiguous chunks of [0, n). Callers must
//! write results to per-index slots so the outcome is identical to a
//! sequential run for any worker count.
void parallel_for_chunks(int n,
                         const std::function<void(int, int, int)>& fn);

//! Runs fn(i) for every i in [0, n), possibly on several threads.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace nepdf
