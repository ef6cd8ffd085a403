#pragma once

#include <functional>

namespace wkam {

// Worker cap: WKAM_THREADS when set (>= 1), else the hardware concurrency.
int max_threads();

// Runs task(0..n-1) on up to max_threads() workers. Tasks must write only
// their own slots; results are then identical for any worker count, which
// keeps artifacts reproducible.
void run_tasks(int n, const std::function<void(int)>& task);

}  // namespace wkam
