#pragma once

#include <cstddef>
#include <functional>

namespace lcs {

// Worker count: LCS_THREADS if set, else the hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, n); exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lcs
