#pragma once

#include <cstddef>
#include <functional>

namespace clumplab {

// Worker count used by parallel_for; 1 runs inline. Results never depend on it.
void set_thread_count(int n);
int thread_count();

// Calls fn(i) for i in [0, n), split into contiguous blocks across workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace clumplab
