#pragma once

#include <functional>

namespace ks {

int hardware_threads();

// Run fn(i) for i in [0, n) on up to n_threads workers using a static
// contiguous partition. fn must only write to per-index slots; the partition
// does not affect results.
void parallel_for(int n, int n_threads, const std::function<void(int)>& fn);

} // namespace ks
