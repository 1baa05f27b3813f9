#include "ks/threading.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace ks {

int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for(int n, int n_threads, const std::function<void(int)>& fn) {
    n_threads = std::clamp(n_threads, 1, n > 0 ? n : 1);
    if (n_threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(n) * w / n_threads);
        const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / n_threads);
        workers.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

} // namespace ks
