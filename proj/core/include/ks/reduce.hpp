#pragma once

#include <cstddef>
#include <span>

namespace ks {

// Pairwise summation. The summation tree depends only on the element count,
// so results are bit-identical regardless of how the terms were produced.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace ks
