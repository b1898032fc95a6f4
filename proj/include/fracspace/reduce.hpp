#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracspace {

// Pairwise summation with a fixed recursion order. Every norm and integral
// in the library reduces through this so results do not depend on the number
// of worker threads.
inline double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n <= 32) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(std::span<const double>(x.data(), x.size()));
}

} // namespace fracspace
