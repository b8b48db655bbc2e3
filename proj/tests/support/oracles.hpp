#pragma once

// Deliberately naive reference implementations. They share no code with the
// library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "asrs/evaluation.hpp"

namespace asrs::testing {

// 1-based Hyndman-Fan type 7: h = (n - 1) p + 1, interpolate between the
// floor(h)-th and ceil(h)-th order statistics, in long double.
inline double quantile_oracle(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const long double h = static_cast<long double>(values.size() - 1) * p + 1.0L;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    const long double a = values[lo - 1];
    const long double b = values[hi - 1];
    return static_cast<double>(a + (h - static_cast<long double>(lo)) * (b - a));
}

// Every (positive, negative) pair: 1 if the positive scores higher, 1/2 on a tie.
inline double pairwise_auroc(const std::vector<Outcome>& outcomes) {
    long double credit = 0.0L;
    std::size_t pairs = 0;
    for (const auto& a : outcomes) {
        if (a.label != 1) continue;
        for (const auto& b : outcomes) {
            if (b.label != 0) continue;
            ++pairs;
            if (a.prob > b.prob) credit += 1.0L;
            else if (a.prob == b.prob) credit += 0.5L;
        }
    }
    return static_cast<double>(credit / static_cast<long double>(pairs));
}

// Twice the pairwise U, an exact integer.
inline long long pairwise_u2(const std::vector<Outcome>& outcomes) {
    long long twice = 0;
    for (const auto& a : outcomes) {
        if (a.label != 1) continue;
        for (const auto& b : outcomes) {
            if (b.label != 0) continue;
            if (a.prob > b.prob) twice += 2;
            else if (a.prob == b.prob) twice += 1;
        }
    }
    return twice;
}

inline long double l2_shift(const std::vector<float>& z0, const std::vector<float>& zt) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < z0.size(); ++i) {
        const long double d = static_cast<long double>(zt[i]) - static_cast<long double>(z0[i]);
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace asrs::testing
