#pragma once

#include "bergman/scalar.hpp"

#include <utility>
#include <vector>

namespace bergman {

// In-place radix-2 transform X_m = sum_j x_j exp(-2 pi i j m / K); inverse flips the sign (no 1/K).
inline void fft(std::vector<Complex>& a, bool inverse = false)
{
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    Real two_pi = 2 * pi_value();
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t half = len / 2;
        std::vector<Complex> tw(half);
        for (std::size_t k = 0; k < half; ++k)
            tw[k] = polar_unit((inverse ? two_pi : -two_pi) * Real(k) / Real(len));
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < half; ++k) {
                Complex u = a[i + k];
                Complex v = a[i + k + half] * tw[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
    }
}

inline int next_pow2(long long x)
{
    int k = 1;
    while (k < x)
        k <<= 1;
    return k;
}

} // namespace bergman
