#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace hcube {

inline int popcount(std::uint64_t x) { return std::popcount(x); }

/// Exact binomial coefficient in 64-bit arithmetic; valid for n <= 64
/// (the largest value, C(64,32), still fits in an unsigned 64-bit word).
inline std::uint64_t binom_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    // Multiply/divide interleaved so every intermediate is an exact binomial.
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r / i * (n - k + i) + r % i * (n - k + i) / i;
    }
    return r;
}

/// C(n, <=k) = sum_{j<=k} C(n,j), exact for n <= 63.
inline std::uint64_t binom_le_u64(int n, int k) {
    std::uint64_t s = 0;
    for (int j = 0; j <= k && j <= n; ++j) s += binom_u64(n, j);
    return s;
}

/// Enumerates all masks of popcount exactly k within n bits, increasing order.
inline std::vector<std::uint32_t> masks_of_weight(int n, int k) {
    std::vector<std::uint32_t> out;
    if (k < 0 || k > n) return out;
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    std::uint32_t v = (1u << k) - 1;
    const std::uint32_t limit = (n == 32) ? 0xffffffffu : ((1u << n) - 1);
    while (v <= limit) {
        out.push_back(v);
        // Gosper's hack: next mask with the same popcount.
        std::uint32_t t = v | (v - 1);
        std::uint32_t next = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
        if (next <= v) break;
        v = next;
    }
    return out;
}

/// All masks S with |S| <= d within n bits, ordered by (popcount, numeric value).
/// This is the canonical ordering of the degree-d monomial basis.
inline std::vector<std::uint32_t> masks_up_to_weight(int n, int d) {
    std::vector<std::uint32_t> out;
    for (int k = 0; k <= d; ++k) {
        auto level = masks_of_weight(n, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace hcube
