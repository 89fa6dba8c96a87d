#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hcube/bits.hpp"
#include "hcube/cube.hpp"
#include "hcube/errors.hpp"
#include "hcube/parallel.hpp"
#include "hcube/version.hpp"

namespace hcube {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-based word stream: the i-th word is a pure function of (seed, i),
/// so any entry is derivable without sequencing.
inline std::uint64_t ctr_word(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ull * (index + 1)));
}

inline double ctr_unit(std::uint64_t seed, std::uint64_t index) {
    // 53 uniform bits -> [0, 1)
    return static_cast<double>(ctr_word(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Random +-1 table: i.i.d. symmetric signs keyed by (seed, index).
inline CubeFunction random_boolean(int n, std::uint64_t seed) {
    detail::check_dimension(n);
    std::vector<double> v(std::size_t{1} << n);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = (detail::ctr_word(seed, i) >> 63) ? -1.0 : 1.0;
    return CubeFunction(n, std::move(v));
}

/// Random table with i.i.d. uniform [-1,1) values, same keyed stream.
inline CubeFunction random_uniform(int n, std::uint64_t seed) {
    detail::check_dimension(n);
    std::vector<double> v(std::size_t{1} << n);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * detail::ctr_unit(seed, i) - 1.0;
    return CubeFunction(n, std::move(v));
}

struct TrialStats {
    int n = 0;
    int d = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double bound_k = 3.0;
    std::vector<double> max_tail_norms;  // per trial
    double bound = 0;                    // K * sqrt(2^{-n} C(n,>d) n)
    int exceed_count = 0;
    std::string rng = rng_identifier;
};

/// Theorem-9 style experiment: tail norms of random Boolean functions vs the
/// Hoeffding-shaped bound. Trial i uses seed' = ctr_word(seed, i), so results
/// are independent of scheduling.
inline TrialStats tail_experiment(int n, int d, int trials, std::uint64_t seed, double K = 3.0) {
    detail::check_dimension(n);
    if (d < 0 || d > n) throw validation_error("tail_experiment: need 0 <= d <= n");
    if (trials < 1) throw validation_error("tail_experiment: trials >= 1");
    if (n > 22) throw resource_error("tail_experiment: n > 22 exceeds the default budget");

    TrialStats st;
    st.n = n;
    st.d = d;
    st.trials = trials;
    st.seed = seed;
    st.bound_k = K;
    const double tail_count = static_cast<double>((std::uint64_t{1} << n) - binom_le_u64(n, d));
    st.bound = K * std::sqrt(std::ldexp(tail_count * n, -n));
    st.max_tail_norms.assign(trials, 0.0);

    parallel_blocks(trials, [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const CubeFunction f = random_boolean(n, detail::ctr_word(seed, i));
            st.max_tail_norms[i] = tail_inf_norm(f, d);
        }
    });
    for (double v : st.max_tail_norms)
        if (v > st.bound) ++st.exceed_count;
    return st;
}

struct RatioProbe {
    CubeFunction f;
    double ratio = 0;  // ||f||_1 / ||Delta f||_1 under the uniform measure
};

/// Reverse-Bernstein probe on the tail span: requires fhat(S) = 0 for |S| <= d.
inline RatioProbe ratio_probe(const CubeFunction& f, int d) {
    if (d < 0 || d > f.n) throw validation_error("ratio_probe: need 0 <= d <= n");
    const Spectrum s = wht_forward(f);
    const double cutoff = 1e-9 * s.max_abs();
    for (std::size_t mask = 0; mask < s.coeffs.size(); ++mask)
        if (popcount(mask) <= d && std::abs(s.coeffs[mask]) > cutoff)
            throw validation_error("ratio_probe: low-degree part is nonzero at |S|=" +
                                   std::to_string(popcount(mask)));
    const double num = l1_norm(f);
    if (num == 0.0) throw validation_error("ratio_probe: f is identically zero");
    const double den = l1_norm(laplacian(f));
    RatioProbe probe{f, num / den};
    return probe;
}

}  // namespace hcube
