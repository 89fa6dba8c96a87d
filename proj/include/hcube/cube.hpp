#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hcube/bits.hpp"
#include "hcube/errors.hpp"

namespace hcube {

inline constexpr int max_dimension = 26;  // dense 2^n table of doubles <= 512 MiB

namespace detail {

inline void check_dimension(int n) {
    if (n < 1 || n > max_dimension)
        throw validation_error("dimension n=" + std::to_string(n) + " outside [1," +
                               std::to_string(max_dimension) + "]");
}

inline void check_table(int n, const std::vector<double>& values, const char* what) {
    check_dimension(n);
    const std::size_t want = std::size_t{1} << n;
    if (values.size() != want)
        throw validation_error(std::string(what) + ": table has " + std::to_string(values.size()) +
                               " entries, expected 2^" + std::to_string(n));
    for (double v : values)
        if (!std::isfinite(v)) throw validation_error(std::string(what) + ": non-finite entry");
}

/// Unnormalized in-place Walsh-Hadamard butterflies.
inline void fwht(std::vector<double>& a) {
    const std::size_t len = a.size();
    for (std::size_t h = 1; h < len; h *= 2) {
        for (std::size_t i = 0; i < len; i += h * 2) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double x = a[j];
                const double y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
    }
}

}  // namespace detail

/// A real-valued function on {0,1}^n stored as a dense table of 2^n values.
/// Entry i holds f(x) where bit j of i is x_{j+1}; x_1 is the least-significant bit.
struct CubeFunction {
    int n = 0;
    std::vector<double> values;

    CubeFunction() = default;
    CubeFunction(int n_, std::vector<double> values_) : n(n_), values(std::move(values_)) {
        detail::check_table(n, values, "CubeFunction");
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }

    static CubeFunction constant(int n, double c) {
        detail::check_dimension(n);
        return CubeFunction(n, std::vector<double>(std::size_t{1} << n, c));
    }

    /// The character W_S(x) = (-1)^{sum_{j in S} x_j} as a +-1 table.
    static CubeFunction character(int n, std::uint32_t mask) {
        detail::check_dimension(n);
        std::vector<double> v(std::size_t{1} << n);
        for (std::size_t x = 0; x < v.size(); ++x)
            v[x] = (popcount(x & mask) & 1) ? -1.0 : 1.0;
        return CubeFunction(n, std::move(v));
    }
};

/// Fourier-Walsh coefficients; coeffs[S] = f_hat(S) indexed by subset bitmask.
struct Spectrum {
    int n = 0;
    std::vector<double> coeffs;

    Spectrum() = default;
    Spectrum(int n_, std::vector<double> coeffs_) : n(n_), coeffs(std::move(coeffs_)) {
        detail::check_table(n, coeffs, "Spectrum");
    }

    std::size_t size() const { return coeffs.size(); }
    double max_abs() const {
        double m = 0;
        for (double c : coeffs) m = std::max(m, std::abs(c));
        return m;
    }
};

struct SensitivityReport {
    double value = 0;
    std::uint64_t argmax_point = 0;
};

/// f_hat(S) = 2^{-n} sum_x f(x) W_S(x), computed by in-place butterflies
/// with a single final 2^{-n} scaling.
inline Spectrum wht_forward(const CubeFunction& f) {
    std::vector<double> a = f.values;
    detail::fwht(a);
    const double scale = 1.0 / static_cast<double>(std::size_t{1} << f.n);
    for (double& v : a) v *= scale;
    return Spectrum(f.n, std::move(a));
}

/// Exact inverse of wht_forward up to roundoff (the butterflies are an involution
/// modulo the 2^n factor).
inline CubeFunction wht_inverse(const Spectrum& s) {
    std::vector<double> a = s.coeffs;
    detail::fwht(a);
    return CubeFunction(s.n, std::move(a));
}

/// max |S| with |f_hat(S)| > tol; 0 for constants.
inline int degree(const Spectrum& s, double tol) {
    if (tol < 0) throw validation_error("degree: tol must be >= 0");
    int d = 0;
    for (std::size_t mask = 1; mask < s.coeffs.size(); ++mask)
        if (std::abs(s.coeffs[mask]) > tol) d = std::max(d, popcount(mask));
    return d;
}

/// Default tolerance 1e-9 * max|f_hat| absorbs butterfly roundoff dust.
inline int degree(const Spectrum& s) { return degree(s, 1e-9 * s.max_abs()); }

/// Splits s into (low, tail): low keeps |S| <= d, tail keeps |S| > d; low + tail = s.
inline std::pair<Spectrum, Spectrum> truncate(const Spectrum& s, int d) {
    if (d < 0 || d > s.n) throw validation_error("truncate: need 0 <= d <= n");
    std::vector<double> low(s.coeffs.size(), 0.0), tail(s.coeffs.size(), 0.0);
    for (std::size_t mask = 0; mask < s.coeffs.size(); ++mask) {
        if (popcount(mask) <= d)
            low[mask] = s.coeffs[mask];
        else
            tail[mask] = s.coeffs[mask];
    }
    return {Spectrum(s.n, std::move(low)), Spectrum(s.n, std::move(tail))};
}

/// s(f) = max_x sum_j |f(x) - f(x^j)| with the first attaining point.
inline SensitivityReport sensitivity(const CubeFunction& f) {
    SensitivityReport rep;
    const std::size_t size = f.values.size();
    for (std::size_t x = 0; x < size; ++x) {
        double sum = 0;
        for (int j = 0; j < f.n; ++j)
            sum += std::abs(f.values[x] - f.values[x ^ (std::size_t{1} << j)]);
        if (sum > rep.value) {
            rep.value = sum;
            rep.argmax_point = x;
        }
    }
    return rep;
}

/// Delta f(x) = sum_j (f(x) - f(x^j)); acts on the spectrum as f_hat(S) -> 2|S| f_hat(S).
inline CubeFunction laplacian(const CubeFunction& f) {
    std::vector<double> out(f.values.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
        double sum = 0;
        for (int j = 0; j < f.n; ++j)
            sum += f.values[x] - f.values[x ^ (std::size_t{1} << j)];
        out[x] = sum;
    }
    return CubeFunction(f.n, std::move(out));
}

/// max_x |f_{>d}(x)| via forward transform, truncation, inverse transform.
inline double tail_inf_norm(const CubeFunction& f, int d) {
    auto [low, tail] = truncate(wht_forward(f), d);
    (void)low;
    CubeFunction ft = wht_inverse(tail);
    double m = 0;
    for (double v : ft.values) m = std::max(m, std::abs(v));
    return m;
}

inline double inf_norm(const CubeFunction& f) {
    double m = 0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

/// L1 norm under the uniform measure, 2^{-n} sum_x |f(x)|.
inline double l1_norm(const CubeFunction& f) {
    double s = 0;
    for (double v : f.values) s += std::abs(v);
    return s / static_cast<double>(f.values.size());
}

}  // namespace hcube
