#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcube/bits.hpp"
#include "hcube/cube.hpp"
#include "hcube/detail/simplex.hpp"
#include "hcube/detail/tail_lp.hpp"
#include "hcube/errors.hpp"

namespace hcube {

/// Approximation subspace: either the degree-d monomial basis {W_S : |S| <= d}
/// (kept symbolic so the LP can price columns through the transform), or an
/// explicit list of functions spanning it.
struct BasisSpec {
    int n = 0;
    std::optional<int> degree_tag;
    std::vector<CubeFunction> elements;

    static BasisSpec degree_basis(int n, int d) {
        detail::check_dimension(n);
        if (d < 0 || d > n) throw validation_error("degree basis: need 0 <= d <= n");
        BasisSpec b;
        b.n = n;
        b.degree_tag = d;
        return b;
    }

    static BasisSpec explicit_basis(std::vector<CubeFunction> elems) {
        if (elems.empty()) throw validation_error("explicit basis: needs at least one element");
        BasisSpec b;
        b.n = elems.front().n;
        for (const auto& e : elems)
            if (e.n != b.n) throw validation_error("explicit basis: mixed dimensions");
        b.elements = std::move(elems);
        return b;
    }

    std::size_t dim() const {
        if (degree_tag) return binom_le_u64(n, *degree_tag);
        return elements.size();
    }
};

enum class FitStatus { optimal, iteration_limit };

struct MinimaxResult {
    double error = 0;
    std::vector<double> coefficients;
    FitStatus status = FitStatus::optimal;
    long iterations = 0;
};

struct MinimaxOptions {
    double tolerance = 1e-9;
    long max_iterations = 0;                       // 0 -> solver default
    std::size_t max_variables = 20000;             // degree-basis budget: dim+1
    std::uint64_t max_lp_cells = std::uint64_t{1} << 33;  // 2^{n+1} * (dim+1)
};

namespace detail {

/// Dual of  min t s.t. -t <= f(x) - sum c_i B_i(x) <= t:
/// columns u_x = (B(x), 1) with cost -f(x) and v_x = (-B(x), 1) with cost f(x);
/// rows are the k basis orthogonality constraints plus the normalization row.
class DenseChebyshevOracle : public ColumnOracle {
public:
    DenseChebyshevOracle(std::vector<double> fvals, std::vector<std::vector<double>> basis_rows)
        : f_(std::move(fvals)), basis_(std::move(basis_rows)) {
        k_ = static_cast<int>(basis_.size());
        p_ = static_cast<std::int64_t>(f_.size());
    }

    int rows() const override { return k_ + 1; }
    std::int64_t cols() const override { return 2 * p_; }
    double cost(std::int64_t j) const override { return j < p_ ? -f_[j] : f_[j - p_]; }

    void column(std::int64_t j, double* out) const override {
        const bool neg = j >= p_;
        const std::size_t x = static_cast<std::size_t>(neg ? j - p_ : j);
        for (int i = 0; i < k_; ++i) out[i] = neg ? -basis_[i][x] : basis_[i][x];
        out[k_] = 1.0;
    }

private:
    std::vector<double> f_;
    std::vector<std::vector<double>> basis_;
    int k_;
    std::int64_t p_;
};

/// Same LP for the monomial basis; the pricing pass evaluates
/// g(x) = sum_i y_i W_{S_i}(x) for every x with one transform.
class CharacterChebyshevOracle : public ColumnOracle {
public:
    CharacterChebyshevOracle(int n, std::vector<std::uint32_t> masks, const std::vector<double>& f)
        : n_(n), masks_(std::move(masks)), f_(f), scratch_(f.size()) {
        k_ = static_cast<int>(masks_.size());
        p_ = static_cast<std::int64_t>(f_.size());
    }

    int rows() const override { return k_ + 1; }
    std::int64_t cols() const override { return 2 * p_; }
    double cost(std::int64_t j) const override { return j < p_ ? -f_[j] : f_[j - p_]; }

    void column(std::int64_t j, double* out) const override {
        const bool neg = j >= p_;
        const std::uint32_t x = static_cast<std::uint32_t>(neg ? j - p_ : j);
        for (int i = 0; i < k_; ++i) {
            const double w = (popcount(masks_[i] & x) & 1) ? -1.0 : 1.0;
            out[i] = neg ? -w : w;
        }
        out[k_] = 1.0;
    }

    std::pair<std::int64_t, double> price(const double* y, bool use_costs, bool bland,
                                          double tol) const override {
        std::fill(scratch_.begin(), scratch_.end(), 0.0);
        for (int i = 0; i < k_; ++i) scratch_[masks_[i]] = y[i];
        fwht(scratch_);  // scratch[x] = sum_i y_i W_{S_i}(x)
        const double yt = y[k_];
        std::int64_t best = -1;
        double best_d = -tol;
        for (std::int64_t x = 0; x < p_; ++x) {
            const double g = scratch_[static_cast<std::size_t>(x)];
            const double fx = use_costs ? f_[static_cast<std::size_t>(x)] : 0.0;
            const double du = -fx - g - yt;
            if (du < best_d) {
                best = x;
                best_d = du;
                if (bland) return {best, best_d};
            }
            const double dv = fx + g - yt;
            if (dv < best_d) {
                best = p_ + x;
                best_d = dv;
                if (bland) return {best, best_d};
            }
        }
        return {best, best == -1 ? 0.0 : best_d};
    }

private:
    int n_;
    std::vector<std::uint32_t> masks_;
    const std::vector<double>& f_;
    mutable std::vector<double> scratch_;
    int k_;
    std::int64_t p_;
};

template <typename ResidualFn>
MinimaxResult solve_chebyshev(const ColumnOracle& oracle, int k, const MinimaxOptions& opts,
                              ResidualFn&& residual_of) {
    std::vector<double> b(k + 1, 0.0);
    b[k] = 1.0;
    SimplexOptions sopt;
    sopt.tol = opts.tolerance;
    sopt.max_iterations = opts.max_iterations;
    SimplexSolver solver(oracle, b, sopt);

    auto extract = [&](const SimplexOutcome& o) {
        MinimaxResult res;
        res.status =
            o.status == LpStatus::optimal ? FitStatus::optimal : FitStatus::iteration_limit;
        res.iterations = o.iterations;
        res.error = std::max(-o.objective, 0.0);
        res.coefficients.resize(k);
        for (int i = 0; i < k; ++i) res.coefficients[i] = -o.y[i];
        return res;
    };

    MinimaxResult res = extract(solver.solve());
    if (res.status == FitStatus::optimal &&
        std::abs(residual_of(res.coefficients) - res.error) > 1e-8) {
        res = extract(solver.polish());  // rebuilds the basis inverse, Bland sweep
    }
    if (res.status == FitStatus::optimal) {
        const double got = residual_of(res.coefficients);
        if (std::abs(got - res.error) > 1e-8)
            throw numerical_error("minimax: residual check failed (residual=" +
                                  std::to_string(got) + ", error=" + std::to_string(res.error) +
                                  ")");
    }
    return res;
}

}  // namespace detail

/// Discrete linear minimax over arbitrary points. basis_rows[i][x] is the
/// value of basis element i at point x. Returns the optimal uniform error,
/// the coefficients, and a verified residual.
inline MinimaxResult minimax_fit_points(const std::vector<double>& fvals,
                                        const std::vector<std::vector<double>>& basis_rows,
                                        const MinimaxOptions& opts = {}) {
    if (basis_rows.empty()) throw validation_error("minimax: empty basis");
    for (const auto& row : basis_rows)
        if (row.size() != fvals.size()) throw validation_error("minimax: basis/point size mismatch");
    const int k = static_cast<int>(basis_rows.size());

    detail::DenseChebyshevOracle oracle(fvals, basis_rows);
    auto residual = [&](const std::vector<double>& c) {
        double m = 0;
        for (std::size_t x = 0; x < fvals.size(); ++x) {
            double g = 0;
            for (int i = 0; i < k; ++i) g += c[i] * basis_rows[i][x];
            m = std::max(m, std::abs(fvals[x] - g));
        }
        return m;
    };
    return detail::solve_chebyshev(oracle, k, opts, residual);
}

/// Minimax fit of f over a BasisSpec on the full 2^n grid.
inline MinimaxResult minimax_fit(const CubeFunction& f, const BasisSpec& basis,
                                 const MinimaxOptions& opts = {}) {
    if (basis.n != f.n) throw validation_error("minimax_fit: basis dimension mismatch");
    const std::size_t dim = basis.dim();
    if (dim < 1) throw validation_error("minimax_fit: basis dimension >= 1 required");
    const std::uint64_t cells = (std::uint64_t{2} << f.n) * (dim + 1);
    if (dim + 1 > opts.max_variables || cells > opts.max_lp_cells)
        throw resource_error("minimax_fit: LP size " + std::to_string(dim + 1) + " vars x 2^" +
                             std::to_string(f.n + 1) + " constraints exceeds the configured limit");

    const int k = static_cast<int>(dim);
    if (basis.degree_tag) {
        const auto masks = masks_up_to_weight(f.n, *basis.degree_tag);
        detail::CharacterChebyshevOracle oracle(f.n, masks, f.values);
        auto residual = [&](const std::vector<double>& c) {
            std::vector<double> g(f.values.size(), 0.0);
            for (int i = 0; i < k; ++i) g[masks[i]] = c[i];
            detail::fwht(g);
            double m = 0;
            for (std::size_t x = 0; x < g.size(); ++x)
                m = std::max(m, std::abs(f.values[x] - g[x]));
            return m;
        };
        return detail::solve_chebyshev(oracle, k, opts, residual);
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(dim);
    for (const auto& e : basis.elements) rows.push_back(e.values);
    return minimax_fit_points(f.values, rows, opts);
}

/// E_d^n(f): minimax error against the degree-d monomial basis. Value-only;
/// routed through the complementary tail parameterization when the tail span
/// is much smaller than the basis (identical value, cross-checked in tests).
inline double ed_n(const CubeFunction& f, int d, const MinimaxOptions& opts = {}) {
    if (d < 0 || d > f.n) throw validation_error("ed_n: need 0 <= d <= n");
    if (d == f.n) return 0.0;  // the basis spans every function; g = f interpolates
    const std::uint64_t k = binom_le_u64(f.n, d);
    const std::uint64_t r = (std::uint64_t{1} << f.n) - k;
    if (2 * r < k && f.n >= 4) return detail::tail_form_ed(f, d, opts.tolerance);
    return minimax_fit(f, BasisSpec::degree_basis(f.n, d), opts).error;
}

/// Smallest l with E_l^n(f) <= threshold, by upward scan (E_d is nonincreasing).
inline int approx_degree(const CubeFunction& f, double threshold = 1.0 / 3.0,
                         const MinimaxOptions& opts = {}) {
    if (!(threshold > 0)) throw validation_error("approx_degree: threshold must be positive");
    for (int l = 0; l <= f.n; ++l)
        if (ed_n(f, l, opts) <= threshold) return l;
    return f.n;  // unreachable: ed_n(f, n) == 0
}

}  // namespace hcube
