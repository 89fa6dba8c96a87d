#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "hcube/errors.hpp"

namespace hcube::detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Column access for a standard-form LP  min c.w  s.t.  A w = b, w >= 0.
/// Implementations may specialize `price` when the column family admits a
/// bulk reduced-cost scan (the Walsh-character basis does).
class ColumnOracle {
public:
    virtual ~ColumnOracle() = default;
    virtual int rows() const = 0;
    virtual std::int64_t cols() const = 0;
    virtual double cost(std::int64_t j) const = 0;
    virtual void column(std::int64_t j, double* out) const = 0;

    /// Entering-column scan. Reduced cost d_j = cost_j - y.A_j (costs treated
    /// as zero when use_costs is false, i.e. in phase 1). Returns {-1, 0} when
    /// no d_j < -tol. Bland mode returns the lowest such j; otherwise the most
    /// negative, ties to the lowest index.
    virtual std::pair<std::int64_t, double> price(const double* y, bool use_costs, bool bland,
                                                  double tol) const {
        const int m = rows();
        std::vector<double> col(m);
        std::int64_t best = -1;
        double best_d = -tol;
        for (std::int64_t j = 0; j < cols(); ++j) {
            column(j, col.data());
            double d = use_costs ? cost(j) : 0.0;
            for (int i = 0; i < m; ++i) d -= y[i] * col[i];
            if (d < best_d) {
                best = j;
                best_d = d;
                if (bland) break;
            }
        }
        return {best, best == -1 ? 0.0 : best_d};
    }
};

enum class LpStatus { optimal, iteration_limit };

struct SimplexOutcome {
    LpStatus status = LpStatus::optimal;
    long iterations = 0;
    double objective = 0;               // c.w at termination, exact b
    std::vector<double> y;              // simplex multipliers (phase-2 costs)
    std::vector<std::int64_t> basis;    // column ids; >= cols() means artificial
    std::vector<double> xb;             // basic values for the exact b
};

struct SimplexOptions {
    double tol = 1e-9;
    double pivot_tol = 1e-9;
    long max_iterations = 0;  // 0 -> 5000 + 120*m
    int stall_limit = 60;     // pivots without progress before Bland's rule
};

/// Two-phase revised primal simplex with an explicit basis inverse.
/// Dantzig pricing with a Harris-style ratio test; Bland's rule takes over
/// after a degeneracy stall and hands back once the objective moves again.
class SimplexSolver {
public:
    SimplexSolver(const ColumnOracle& a, std::vector<double> b, SimplexOptions opt = {})
        : a_(a), b_(std::move(b)), opt_(opt), m_(a.rows()) {
        if (static_cast<int>(b_.size()) != m_)
            throw validation_error("simplex: b size mismatch");
        if (opt_.max_iterations <= 0) opt_.max_iterations = 5000 + 120L * m_;
    }

    SimplexOutcome solve() {
        init_artificial_basis();
        run_phase(/*phase1=*/true, /*bland=*/false);
        if (phase1_objective() > 1e-6)
            throw numerical_error("simplex: phase 1 failed to reach feasibility");
        const LpStatus st = run_phase(/*phase1=*/false, /*bland=*/false);
        return outcome(st);
    }

    /// Rebuild the basis inverse from scratch and run one Bland sweep; used
    /// when a caller-side residual check detects drift.
    SimplexOutcome polish() {
        reinvert();
        return outcome(run_phase(false, /*bland=*/true));
    }

private:
    const ColumnOracle& a_;
    std::vector<double> b_exact_;
    std::vector<double> b_;  // perturbed
    SimplexOptions opt_;
    int m_;
    long iters_ = 0;

    std::vector<double> binv_;           // m x m row-major
    std::vector<std::int64_t> basis_;    // ids; artificial row i has id cols()+i
    std::vector<double> xb_;             // w.r.t. perturbed b

    bool is_artificial(std::int64_t id) const { return id >= a_.cols(); }

    void basis_column(std::int64_t id, double* out) const {
        if (is_artificial(id)) {
            std::fill(out, out + m_, 0.0);
            out[id - a_.cols()] = 1.0;
        } else {
            a_.column(id, out);
        }
    }

    double basis_cost(std::int64_t id, bool phase1) const {
        if (phase1) return is_artificial(id) ? 1.0 : 0.0;
        return is_artificial(id) ? 0.0 : a_.cost(id);
    }

    void init_artificial_basis() {
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) basis_[i] = a_.cols() + i;
        xb_ = b_;
    }

    double phase1_objective() const {
        double obj = 0;
        for (int r = 0; r < m_; ++r)
            if (is_artificial(basis_[r])) obj += std::max(xb_[r], 0.0);
        return obj;
    }

    std::vector<double> multipliers(bool phase1) const {
        std::vector<double> y(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            const double c = basis_cost(basis_[r], phase1);
            if (c == 0.0) continue;
            const double* row = &binv_[static_cast<std::size_t>(r) * m_];
            for (int i = 0; i < m_; ++i) y[i] += c * row[i];
        }
        return y;
    }

    SimplexOutcome outcome(LpStatus st) const {
        SimplexOutcome out;
        out.status = st;
        out.iterations = iters_;
        out.basis = basis_;
        out.y = multipliers(false);
        // Basic values and objective for the exact, unperturbed b.
        out.xb.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double* row = &binv_[static_cast<std::size_t>(i) * m_];
            double s = 0;
            for (int r = 0; r < m_; ++r) s += row[r] * b_exact_[r];
            out.xb[i] = s;
        }
        out.objective = 0;
        for (int r = 0; r < m_; ++r) out.objective += basis_cost(basis_[r], false) * out.xb[r];
        return out;
    }

    void reinvert() {
        std::vector<double> mat(static_cast<std::size_t>(m_) * m_, 0.0);
        std::vector<double> col(m_);
        for (int p = 0; p < m_; ++p) {
            basis_column(basis_[p], col.data());
            for (int i = 0; i < m_; ++i) mat[static_cast<std::size_t>(i) * m_ + p] = col[i];
        }
        std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
        for (int c = 0; c < m_; ++c) {
            int piv = c;
            double best = std::abs(mat[static_cast<std::size_t>(c) * m_ + c]);
            for (int i = c + 1; i < m_; ++i) {
                const double v = std::abs(mat[static_cast<std::size_t>(i) * m_ + c]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best < 1e-13) throw numerical_error("simplex: singular basis on reinversion");
            if (piv != c)
                for (int j = 0; j < m_; ++j) {
                    std::swap(mat[static_cast<std::size_t>(piv) * m_ + j],
                              mat[static_cast<std::size_t>(c) * m_ + j]);
                    std::swap(inv[static_cast<std::size_t>(piv) * m_ + j],
                              inv[static_cast<std::size_t>(c) * m_ + j]);
                }
            const double p = mat[static_cast<std::size_t>(c) * m_ + c];
            for (int j = 0; j < m_; ++j) {
                mat[static_cast<std::size_t>(c) * m_ + j] /= p;
                inv[static_cast<std::size_t>(c) * m_ + j] /= p;
            }
            for (int i = 0; i < m_; ++i) {
                if (i == c) continue;
                const double f = mat[static_cast<std::size_t>(i) * m_ + c];
                if (f == 0.0) continue;
                for (int j = 0; j < m_; ++j) {
                    mat[static_cast<std::size_t>(i) * m_ + j] -=
                        f * mat[static_cast<std::size_t>(c) * m_ + j];
                    inv[static_cast<std::size_t>(i) * m_ + j] -=
                        f * inv[static_cast<std::size_t>(c) * m_ + j];
                }
            }
        }
        binv_ = std::move(inv);
        xb_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double* row = &binv_[static_cast<std::size_t>(i) * m_];
            double s = 0;
            for (int r = 0; r < m_; ++r) s += row[r] * b_[r];
            xb_[i] = s;
        }
    }

    /// Harris-style two-pass ratio test: find the tightest ratio, then among
    /// rows within a small band of it take the largest pivot element.
    int ratio_test(const std::vector<double>& w) const {
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
            if (w[i] <= opt_.pivot_tol) continue;
            best_ratio = std::min(best_ratio, std::max(xb_[i], 0.0) / w[i]);
        }
        if (!std::isfinite(best_ratio)) return -1;
        const double band = best_ratio + 1e-9 * (1.0 + best_ratio);
        int leave = -1;
        double best_piv = 0;
        for (int i = 0; i < m_; ++i) {
            if (w[i] <= opt_.pivot_tol) continue;
            if (std::max(xb_[i], 0.0) / w[i] <= band && w[i] > best_piv) {
                best_piv = w[i];
                leave = i;
            }
        }
        return leave;
    }

    LpStatus run_phase(bool phase1, bool bland_initial) {
        std::vector<double> col(m_), w(m_);
        std::vector<double> y = multipliers(phase1);
        bool bland = bland_initial;
        int stall = 0;
        long recompute_countdown = 512;
        while (true) {
            if (iters_ >= opt_.max_iterations) return LpStatus::iteration_limit;
            if (--recompute_countdown <= 0) {
                y = multipliers(phase1);
                recompute_countdown = 512;
            }
            auto [j, dj] = a_.price(y.data(), !phase1, bland, opt_.tol);
            if (j < 0) {
                // Confirm with freshly recomputed multipliers before declaring
                // optimality; the incremental y accumulates roundoff.
                y = multipliers(phase1);
                auto [j2, dj2] = a_.price(y.data(), !phase1, bland, opt_.tol);
                if (j2 < 0) return LpStatus::optimal;
                j = j2;
                dj = dj2;
            }

            a_.column(j, col.data());
            for (int i = 0; i < m_; ++i) {
                const double* row = &binv_[static_cast<std::size_t>(i) * m_];
                double s = 0;
                for (int r = 0; r < m_; ++r) s += row[r] * col[r];
                w[i] = s;
            }

            // Zero-level artificial rows with a solid pivot element leave
            // first; this monotonically clears artificials and cannot cycle.
            int leave = -1;
            for (int i = 0; i < m_; ++i) {
                if (!is_artificial(basis_[i]) || xb_[i] > opt_.tol) continue;
                if (std::abs(w[i]) > 1e-2 &&
                    (leave < 0 || std::abs(w[i]) > std::abs(w[leave])))
                    leave = i;
            }
            if (leave < 0) {
                leave = ratio_test(w);
                if (leave < 0) {
                    // A bounded LP cannot have an improving unbounded ray;
                    // treat as drift, rebuild, and retry once per stall.
                    if (++stall > 3)
                        throw numerical_error("simplex: repeated unbounded directions");
                    reinvert();
                    y = multipliers(phase1);
                    continue;
                }
            }

            pivot(leave, j, w);
            // Incremental multiplier update: y += d_j * (new row `leave`).
            const double* prow = &binv_[static_cast<std::size_t>(leave) * m_];
            for (int i = 0; i < m_; ++i) y[i] += dj * prow[i];
            ++iters_;
        }
    }

    void pivot(int r, std::int64_t enter, std::vector<double>& w) {
        const double piv = w[r];
        double* prow = &binv_[static_cast<std::size_t>(r) * m_];
        for (int jj = 0; jj < m_; ++jj) prow[jj] /= piv;
        xb_[r] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = w[i];
            if (f == 0.0) continue;
            double* irow = &binv_[static_cast<std::size_t>(i) * m_];
            for (int jj = 0; jj < m_; ++jj) irow[jj] -= f * prow[jj];
            xb_[i] -= f * xb_[r];
        }
        basis_[r] = enter;
    }
};

}  // namespace hcube::detail
