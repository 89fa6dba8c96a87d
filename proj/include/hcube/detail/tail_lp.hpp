#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hcube/bits.hpp"
#include "hcube/cube.hpp"
#include "hcube/errors.hpp"

namespace hcube::detail {

/// Value-only minimax error against the degree-d monomial basis, solved in the
/// complementary ("tail") parameterization:
///
///   E = max { sum_{|S|>d} mu_S fhat(S) :  2^{-n} sum_x |q_mu(x)| <= 1 },
///   q_mu = sum mu_S W_S.
///
/// Every sign vector s yields a valid cut  <shat|_tail, mu> <= 1; the +-e_S box
/// cuts come from s = +-W_S, so the master starts bounded. Cuts are separated
/// by the exact l1 norm of q_mu and the master is reoptimized by dual
/// active-set pivots. The scaled point q/(2^n L) is always primally feasible,
/// which gives a matching lower bound and a self-certifying gap.
class TailFormLp {
public:
    TailFormLp(const CubeFunction& f, int d, double tol = 1e-9) : n_(f.n), tol_(tol) {
        const std::size_t size = f.values.size();
        std::vector<double> fhat = f.values;
        fwht(fhat);
        const double scale = 1.0 / static_cast<double>(size);
        for (double& v : fhat) v *= scale;
        for (std::size_t mask = 0; mask < size; ++mask)
            if (popcount(mask) > d) {
                tail_masks_.push_back(static_cast<std::uint32_t>(mask));
                obj_.push_back(fhat[mask]);
            }
        r_ = static_cast<int>(tail_masks_.size());
    }

    int tail_dim() const { return r_; }

    double solve() {
        if (r_ == 0) return 0.0;
        init_box_vertex();

        const std::size_t size = std::size_t{1} << n_;
        std::vector<double> q(size);
        double best_lb = 0.0;
        const long outer_cap = 200 + 40L * r_;
        for (long outer = 0; outer < outer_cap; ++outer) {
            // Evaluate q = sum mu_S W_S on the whole cube.
            std::fill(q.begin(), q.end(), 0.0);
            for (int j = 0; j < r_; ++j) q[tail_masks_[j]] = mu_[j];
            fwht(q);
            double l1 = 0;
            for (double v : q) l1 += std::abs(v);
            l1 /= static_cast<double>(size);

            double ub = 0;
            for (int j = 0; j < r_; ++j) ub += obj_[j] * mu_[j];
            if (l1 > 0) best_lb = std::max(best_lb, ub / std::max(l1, 1.0));
            if (l1 <= 1.0 + 1e-12) return std::max(ub, 0.0);
            if (ub - best_lb <= 2 * tol_) return std::max(0.5 * (ub + best_lb), 0.0);

            // Separating cut from the sign pattern of q.
            std::vector<double> srow(r_);
            for (std::size_t x = 0; x < size; ++x) q[x] = (q[x] < 0) ? -1.0 : 1.0;
            fwht(q);
            const double inv = 1.0 / static_cast<double>(size);
            for (int j = 0; j < r_; ++j) srow[j] = q[tail_masks_[j]] * inv;
            cuts_.push_back(std::move(srow));
            restore_feasibility();
        }
        throw numerical_error("tail-form LP: cut loop failed to converge");
    }

private:
    int n_;
    double tol_;
    int r_ = 0;
    std::vector<std::uint32_t> tail_masks_;
    std::vector<double> obj_;

    // Master state. Row ids: j in [0,r) box +e_j, [r,2r) box -e_j,
    // >= 2r explicit cuts (cuts_[id-2r]).
    std::vector<std::vector<double>> cuts_;
    std::vector<int> active_;     // r active row ids
    std::vector<double> pinv_;    // r x r inverse of the active normal matrix
    std::vector<double> mu_;      // current vertex
    std::vector<double> pi_;      // multipliers, kept >= 0

    void row_of(int id, double* out) const {
        std::fill(out, out + r_, 0.0);
        if (id < r_)
            out[id] = 1.0;
        else if (id < 2 * r_)
            out[id - r_] = -1.0;
        else {
            const auto& c = cuts_[id - 2 * r_];
            std::copy(c.begin(), c.end(), out);
        }
    }

    double row_dot_mu(int id) const {
        if (id < r_) return mu_[id];
        if (id < 2 * r_) return -mu_[id - r_];
        const auto& c = cuts_[id - 2 * r_];
        double s = 0;
        for (int j = 0; j < r_; ++j) s += c[j] * mu_[j];
        return s;
    }

    void init_box_vertex() {
        active_.resize(r_);
        pinv_.assign(static_cast<std::size_t>(r_) * r_, 0.0);
        mu_.assign(r_, 0.0);
        pi_.assign(r_, 0.0);
        for (int j = 0; j < r_; ++j) {
            const bool pos = obj_[j] >= 0;
            active_[j] = pos ? j : r_ + j;
            pinv_[static_cast<std::size_t>(j) * r_ + j] = pos ? 1.0 : -1.0;
            mu_[j] = pos ? 1.0 : -1.0;
            pi_[j] = std::abs(obj_[j]);
        }
    }

    void recompute_vertex() {
        for (int i = 0; i < r_; ++i) {
            double s = 0;
            const double* row = &pinv_[static_cast<std::size_t>(i) * r_];
            for (int j = 0; j < r_; ++j) s += row[j];
            mu_[i] = s;
        }
        for (int j = 0; j < r_; ++j) {
            double s = 0;
            for (int i = 0; i < r_; ++i) s += pinv_[static_cast<std::size_t>(i) * r_ + j] * obj_[i];
            pi_[j] = s;
        }
    }

    void reinvert_active() {
        std::vector<double> mat(static_cast<std::size_t>(r_) * r_);
        std::vector<double> row(r_);
        for (int i = 0; i < r_; ++i) {
            row_of(active_[i], row.data());
            for (int j = 0; j < r_; ++j) mat[static_cast<std::size_t>(i) * r_ + j] = row[j];
        }
        // Invert mat (rows are active normals; mu solves A_W mu = 1).
        std::vector<double> inv(static_cast<std::size_t>(r_) * r_, 0.0);
        for (int i = 0; i < r_; ++i) inv[static_cast<std::size_t>(i) * r_ + i] = 1.0;
        for (int c = 0; c < r_; ++c) {
            int piv = c;
            double best = std::abs(mat[static_cast<std::size_t>(c) * r_ + c]);
            for (int i = c + 1; i < r_; ++i) {
                const double v = std::abs(mat[static_cast<std::size_t>(i) * r_ + c]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best < 1e-13) throw numerical_error("tail-form LP: singular active set");
            if (piv != c)
                for (int j = 0; j < r_; ++j) {
                    std::swap(mat[static_cast<std::size_t>(piv) * r_ + j],
                              mat[static_cast<std::size_t>(c) * r_ + j]);
                    std::swap(inv[static_cast<std::size_t>(piv) * r_ + j],
                              inv[static_cast<std::size_t>(c) * r_ + j]);
                }
            const double p = mat[static_cast<std::size_t>(c) * r_ + c];
            for (int j = 0; j < r_; ++j) {
                mat[static_cast<std::size_t>(c) * r_ + j] /= p;
                inv[static_cast<std::size_t>(c) * r_ + j] /= p;
            }
            for (int i = 0; i < r_; ++i) {
                if (i == c) continue;
                const double f = mat[static_cast<std::size_t>(i) * r_ + c];
                if (f == 0.0) continue;
                for (int j = 0; j < r_; ++j) {
                    mat[static_cast<std::size_t>(i) * r_ + j] -=
                        f * mat[static_cast<std::size_t>(c) * r_ + j];
                    inv[static_cast<std::size_t>(i) * r_ + j] -=
                        f * inv[static_cast<std::size_t>(c) * r_ + j];
                }
            }
        }
        pinv_ = std::move(inv);
        recompute_vertex();
    }

    void restore_feasibility() {
        const long cap = 200 + 40L * r_;
        std::vector<double> grow(r_), alpha(r_), pe(r_), z(r_), old_row(r_);
        std::vector<char> is_active(2 * r_ + cuts_.size(), 0);
        for (int id : active_) is_active[id] = 1;

        int stall = 0;
        double last_obj = std::numeric_limits<double>::infinity();
        for (long it = 0; it < cap; ++it) {
            const bool bland = stall > 40;
            // Entering row: most violated (or lowest id under the stall rule),
            // never one that is already active.
            int vid = -1;
            double worst = 1.0 + 1e-10;
            auto consider = [&](int id, double val) {
                if (is_active[id] || val <= worst) return;
                worst = val;
                vid = id;
                };
            for (int j = 0; j < r_ && !(bland && vid >= 0); ++j) {
                consider(j, mu_[j]);
                consider(r_ + j, -mu_[j]);
            }
            for (std::size_t t = 0; t < cuts_.size() && !(bland && vid >= 0); ++t) {
                const int id = static_cast<int>(2 * r_ + t);
                consider(id, row_dot_mu(id));
            }
            if (vid < 0) return;  // primal feasible; dual feasibility was maintained

            row_of(vid, grow.data());
            // alpha = P^T g_v: expansion of the entering normal over active ones.
            for (int j = 0; j < r_; ++j) {
                double s = 0;
                for (int i = 0; i < r_; ++i)
                    s += pinv_[static_cast<std::size_t>(i) * r_ + j] * grow[i];
                alpha[j] = s;
            }

            // Dual ratio test; retry with the next candidate if the pivot
            // would make the active set numerically singular.
            std::vector<char> banned(r_, 0);
            while (true) {
                int leave = -1;
                double theta = 0;
                for (int l = 0; l < r_; ++l) {
                    if (banned[l] || alpha[l] <= 1e-11) continue;
                    const double ratio = pi_[l] / alpha[l];
                    if (leave < 0 || ratio < theta - 1e-15 ||
                        (ratio < theta + 1e-15 && active_[l] < active_[leave])) {
                        leave = l;
                        theta = ratio;
                    }
                }
                if (leave < 0)
                    throw numerical_error("tail-form LP: dual ratio test found no pivot");

                row_of(active_[leave], old_row.data());
                std::vector<double> w(r_);
                for (int i = 0; i < r_; ++i) w[i] = grow[i] - old_row[i];
                for (int j = 0; j < r_; ++j) {
                    double s = 0;
                    for (int i = 0; i < r_; ++i)
                        s += w[i] * pinv_[static_cast<std::size_t>(i) * r_ + j];
                    z[j] = s;
                }
                const double gamma = 1.0 + z[leave];
                if (std::abs(gamma) < 1e-10) {
                    banned[leave] = 1;
                    continue;
                }
                for (int i = 0; i < r_; ++i)
                    pe[i] = pinv_[static_cast<std::size_t>(i) * r_ + leave];
                for (int i = 0; i < r_; ++i) {
                    const double fi = pe[i] / gamma;
                    if (fi == 0.0) continue;
                    double* row = &pinv_[static_cast<std::size_t>(i) * r_];
                    for (int j = 0; j < r_; ++j) row[j] -= fi * z[j];
                }
                is_active[active_[leave]] = 0;
                is_active[vid] = 1;
                active_[leave] = vid;
                recompute_vertex();
                break;
            }

            double obj = 0;
            for (int j = 0; j < r_; ++j) obj += obj_[j] * mu_[j];
            if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
                last_obj = obj;
                stall = 0;
            } else {
                ++stall;
            }
        }
        throw numerical_error("tail-form LP: dual restoration failed to converge");
    }
};

inline double tail_form_ed(const CubeFunction& f, int d, double tol = 1e-9) {
    TailFormLp lp(f, d, tol);
    return lp.solve();
}

}  // namespace hcube::detail
