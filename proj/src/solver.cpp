#include "solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "common.hpp"

namespace leakage {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vec = Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Original LP pulled into compressed arrays once per solve/verify.
struct OrigLp {
    int m = 0, n = 0;
    SpMat A;  // m x n
    Vec b, c, lo, up;
    std::vector<RowSense> sense;

    explicit OrigLp(const LinearProgram& lp) {
        m = lp.num_rows();
        n = lp.num_columns();
        A.resize(m, n);
        std::vector<Triplet> trip;
        trip.reserve(lp.entries().size());
        for (const auto& e : lp.entries()) trip.emplace_back(e.row, e.col, e.value);
        A.setFromTriplets(trip.begin(), trip.end());
        b = Eigen::Map<const Vec>(lp.rhs().data(), m);
        c = Eigen::Map<const Vec>(lp.objective().data(), n);
        lo = Eigen::Map<const Vec>(lp.column_lower().data(), n);
        up = Eigen::Map<const Vec>(lp.column_upper().data(), n);
        sense = lp.row_sense();
    }
};

// Sense-aware row violation: positive when the row is broken.
inline double row_violation(RowSense s, double activity, double rhs) {
    double r = activity - rhs;
    switch (s) {
        case RowSense::Equal: return std::abs(r);
        case RowSense::LessEqual: return std::max(0.0, r);
        case RowSense::GreaterEqual: return std::max(0.0, -r);
    }
    return 0;
}

struct KktMetrics {
    double primal_abs = 0;     // max row violation
    double bound_abs = 0;      // max bound violation
    double dual_viol = 0;      // sign violations of y (row sense) and z (bounds)
    double complementarity = 0;
    double primal_obj = 0;
    double dual_obj = 0;
    double relative_gap = 0;
};

KktMetrics kkt_metrics(const OrigLp& o, const Vec& x, const Vec& y, const Vec& z) {
    KktMetrics k;
    Vec ax = o.A * x;
    for (int i = 0; i < o.m; ++i) {
        k.primal_abs = std::max(k.primal_abs, row_violation(o.sense[std::size_t(i)], ax[i], o.b[i]));
        // reported duals are d(obj)/d(rhs): <=0 for LessEqual, >=0 for GreaterEqual
        if (o.sense[std::size_t(i)] == RowSense::LessEqual) k.dual_viol = std::max(k.dual_viol, y[i]);
        if (o.sense[std::size_t(i)] == RowSense::GreaterEqual) k.dual_viol = std::max(k.dual_viol, -y[i]);
        double slack = o.b[i] - ax[i];
        if (o.sense[std::size_t(i)] != RowSense::Equal)
            k.complementarity = std::max(k.complementarity, std::abs(slack * y[i]));
    }
    k.primal_obj = o.c.dot(x);
    k.dual_obj = o.b.dot(y);
    for (int j = 0; j < o.n; ++j) {
        k.bound_abs = std::max({k.bound_abs, o.lo[j] - x[j], x[j] - o.up[j]});
        double zp = std::max(z[j], 0.0), zm = std::max(-z[j], 0.0);
        if (o.lo[j] > -kInf) {
            k.dual_obj += zp * o.lo[j];
            k.complementarity = std::max(k.complementarity, zp * std::abs(x[j] - o.lo[j]));
        } else {
            k.dual_viol = std::max(k.dual_viol, zp);
        }
        if (o.up[j] < kInf) {
            k.dual_obj -= zm * o.up[j];
            k.complementarity = std::max(k.complementarity, zm * std::abs(o.up[j] - x[j]));
        } else {
            k.dual_viol = std::max(k.dual_viol, zm);
        }
    }
    k.bound_abs = std::max(k.bound_abs, 0.0);
    k.relative_gap = std::abs(k.primal_obj - k.dual_obj) / (1.0 + std::abs(k.primal_obj));
    return k;
}

// ---------------------------------------------------------------------------
// Standard form: min c.x  s.t.  A x = b,  l <= x <= u  with every column
// bounded below. Rows gain slack columns; free columns are split; columns
// bounded only above are mirrored.
// ---------------------------------------------------------------------------

struct Standardized {
    int m = 0, n = 0;
    SpMat A;
    Vec b, c, l, u;
    double obj_constant = 0;

    struct Recover {
        int col = -1;      // internal column carrying the value (-1: constant)
        int neg_col = -1;  // second column of a free split
        double offset = 0;
        double sign = 1;
    };
    std::vector<Recover> recover;   // per original column
    std::vector<int> slack_of_row;  // internal column of the row's slack, -1 if none

    // set when presolve alone decides the outcome
    bool early = false;
    SolveStatus early_status = SolveStatus::Optimal;
    std::string early_message;
};

Standardized standardize(const OrigLp& o, const LinearProgram& lp) {
    Standardized s;
    s.m = o.m;
    s.b = o.b;
    s.recover.resize(std::size_t(o.n));
    s.slack_of_row.assign(std::size_t(o.m), -1);

    std::vector<int> col_nnz(std::size_t(o.n), 0);
    for (int j = 0; j < o.n; ++j) col_nnz[std::size_t(j)] = int(o.A.col(j).nonZeros());

    std::vector<Triplet> trip;
    std::vector<double> c2, l2, u2;
    auto new_col = [&](double cost, double lo, double hi) {
        c2.push_back(cost);
        l2.push_back(lo);
        u2.push_back(hi);
        return int(c2.size()) - 1;
    };

    for (int j = 0; j < o.n; ++j) {
        auto& rec = s.recover[std::size_t(j)];
        double lo = o.lo[j], hi = o.up[j], cost = o.c[j];
        if (col_nnz[std::size_t(j)] == 0) {
            // empty column: sits at whichever finite bound minimises cost
            double val;
            if (cost > 0 || (cost == 0 && lo > -kInf)) val = lo;
            else val = hi;
            if (!std::isfinite(val)) {
                s.early = true;
                s.early_status = SolveStatus::Unbounded;
                s.early_message = "column " + lp.column_name(j) + " is unbounded";
                return s;
            }
            rec.col = -1;
            rec.offset = val;
            s.obj_constant += cost * val;
            continue;
        }
        if (lo == hi) {
            rec.col = -1;
            rec.offset = lo;
            s.obj_constant += cost * lo;
            for (SpMat::InnerIterator it(o.A, j); it; ++it) s.b[it.row()] -= it.value() * lo;
            continue;
        }
        if (lo > -kInf) {
            rec.col = new_col(cost, lo, hi);
            for (SpMat::InnerIterator it(o.A, j); it; ++it)
                trip.emplace_back(it.row(), rec.col, it.value());
        } else if (hi < kInf) {
            // x = hi - x'
            rec.col = new_col(-cost, 0, kInf);
            rec.offset = hi;
            rec.sign = -1;
            s.obj_constant += cost * hi;
            for (SpMat::InnerIterator it(o.A, j); it; ++it) {
                s.b[it.row()] -= it.value() * hi;
                trip.emplace_back(it.row(), rec.col, -it.value());
            }
        } else {
            // free: x = x+ - x-
            rec.col = new_col(cost, 0, kInf);
            rec.neg_col = new_col(-cost, 0, kInf);
            for (SpMat::InnerIterator it(o.A, j); it; ++it) {
                trip.emplace_back(it.row(), rec.col, it.value());
                trip.emplace_back(it.row(), rec.neg_col, -it.value());
            }
        }
    }

    std::vector<int> row_nnz(std::size_t(o.m), 0);
    for (const auto& t : trip) row_nnz[std::size_t(t.row())]++;

    for (int i = 0; i < o.m; ++i) {
        RowSense sense = o.sense[std::size_t(i)];
        if (row_nnz[std::size_t(i)] == 0) {
            // empty row: either trivially consistent or infeasible
            if (row_violation(sense, 0.0, s.b[i]) > 1e-12 * (1.0 + std::abs(s.b[i]))) {
                s.early = true;
                s.early_status = SolveStatus::Infeasible;
                s.early_message = "row " + lp.row_name(i) + " is empty but not satisfiable";
                return s;
            }
            // keep the row; a slack absorbs it so ranks stay predictable
        }
        if (sense == RowSense::LessEqual) {
            s.slack_of_row[std::size_t(i)] = new_col(0, 0, kInf);
            trip.emplace_back(i, s.slack_of_row[std::size_t(i)], 1.0);
        } else if (sense == RowSense::GreaterEqual) {
            s.slack_of_row[std::size_t(i)] = new_col(0, 0, kInf);
            trip.emplace_back(i, s.slack_of_row[std::size_t(i)], -1.0);
        } else if (row_nnz[std::size_t(i)] == 0) {
            // consistent empty equality: give it a fixed slack so A has full
            // structural rank
            int sl = new_col(0, 0, 0);
            // a [0,0] column would be eliminated; bound it tightly instead
            l2[std::size_t(sl)] = 0;
            u2[std::size_t(sl)] = 0;
            trip.emplace_back(i, sl, 1.0);
        }
    }

    s.n = int(c2.size());
    if (s.n == 0) {
        s.early = true;
        s.early_status = SolveStatus::Optimal;
        return s;
    }
    s.A.resize(s.m, s.n);
    s.A.setFromTriplets(trip.begin(), trip.end());
    s.A.makeCompressed();
    s.c = Eigen::Map<const Vec>(c2.data(), s.n);
    s.l = Eigen::Map<const Vec>(l2.data(), s.n);
    s.u = Eigen::Map<const Vec>(u2.data(), s.n);
    return s;
}

// ---------------------------------------------------------------------------
// Ruiz equilibration. Returns row/column scale vectors applied to A in place;
// b, c and bounds are scaled by the caller.
// ---------------------------------------------------------------------------

struct Scaling {
    Vec row, col;
    double cost = 1, rhs = 1;
};

Scaling equilibrate(Standardized& s) {
    Scaling sc;
    sc.row = Vec::Ones(s.m);
    sc.col = Vec::Ones(s.n);
    for (int pass = 0; pass < 6; ++pass) {
        Vec rmax = Vec::Zero(s.m), cmax = Vec::Zero(s.n);
        for (int j = 0; j < s.n; ++j) {
            for (SpMat::InnerIterator it(s.A, j); it; ++it) {
                double a = std::abs(it.value());
                rmax[it.row()] = std::max(rmax[it.row()], a);
                cmax[j] = std::max(cmax[j], a);
            }
        }
        bool done = true;
        for (int i = 0; i < s.m; ++i) {
            if (rmax[i] <= 0) { rmax[i] = 1; continue; }
            if (rmax[i] > 1.01 || rmax[i] < 0.99) done = false;
            rmax[i] = 1.0 / std::sqrt(rmax[i]);
        }
        for (int j = 0; j < s.n; ++j) {
            if (cmax[j] <= 0) { cmax[j] = 1; continue; }
            if (cmax[j] > 1.01 || cmax[j] < 0.99) done = false;
            cmax[j] = 1.0 / std::sqrt(cmax[j]);
        }
        if (done) break;
        for (int j = 0; j < s.n; ++j)
            for (SpMat::InnerIterator it(s.A, j); it; ++it)
                it.valueRef() *= rmax[it.row()] * cmax[j];
        sc.row.array() *= rmax.array();
        sc.col.array() *= cmax.array();
    }
    // scaled problem: x_hat = x / col, b_hat = row .* b, c_hat = col .* c
    s.b.array() *= sc.row.array();
    s.c.array() *= sc.col.array();
    for (int j = 0; j < s.n; ++j) {
        if (s.l[j] > -kInf) s.l[j] /= sc.col[j];
        if (s.u[j] < kInf) s.u[j] /= sc.col[j];
    }
    sc.rhs = std::max(1.0, s.b.lpNorm<Eigen::Infinity>());
    sc.cost = std::max(1.0, s.c.lpNorm<Eigen::Infinity>());
    s.b /= sc.rhs;
    s.c /= sc.cost;
    for (int j = 0; j < s.n; ++j) {
        if (s.l[j] > -kInf) s.l[j] /= sc.rhs;
        if (s.u[j] < kInf) s.u[j] /= sc.rhs;
    }
    return sc;
}

// ---------------------------------------------------------------------------
// The interior-point core on the scaled standard form.
// ---------------------------------------------------------------------------

struct IpmResult {
    bool converged = false;
    Vec x, y, z, v;  // z: lower-bound duals, v: upper-bound duals
    int iterations = 0;
    bool primal_stalled = false;  // candidate infeasibility
    bool diverged_down = false;   // candidate unboundedness
};

class Ipm {
public:
    Ipm(const Standardized& s, const OrigLp& orig, const LinearProgram& lp, const Scaling& sc,
        const SolveTolerances& tol)
        : s_(s), orig_(orig), lp_(lp), sc_(sc), tol_(tol) {}

    IpmResult run();

    // Maps a scaled internal iterate back to original LP space.
    void recover(const Vec& x, const Vec& y, const Vec& z, const Vec& v, Vec& xo, Vec& yo,
                 Vec& zo) const;

private:
    void build_kkt_pattern();
    void factorize(const Vec& d);
    // solves [[-(D+rho), A^T],[A, delta]] [dx;dy] = [rx;ry] with refinement
    void solve_kkt(const Vec& d, const Vec& rx, const Vec& ry, Vec& dx, Vec& dy) const;

    const Standardized& s_;
    const OrigLp& orig_;
    const LinearProgram& lp_;
    const Scaling& sc_;
    SolveTolerances tol_;

    SpMat K_;
    std::vector<int> diag_pos_;  // position of each diagonal entry in K values
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
    bool analyzed_ = false;
    double rho_ = 1e-9, delta_ = 1e-9;
};

void Ipm::build_kkt_pattern() {
    const int n = s_.n, m = s_.m;
    std::vector<Triplet> trip;
    trip.reserve(std::size_t(s_.A.nonZeros()) + std::size_t(n + m));
    for (int j = 0; j < n; ++j) trip.emplace_back(j, j, -1.0);
    for (int j = 0; j < n; ++j)
        for (SpMat::InnerIterator it(s_.A, j); it; ++it)
            trip.emplace_back(n + int(it.row()), j, it.value());
    for (int i = 0; i < m; ++i) trip.emplace_back(n + i, n + i, delta_);
    K_.resize(n + m, n + m);
    K_.setFromTriplets(trip.begin(), trip.end());
    K_.makeCompressed();
    // diagonal entries come first in each column of the lower triangle
    diag_pos_.resize(std::size_t(n + m));
    const int* outer = K_.outerIndexPtr();
    const int* inner = K_.innerIndexPtr();
    for (int j = 0; j < n + m; ++j) {
        if (inner[outer[j]] != j) throw SolverError("kkt assembly: missing diagonal");
        diag_pos_[std::size_t(j)] = outer[j];
    }
}

void Ipm::factorize(const Vec& d) {
    double* vals = K_.valuePtr();
    for (int j = 0; j < s_.n; ++j) vals[diag_pos_[std::size_t(j)]] = -(d[j] + rho_);
    for (int i = 0; i < s_.m; ++i) vals[diag_pos_[std::size_t(s_.n + i)]] = delta_;
    if (!analyzed_) {
        ldlt_.analyzePattern(K_);
        analyzed_ = true;
    }
    for (int attempt = 0;; ++attempt) {
        ldlt_.factorize(K_);
        if (ldlt_.info() == Eigen::Success) return;
        if (attempt >= 3) throw SolverError("kkt factorization failed");
        rho_ *= 100;
        delta_ *= 100;
        for (int j = 0; j < s_.n; ++j) vals[diag_pos_[std::size_t(j)]] = -(d[j] + rho_);
        for (int i = 0; i < s_.m; ++i) vals[diag_pos_[std::size_t(s_.n + i)]] = delta_;
    }
}

void Ipm::solve_kkt(const Vec& d, const Vec& rx, const Vec& ry, Vec& dx, Vec& dy) const {
    const int n = s_.n, m = s_.m;
    Vec rhs(n + m);
    rhs.head(n) = rx;
    rhs.tail(m) = ry;
    Vec sol = ldlt_.solve(rhs);
    // refine against the unregularised system
    Vec best = sol;
    double best_res = kInf;
    for (int pass = 0; pass < 4; ++pass) {
        Vec res(n + m);
        Vec dxp = sol.head(n), dyp = sol.tail(m);
        res.head(n) = rx + d.cwiseProduct(dxp) - s_.A.transpose() * dyp;
        res.tail(m) = ry - s_.A * dxp;
        double rn = res.lpNorm<Eigen::Infinity>();
        if (rn < best_res) {
            best_res = rn;
            best = sol;
        }
        if (rn < 1e-12 * (1.0 + rhs.lpNorm<Eigen::Infinity>()) || pass == 3) break;
        sol += ldlt_.solve(res);
    }
    dx = best.head(n);
    dy = best.tail(m);
}

IpmResult Ipm::run() {
    const int n = s_.n, m = s_.m;
    IpmResult out;

    std::vector<int> lowered, uppered;
    for (int j = 0; j < n; ++j) {
        if (s_.l[j] > -kInf) lowered.push_back(j);
        if (s_.u[j] < kInf) uppered.push_back(j);
    }
    const double npairs = double(lowered.size() + uppered.size());
    if (npairs == 0) throw SolverError("interior point: no bounded columns");

    build_kkt_pattern();

    // --- starting point: min-norm primal / least-squares dual with shifts ---
    Vec ones = Vec::Ones(n);
    factorize(ones);
    Vec x0, y0, xt, yt;
    solve_kkt(ones, Vec::Zero(n), s_.b, x0, y0);        // x0: min-norm-ish feasible
    solve_kkt(ones, s_.c, Vec::Zero(m), xt, yt);        // yt: least-squares duals
    Vec x = x0, y = yt;
    Vec zraw = s_.c - s_.A.transpose() * y;

    Vec z = Vec::Zero(n), v = Vec::Zero(n);
    const double init_gap = 1.0;
    for (int j = 0; j < n; ++j) {
        bool has_l = s_.l[j] > -kInf, has_u = s_.u[j] < kInf;
        if (has_l && has_u) {
            double width = s_.u[j] - s_.l[j];
            double margin = std::min(0.25 * width, std::max(init_gap, 0.01 * width));
            x[j] = std::clamp(x[j], s_.l[j] + margin, s_.u[j] - margin);
            z[j] = std::max(zraw[j], 0.0) + init_gap;
            v[j] = std::max(-zraw[j], 0.0) + init_gap;
        } else if (has_l) {
            x[j] = std::max(x[j], s_.l[j] + init_gap);
            z[j] = std::max(zraw[j], 0.0) + init_gap;
        } else if (has_u) {
            x[j] = std::min(x[j], s_.u[j] - init_gap);
            v[j] = std::max(-zraw[j], 0.0) + init_gap;
        }
    }

    Vec xo(orig_.n), yo(orig_.m), zo(orig_.n);
    double mu0 = 0;

    Vec d(n), g(n), wv(n);
    Vec dx_a(n), dy_a(m), dz_a(n), dv_a(n);
    Vec dx(n), dy(m), dz(n), dv(n);

    for (int iter = 0;; ++iter) {
        out.iterations = iter;

        // complementarity gaps
        double mu = 0;
        for (int j : lowered) mu += (x[j] - s_.l[j]) * z[j];
        for (int j : uppered) mu += (s_.u[j] - x[j]) * v[j];
        mu /= npairs;
        if (iter == 0) mu0 = mu;

        // convergence is judged in original units
        recover(x, y, z, v, xo, yo, zo);
        KktMetrics k = kkt_metrics(orig_, xo, yo, zo);
        double bscale = 1.0 + orig_.b.lpNorm<Eigen::Infinity>();
        double cscale = 1.0 + orig_.c.lpNorm<Eigen::Infinity>();
        bool p_ok = k.primal_abs <= std::max(1e-9, tol_.feasibility * bscale) &&
                    k.primal_abs <= 1e-6;
        bool d_ok = k.dual_viol <= std::max(1e-9, tol_.feasibility * cscale);
        bool g_ok = k.relative_gap <= tol_.gap;
        auto give_up = [&]() {
            out.x = x; out.y = y; out.z = z; out.v = v;
            if (k.primal_abs > 1e-4 * bscale) out.primal_stalled = true;
            else if (k.dual_viol > 1e-4 * cscale) out.diverged_down = true;
            return out;
        };
        if (p_ok && d_ok && g_ok) {
            out.converged = true;
            out.x = x; out.y = y; out.z = z; out.v = v;
            return out;
        }
        if (iter >= tol_.max_iterations) return give_up();
        // divergence heuristics
        if (k.primal_obj < -1e12 * (1.0 + std::abs(s_.obj_constant)) &&
            k.primal_abs <= 1e-5 * bscale) {
            out.x = x; out.y = y; out.z = z; out.v = v;
            out.diverged_down = true;
            return out;
        }
        if (iter >= 20 && mu < 1e-10 * (1.0 + mu0) && k.primal_abs > 1e-5 * bscale) {
            out.x = x; out.y = y; out.z = z; out.v = v;
            out.primal_stalled = true;
            return out;
        }
        if (iter >= 30 && k.primal_abs <= 1e-7 * bscale && k.dual_viol > 1e-2 * cscale &&
            mu > 1e4 * (1.0 + mu0)) {
            // primal feasible but the dual cannot be repaired and the gap blows up
            out.x = x; out.y = y; out.z = z; out.v = v;
            out.diverged_down = true;
            return out;
        }

        // scaled residuals drive the Newton step
        Vec rp = s_.b - s_.A * x;
        Vec rd = s_.c - s_.A.transpose() * y - z + v;

        for (int j = 0; j < n; ++j) {
            double dj = 0;
            if (s_.l[j] > -kInf) {
                g[j] = std::max(x[j] - s_.l[j], 1e-300);
                dj += z[j] / g[j];
            } else {
                g[j] = 0;
            }
            if (s_.u[j] < kInf) {
                wv[j] = std::max(s_.u[j] - x[j], 1e-300);
                dj += v[j] / wv[j];
            } else {
                wv[j] = 0;
            }
            d[j] = std::min(dj, 1e16);
        }
        factorize(d);

        // predictor (affine scaling) direction
        Vec rx = rd;
        for (int j : lowered) rx[j] += z[j];
        for (int j : uppered) rx[j] -= v[j];
        solve_kkt(d, rx, rp, dx_a, dy_a);
        for (int j = 0; j < n; ++j) {
            dz_a[j] = (s_.l[j] > -kInf) ? (-g[j] * z[j] - z[j] * dx_a[j]) / g[j] : 0.0;
            dv_a[j] = (s_.u[j] < kInf) ? (-wv[j] * v[j] + v[j] * dx_a[j]) / wv[j] : 0.0;
        }

        auto max_step = [&](const Vec& px, const Vec& pz, const Vec& pv) {
            double ap = 1.0, ad = 1.0;
            for (int j : lowered) {
                if (px[j] < 0) ap = std::min(ap, -g[j] / px[j]);
                if (pz[j] < 0) ad = std::min(ad, -z[j] / pz[j]);
            }
            for (int j : uppered) {
                if (px[j] > 0) ap = std::min(ap, wv[j] / px[j]);
                if (pv[j] < 0) ad = std::min(ad, -v[j] / pv[j]);
            }
            return std::pair{ap, ad};
        };

        auto [apa, ada] = max_step(dx_a, dz_a, dv_a);
        double mu_aff = 0;
        for (int j : lowered) mu_aff += (g[j] + apa * dx_a[j]) * (z[j] + ada * dz_a[j]);
        for (int j : uppered) mu_aff += (wv[j] - apa * dx_a[j]) * (v[j] + ada * dv_a[j]);
        mu_aff /= npairs;
        double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 1e-8, 0.999);

        // corrector: rx = rd - rgz/g + rwv/w with
        //   rgz = target - g z - dxa dza,  rwv = target - w v - (-dxa) dva
        double target = sigma * mu;
        for (int j = 0; j < n; ++j) {
            double rxj = rd[j];
            if (s_.l[j] > -kInf) rxj -= (target - g[j] * z[j] - dx_a[j] * dz_a[j]) / g[j];
            if (s_.u[j] < kInf) rxj += (target - wv[j] * v[j] + dx_a[j] * dv_a[j]) / wv[j];
            rx[j] = rxj;
        }
        solve_kkt(d, rx, rp, dx, dy);
        for (int j = 0; j < n; ++j) {
            double rgz = (s_.l[j] > -kInf) ? target - g[j] * z[j] - dx_a[j] * dz_a[j] : 0.0;
            double rwv = (s_.u[j] < kInf) ? target - wv[j] * v[j] + dx_a[j] * dv_a[j] : 0.0;
            dz[j] = (s_.l[j] > -kInf) ? (rgz - z[j] * dx[j]) / g[j] : 0.0;
            dv[j] = (s_.u[j] < kInf) ? (rwv + v[j] * dx[j]) / wv[j] : 0.0;
        }

        auto [ap, ad] = max_step(dx, dz, dv);
        double tau = mu < 1e-6 ? 0.99995 : 0.9995;
        ap = std::min(1.0, tau * ap);
        ad = std::min(1.0, tau * ad);
        if (ap < 1e-11 && ad < 1e-11) return give_up();

        x += ap * dx;
        y += ad * dy;
        for (int j : lowered) z[j] = std::max(z[j] + ad * dz[j], 1e-300);
        for (int j : uppered) v[j] = std::max(v[j] + ad * dv[j], 1e-300);
    }
}

void Ipm::recover(const Vec& x, const Vec& y, const Vec& z, const Vec& v, Vec& xo, Vec& yo,
                  Vec& zo) const {
    (void)z;
    (void)v;
    // undo scalar scales, then Ruiz scales, then the structural transforms
    const int n = s_.n, m = s_.m;
    Vec xs(n);
    for (int j = 0; j < n; ++j) xs[j] = x[j] * sc_.rhs * sc_.col[j];
    yo.resize(orig_.m);
    for (int i = 0; i < m; ++i) yo[i] = y[i] * sc_.cost * sc_.row[i];

    xo.resize(orig_.n);
    zo.resize(orig_.n);
    for (int j = 0; j < orig_.n; ++j) {
        const auto& rec = s_.recover[std::size_t(j)];
        if (rec.col < 0) {
            xo[j] = rec.offset;
        } else if (rec.neg_col >= 0) {
            xo[j] = xs[rec.col] - xs[rec.neg_col];
        } else {
            xo[j] = rec.offset + rec.sign * xs[rec.col];
        }
    }
    // reduced costs follow from the original data so fixed columns get
    // consistent values too
    Vec aty = orig_.A.transpose() * yo;
    for (int j = 0; j < orig_.n; ++j) zo[j] = orig_.c[j] - aty[j];
}

std::string hint_from_residuals(const LinearProgram& lp, const OrigLp& o, const Vec& x) {
    Vec ax = o.A * x;
    double worst = 0;
    int worst_row = -1;
    for (int i = 0; i < o.m; ++i) {
        double viol = row_violation(o.sense[std::size_t(i)], ax[i], o.b[i]);
        if (viol > worst) {
            worst = viol;
            worst_row = i;
        }
    }
    if (worst_row < 0) return "no violated rows located";
    std::string name = lp.row_name(worst_row);
    std::string family = name.substr(0, name.find('['));
    std::ostringstream os;
    os << "first violated row family: " << family << " (worst row " << name << ", violation "
       << worst << ")";
    return os.str();
}

}  // namespace

double Solution::primal_value(const LinearProgram& lp, std::string_view column) const {
    int j = lp.column_index(column);
    if (j < 0) throw DataError("unknown column " + std::string(column));
    return primal.at(std::size_t(j));
}

double Solution::dual_value(const LinearProgram& lp, std::string_view row) const {
    int i = lp.row_index(row);
    if (i < 0) throw DataError("unknown row " + std::string(row));
    return dual.at(std::size_t(i));
}

Solution solve(const LinearProgram& lp, const SolveTolerances& tol) {
    auto t_start = std::chrono::steady_clock::now();
    lp.validate();
    OrigLp orig(lp);

    Solution sol;
    sol.primal.assign(std::size_t(orig.n), 0.0);
    sol.dual.assign(std::size_t(orig.m), 0.0);
    sol.reduced_cost.assign(std::size_t(orig.n), 0.0);

    Standardized s = standardize(orig, lp);
    auto finish = [&](Solution& out) {
        out.stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return out;
    };

    if (s.early) {
        sol.status = s.early_status;
        sol.message = s.early_message;
        if (s.early_status == SolveStatus::Optimal) {
            // everything was fixed by presolve
            for (int j = 0; j < orig.n; ++j) sol.primal[std::size_t(j)] = s.recover[std::size_t(j)].offset;
            for (int j = 0; j < orig.n; ++j) sol.reduced_cost[std::size_t(j)] = orig.c[j];
            sol.objective = s.obj_constant;
        }
        return finish(sol);
    }

    Scaling sc = equilibrate(s);
    Ipm ipm(s, orig, lp, sc, tol);
    IpmResult res = ipm.run();
    sol.stats.iterations = res.iterations;

    Vec xo, yo, zo;
    ipm.recover(res.x, res.y, res.z, res.v, xo, yo, zo);

    if (!res.converged) {
        if (res.diverged_down) {
            sol.status = SolveStatus::Unbounded;
            sol.message = "objective diverges towards -infinity";
            return finish(sol);
        }
        if (res.primal_stalled) {
            sol.status = SolveStatus::Infeasible;
            sol.message = hint_from_residuals(lp, orig, xo);
            return finish(sol);
        }
        throw SolverError("interior point did not converge within " +
                          std::to_string(tol.max_iterations) + " iterations");
    }

    // clamp the interior iterate exactly onto its bounds
    for (int j = 0; j < orig.n; ++j)
        xo[j] = std::clamp(xo[j], orig.lo[j], orig.up[j]);

    sol.status = SolveStatus::Optimal;
    sol.objective = orig.c.dot(xo);
    for (int j = 0; j < orig.n; ++j) sol.primal[std::size_t(j)] = xo[j];
    for (int i = 0; i < orig.m; ++i) sol.dual[std::size_t(i)] = yo[i];
    for (int j = 0; j < orig.n; ++j) sol.reduced_cost[std::size_t(j)] = zo[j];
    return finish(sol);
}

VerifyReport verify(const LinearProgram& lp, const Solution& solution, double flag_threshold) {
    OrigLp o(lp);
    if (int(solution.primal.size()) != o.n || int(solution.dual.size()) != o.m)
        throw DataError("verify: solution does not match the LP dimensions");
    Vec x = Eigen::Map<const Vec>(solution.primal.data(), o.n);
    Vec y = Eigen::Map<const Vec>(solution.dual.data(), o.m);
    Vec z;
    if (int(solution.reduced_cost.size()) == o.n) {
        z = Eigen::Map<const Vec>(solution.reduced_cost.data(), o.n);
    } else {
        z = o.c - o.A.transpose() * y;
    }
    KktMetrics k = kkt_metrics(o, x, y, z);
    VerifyReport r;
    r.max_primal_residual = k.primal_abs;
    r.max_bound_violation = k.bound_abs;
    r.max_dual_violation = k.dual_viol;
    r.max_complementarity = k.complementarity;
    r.relative_gap = k.relative_gap;

    Vec ax = o.A * x;
    for (int i = 0; i < o.m; ++i) {
        if (row_violation(o.sense[std::size_t(i)], ax[i], o.b[i]) > flag_threshold)
            r.flagged_rows.push_back(lp.row_name(i));
    }
    return r;
}

bool VerifyReport::acceptable(double feasibility, double gap) const {
    return max_primal_residual <= feasibility && max_bound_violation <= feasibility &&
           relative_gap <= gap;
}

std::string VerifyReport::describe() const {
    std::ostringstream os;
    os << "primal residual " << max_primal_residual << ", bound violation " << max_bound_violation
       << ", dual violation " << max_dual_violation << ", complementarity " << max_complementarity
       << ", relative gap " << relative_gap << ", flagged rows " << flagged_rows.size();
    return os.str();
}

}  // namespace leakage
