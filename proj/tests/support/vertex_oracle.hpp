#pragma once

// Exhaustive vertex-enumeration LP oracle. Independent of the production
// solver: every optimal vertex is found by enumerating active-constraint
// subsets and solving the resulting square systems directly. Only usable
// for tiny programs.

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "lp.hpp"

namespace leakage::testsupport {

// Minimum objective over all vertices of the feasible region, or nullopt if
// no feasible vertex exists.
inline std::optional<double> vertex_enumeration_minimum(const LinearProgram& lp) {
    const double inf = std::numeric_limits<double>::infinity();
    const int n = lp.num_columns();

    // dense constraint list: a.x (= | <= | >=) rhs
    struct Con {
        Eigen::VectorXd a;
        double rhs;
        RowSense sense;
    };
    std::vector<Con> cons;
    std::vector<int> equalities;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(lp.num_rows(), n);
    for (const auto& e : lp.entries()) A(e.row, e.col) = e.value;
    for (int i = 0; i < lp.num_rows(); ++i) {
        cons.push_back({A.row(i).transpose(), lp.rhs()[std::size_t(i)],
                        lp.row_sense()[std::size_t(i)]});
        if (cons.back().sense == RowSense::Equal) equalities.push_back(int(cons.size()) - 1);
    }
    for (int j = 0; j < n; ++j) {
        double lo = lp.column_lower()[std::size_t(j)], up = lp.column_upper()[std::size_t(j)];
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        a[j] = 1.0;
        if (lo > -inf) cons.push_back({a, lo, RowSense::GreaterEqual});
        if (up < inf) cons.push_back({a, up, RowSense::LessEqual});
    }

    // candidate active constraints beyond the always-active equalities
    std::vector<int> pool;
    for (int k = 0; k < int(cons.size()); ++k) {
        if (cons[std::size_t(k)].sense != RowSense::Equal) pool.push_back(k);
    }
    const int need = n - int(equalities.size());
    if (need < 0) return std::nullopt;

    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) c[j] = lp.objective()[std::size_t(j)];

    double best = inf;
    bool found = false;
    std::vector<int> pick(static_cast<std::size_t>(need));

    auto try_vertex = [&]() {
        Eigen::MatrixXd B(n, n);
        Eigen::VectorXd rhs(n);
        int row = 0;
        for (int k : equalities) {
            B.row(row) = cons[std::size_t(k)].a.transpose();
            rhs[row] = cons[std::size_t(k)].rhs;
            ++row;
        }
        for (int k : pick) {
            B.row(row) = cons[std::size_t(k)].a.transpose();
            rhs[row] = cons[std::size_t(k)].rhs;
            ++row;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        if (!lu.isInvertible()) return;
        Eigen::VectorXd x = lu.solve(rhs);

        double scale = 1.0;
        for (const auto& con : cons) scale = std::max(scale, std::abs(con.rhs));
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(x[j]));
        const double tol = 1e-7 * scale;
        for (const auto& con : cons) {
            double v = con.a.dot(x) - con.rhs;
            if (con.sense == RowSense::Equal && std::abs(v) > tol) return;
            if (con.sense == RowSense::LessEqual && v > tol) return;
            if (con.sense == RowSense::GreaterEqual && v < -tol) return;
        }
        double obj = c.dot(x);
        if (!found || obj < best) best = obj;
        found = true;
    };

    // iterate over C(|pool|, need) subsets
    std::vector<int> idx(static_cast<std::size_t>(need));
    for (int i = 0; i < need; ++i) idx[std::size_t(i)] = i;
    if (need == 0) {
        try_vertex();
    } else if (need <= int(pool.size())) {
        while (true) {
            for (int i = 0; i < need; ++i) pick[std::size_t(i)] = pool[std::size_t(idx[std::size_t(i)])];
            try_vertex();
            int i = need - 1;
            while (i >= 0 && idx[std::size_t(i)] == int(pool.size()) - need + i) --i;
            if (i < 0) break;
            ++idx[std::size_t(i)];
            for (int k = i + 1; k < need; ++k) idx[std::size_t(k)] = idx[std::size_t(k - 1)] + 1;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

}  // namespace leakage::testsupport
