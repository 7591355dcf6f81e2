#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lp.hpp"

namespace leakage {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct SolveTolerances {
    double feasibility = 1e-8;  // relative primal/dual residual target
    double gap = 1e-8;          // relative duality gap target
    int max_iterations = 200;
};

struct SolveStats {
    int iterations = 0;
    double wall_seconds = 0;
};

// Primal/dual solution of a LinearProgram. Row duals are reported as
// d(objective)/d(rhs) of the minimisation, so the dual of a balance row is
// the marginal system cost of one extra unit of demand.
struct Solution {
    SolveStatus status = SolveStatus::Optimal;
    double objective = 0;
    std::vector<double> primal;        // per column
    std::vector<double> dual;          // per row
    std::vector<double> reduced_cost;  // per column, c - A^T y
    SolveStats stats;
    std::string message;  // populated for non-optimal outcomes

    double primal_value(const LinearProgram& lp, std::string_view column) const;
    double dual_value(const LinearProgram& lp, std::string_view row) const;
};

// Solves to optimality with a sparse primal-dual interior-point method
// (Mehrotra predictor-corrector on the regularised augmented system).
// Deterministic for fixed inputs. Throws SolverError on numerical failure;
// infeasibility/unboundedness is classified and returned in the status.
Solution solve(const LinearProgram& lp, const SolveTolerances& tol = {});

// Independent check of any claimed solution against the LP.
struct VerifyReport {
    double max_primal_residual = 0;   // absolute row violation after sense
    double max_bound_violation = 0;   // absolute column bound violation
    double max_dual_violation = 0;    // sign violations of duals/reduced costs
    double max_complementarity = 0;   // |slack * dual| over rows and bounds
    double relative_gap = 0;          // |primal obj - dual obj| / (1 + |primal obj|)
    std::vector<std::string> flagged_rows;  // rows violated beyond the threshold

    bool acceptable(double feasibility = 1e-6, double gap = 1e-6) const;
    std::string describe() const;
};

VerifyReport verify(const LinearProgram& lp, const Solution& solution,
                    double flag_threshold = 1e-6);

}  // namespace leakage
