#pragma once

#include <Eigen/Core>

namespace ellipsec {

struct LpResult {
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
    bool feasible = false;
    bool optimal = false;
    /// A nonbasic column with zero reduced cost exists at the optimum, so the
    /// optimal vertex is not unique.
    bool degenerate_optimum = false;
};

/// min c'x subject to A x = b, x >= 0, by a two-phase revised simplex with
/// Bland's rule (anti-cycling).  The basis is refactorized every pivot, which
/// is affordable at the problem sizes used here and keeps the solve stable.
LpResult solve_equality_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double tol = 1e-9);

}  // namespace ellipsec
