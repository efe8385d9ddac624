#include "ellipsec/linprog.hpp"

#include <Eigen/LU>

#include <stdexcept>
#include <vector>

namespace ellipsec {

namespace {

struct SimplexState {
    const Eigen::MatrixXd& A;
    const Eigen::VectorXd& b;
    std::vector<int> basis;
    Eigen::VectorXd x_basic;
    int iterations = 0;
};

/// Runs Bland-rule simplex pivots on the given cost until optimality.
/// Returns false when the problem is unbounded below (never the case for the
/// phase objectives used here, but guarded anyway).  Columns past flag_cols
/// (the artificials) are ignored by the alternate-optimum detection.
bool run_simplex(SimplexState& st, const Eigen::VectorXd& cost, double tol, int max_iters,
                 int flag_cols, bool* degenerate_optimum) {
    const int rows = static_cast<int>(st.A.rows());
    const int cols = static_cast<int>(st.A.cols());
    Eigen::MatrixXd basis_matrix(rows, rows);
    Eigen::VectorXd basic_cost(rows);
    while (st.iterations < max_iters) {
        for (int i = 0; i < rows; ++i) {
            basis_matrix.col(i) = st.A.col(st.basis[static_cast<size_t>(i)]);
            basic_cost[i] = cost[st.basis[static_cast<size_t>(i)]];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
        st.x_basic = lu.solve(st.b);
        const Eigen::VectorXd duals = lu.transpose().solve(basic_cost);

        std::vector<char> in_basis(static_cast<size_t>(cols), 0);
        for (int i : st.basis) in_basis[static_cast<size_t>(i)] = 1;

        int entering = -1;
        bool zero_reduced = false;
        for (int j = 0; j < cols; ++j) {
            if (in_basis[static_cast<size_t>(j)]) continue;
            const double reduced = cost[j] - st.A.col(j).dot(duals);
            if (reduced < -tol) {
                entering = j;
                break;
            }
            if (j < flag_cols && reduced <= tol) zero_reduced = true;
        }
        if (entering < 0) {
            if (degenerate_optimum) *degenerate_optimum = zero_reduced;
            return true;
        }

        const Eigen::VectorXd direction = lu.solve(st.A.col(entering));
        int leaving = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < rows; ++i) {
            if (direction[i] > tol) {
                const double ratio = st.x_basic[i] / direction[i];
                if (leaving < 0 || ratio < best_ratio - tol ||
                    (ratio < best_ratio + tol &&
                     st.basis[static_cast<size_t>(i)] < st.basis[static_cast<size_t>(leaving)])) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leaving < 0) return false;
        st.basis[static_cast<size_t>(leaving)] = entering;
        ++st.iterations;
    }
    throw std::runtime_error("solve_equality_lp: iteration limit exceeded");
}

}  // namespace

LpResult solve_equality_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double tol) {
    const int rows = static_cast<int>(A.rows());
    const int cols = static_cast<int>(A.cols());
    if (b.size() != rows || c.size() != cols) {
        throw std::invalid_argument("solve_equality_lp: shape mismatch");
    }
    if (rows < 1 || cols < 1) throw std::invalid_argument("solve_equality_lp: empty problem");
    if (!A.allFinite() || !b.allFinite() || !c.allFinite()) {
        throw std::invalid_argument("solve_equality_lp: non-finite input");
    }

    // Phase 1: flip rows so b >= 0, append artificial variables, drive their
    // total to zero starting from the identity basis.
    Eigen::MatrixXd ext(rows, cols + rows);
    Eigen::VectorXd b_pos = b;
    ext.leftCols(cols) = A;
    ext.rightCols(rows).setZero();
    for (int i = 0; i < rows; ++i) {
        if (b_pos[i] < 0.0) {
            b_pos[i] = -b_pos[i];
            ext.row(i).head(cols) = -A.row(i);
        }
        ext(i, cols + i) = 1.0;
    }
    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(cols + rows);
    phase1_cost.tail(rows).setOnes();

    SimplexState st{ext, b_pos, {}, Eigen::VectorXd(), 0};
    st.basis.resize(static_cast<size_t>(rows));
    for (int i = 0; i < rows; ++i) st.basis[static_cast<size_t>(i)] = cols + i;

    const int max_iters = 2000 + 50 * (rows + cols);
    LpResult out;
    out.x = Eigen::VectorXd::Zero(cols);
    if (!run_simplex(st, phase1_cost, tol, max_iters, cols, nullptr)) {
        throw std::runtime_error("solve_equality_lp: phase 1 unbounded");
    }
    double artificial_total = 0.0;
    for (int i = 0; i < rows; ++i) {
        if (st.basis[static_cast<size_t>(i)] >= cols) artificial_total += st.x_basic[i];
    }
    const double feas_scale = 1.0 + b_pos.cwiseAbs().maxCoeff();
    if (artificial_total > tol * feas_scale * 100.0) {
        out.feasible = false;
        out.iterations = st.iterations;
        return out;
    }

    // Pivot any artificial still in the basis (at zero level) onto a real
    // column; a row with no eligible column is redundant and keeps its
    // artificial pinned at zero, which is harmless for phase 2.
    for (int i = 0; i < rows; ++i) {
        if (st.basis[static_cast<size_t>(i)] < cols) continue;
        Eigen::MatrixXd basis_matrix(rows, rows);
        for (int k = 0; k < rows; ++k) {
            basis_matrix.col(k) = ext.col(st.basis[static_cast<size_t>(k)]);
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
        std::vector<char> in_basis(static_cast<size_t>(cols + rows), 0);
        for (int idx : st.basis) in_basis[static_cast<size_t>(idx)] = 1;
        for (int j = 0; j < cols; ++j) {
            if (in_basis[static_cast<size_t>(j)]) continue;
            const Eigen::VectorXd direction = lu.solve(ext.col(j));
            if (std::abs(direction[i]) > 1e-7) {
                st.basis[static_cast<size_t>(i)] = j;
                break;
            }
        }
    }

    // Phase 2: original objective over the extended tableau with artificial
    // columns priced out by a prohibitive cost so they never re-enter.
    Eigen::VectorXd phase2_cost(cols + rows);
    phase2_cost.head(cols) = c;
    const double big = 1.0 + 1e6 * c.cwiseAbs().maxCoeff();
    phase2_cost.tail(rows).setConstant(big);
    bool degenerate = false;
    if (!run_simplex(st, phase2_cost, tol, max_iters, cols, &degenerate)) {
        throw std::runtime_error("solve_equality_lp: objective unbounded below");
    }

    out.feasible = true;
    out.optimal = true;
    out.degenerate_optimum = degenerate;
    out.iterations = st.iterations;
    for (int i = 0; i < rows; ++i) {
        const int idx = st.basis[static_cast<size_t>(i)];
        if (idx < cols) out.x[idx] = st.x_basic[i];
    }
    out.objective = c.dot(out.x);
    return out;
}

}  // namespace ellipsec
