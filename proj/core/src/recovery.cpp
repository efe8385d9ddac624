#include "ellipsec/recovery.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellipsec/linprog.hpp"
#include "ellipsec/rng.hpp"

namespace ellipsec {

namespace {

double support_delta(const Eigen::MatrixXd& A, const std::vector<int>& support) {
    const int s = static_cast<int>(support.size());
    Eigen::MatrixXd sub(A.rows(), s);
    for (int i = 0; i < s; ++i) sub.col(i) = A.col(support[static_cast<size_t>(i)]);
    const Eigen::MatrixXd gram = sub.transpose() * sub;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    return std::max(std::abs(hi - 1.0), std::abs(lo - 1.0));
}

long binomial_capped(int m, int s, long cap) {
    double acc = 1.0;
    for (int i = 1; i <= s; ++i) {
        acc *= static_cast<double>(m - s + i) / static_cast<double>(i);
        if (acc > static_cast<double>(cap) * 2.0) return cap + 1;
    }
    return static_cast<long>(acc + 0.5);
}

void check_decode_inputs(const Eigen::MatrixXd& N, const Eigen::VectorXd& y, const char* who) {
    if (N.rows() < 1 || N.cols() <= N.rows()) {
        throw std::invalid_argument(std::string(who) + ": need 1 <= n < m");
    }
    if (y.size() != N.rows()) {
        throw std::invalid_argument(std::string(who) + ": measurement length mismatch");
    }
    if (!N.allFinite() || !y.allFinite()) {
        throw std::invalid_argument(std::string(who) + ": non-finite input");
    }
}

}  // namespace

RipEstimate rip_exact(const Eigen::MatrixXd& A, int s, long budget) {
    const int m = static_cast<int>(A.cols());
    if (s < 1 || s > std::min<int>(m, static_cast<int>(A.rows()))) {
        throw std::invalid_argument("rip_exact: need 1 <= s <= min(n, m)");
    }
    const long total = binomial_capped(m, s, budget);
    if (total > budget) {
        throw std::invalid_argument(
            "rip_exact: support enumeration exceeds budget; use rip_lower_mc");
    }
    RipEstimate out;
    out.s = s;
    out.method = RipMethod::exact_enumeration;
    std::vector<int> support(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) support[static_cast<size_t>(i)] = i;
    while (true) {
        out.delta = std::max(out.delta, support_delta(A, support));
        ++out.supports_checked;
        int i = s - 1;
        while (i >= 0 && support[static_cast<size_t>(i)] == m - s + i) --i;
        if (i < 0) break;
        ++support[static_cast<size_t>(i)];
        for (int j = i + 1; j < s; ++j) {
            support[static_cast<size_t>(j)] = support[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return out;
}

RipEstimate rip_lower_mc(const Eigen::MatrixXd& A, int s, int trials, uint64_t seed) {
    const int m = static_cast<int>(A.cols());
    if (s < 1 || s > std::min<int>(m, static_cast<int>(A.rows()))) {
        throw std::invalid_argument("rip_lower_mc: need 1 <= s <= min(n, m)");
    }
    if (trials < 1) throw std::invalid_argument("rip_lower_mc: trials must be >= 1");
    RipEstimate out;
    out.s = s;
    out.method = RipMethod::random_support_lower;
    std::vector<int> pool(static_cast<size_t>(m));
    for (int t = 0; t < trials; ++t) {
        RandomStream rs(seed, {0x41u, static_cast<uint64_t>(t)});
        for (int i = 0; i < m; ++i) pool[static_cast<size_t>(i)] = i;
        for (int i = 0; i < s; ++i) {
            const int j = i + rs.uniform_int(m - i);
            std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
        }
        std::vector<int> support(pool.begin(), pool.begin() + s);
        std::sort(support.begin(), support.end());
        out.delta = std::max(out.delta, support_delta(A, support));
        ++out.supports_checked;
    }
    return out;
}

QuasiConstants quasi_constants(const ExponentP& body_p, const ExponentP& error_q) {
    QuasiConstants qc;
    qc.c_body = std::pow(2.0, std::max(1.0, body_p.inv()));
    qc.c_error = std::pow(2.0, std::max(0.0, error_q.inv() - 1.0));
    return qc;
}

SandwichBounds recovery_error_sandwich(double radius_value, const QuasiConstants& qc) {
    if (!(radius_value >= 0.0)) {
        throw std::invalid_argument("recovery_error_sandwich: radius must be >= 0");
    }
    return {radius_value / qc.c_error, qc.c_body * radius_value};
}

DecodeResult decode_l1(const Eigen::MatrixXd& N, const Eigen::VectorXd& y, double tol) {
    check_decode_inputs(N, y, "decode_l1");
    const int n = static_cast<int>(N.rows());
    const int m = static_cast<int>(N.cols());
    Eigen::MatrixXd split(n, 2 * m);
    split.leftCols(m) = N;
    split.rightCols(m) = -N;
    const LpResult lp = solve_equality_lp(split, y, Eigen::VectorXd::Ones(2 * m), tol);
    if (!lp.feasible) throw std::runtime_error("decode_l1: infeasible measurement system");
    DecodeResult out;
    out.z = lp.x.head(m) - lp.x.tail(m);
    out.objective = out.z.cwiseAbs().sum();
    out.residual = (N * out.z - y).norm();
    out.iterations = lp.iterations;
    out.converged = lp.optimal && out.residual <= 1e-6 * (1.0 + y.norm());
    out.non_unique = lp.degenerate_optimum;
    return out;
}

DecodeResult decode_lp_irls(const Eigen::MatrixXd& N, const Eigen::VectorXd& y, double p,
                            const IrlsOptions& opts) {
    check_decode_inputs(N, y, "decode_lp_irls");
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("decode_lp_irls: need 0 < p <= 1");
    const ExponentP exp_p(p);
    const int m = static_cast<int>(N.cols());

    const Eigen::MatrixXd gram = N * N.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("decode_lp_irls: rank deficient measurement matrix");
    }
    Eigen::VectorXd z = N.transpose() * llt.solve(y);

    DecodeResult out;
    out.z = z;
    out.objective = quasi_norm(z, exp_p);
    double eps = opts.eps_start;
    double smooth_prev = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        Eigen::VectorXd inv_w(m);
        for (int j = 0; j < m; ++j) {
            inv_w[j] = std::pow(z[j] * z[j] + eps * eps, 1.0 - 0.5 * p);
        }
        const Eigen::MatrixXd weighted = N * inv_w.asDiagonal() * N.transpose();
        Eigen::LDLT<Eigen::MatrixXd> solver(
            weighted + 1e-14 * weighted.trace() * Eigen::MatrixXd::Identity(N.rows(), N.rows()));
        z = inv_w.asDiagonal() * (N.transpose() * solver.solve(y));

        const double objective = quasi_norm(z, exp_p);
        if (objective < out.objective) {
            out.objective = objective;
            out.z = z;
        }
        double smooth = 0.0;
        for (int j = 0; j < m; ++j) smooth += std::pow(z[j] * z[j] + eps * eps, 0.5 * p);
        const bool stalled = std::abs(smooth_prev - smooth) <= opts.stall_tol * (1.0 + smooth);
        smooth_prev = smooth;
        if (stalled) {
            if (eps <= opts.eps_floor) {
                ++iter;
                break;
            }
            eps = std::max(eps * 0.1, opts.eps_floor);
        }
    }
    out.residual = (N * out.z - y).norm();
    out.iterations = iter;
    out.converged = iter < opts.max_iters && out.residual <= 1e-6 * (1.0 + y.norm());
    return out;
}

double recovery_radius_upper(const Ellipsoid& E, const Eigen::MatrixXd& N, double p, double q,
                             int probe_count, uint64_t seed) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("recovery_radius_upper: need 0 < p <= 1");
    if (!(q > p) || q > 2.0) throw std::invalid_argument("recovery_radius_upper: need p < q <= 2");
    if (N.cols() != E.dim()) throw std::invalid_argument("recovery_radius_upper: dimension mismatch");
    if (probe_count < 0) throw std::invalid_argument("recovery_radius_upper: probe_count < 0");
    const int m = E.dim();
    const ExponentP exp_q(q);

    std::vector<Eigen::VectorXd> probes;
    for (int s = 1; 2 * s <= m; s *= 2) probes.push_back(extremal_sparse_witness(E, s));
    for (int j = 1; j <= m; j *= 2) {
        Eigen::VectorXd axis = Eigen::VectorXd::Zero(m);
        axis[j - 1] = E.sigma[j - 1];
        probes.push_back(std::move(axis));
    }
    RandomStream rs(seed, {0x42u});
    for (int i = 0; i < probe_count; ++i) {
        Eigen::VectorXd v = rs.normal_vector(m);
        probes.push_back(v / ellipsoid_gauge(v, E));
    }

    double worst = 0.0;
    for (const auto& x : probes) {
        const Eigen::VectorXd y = N * x;
        const DecodeResult dec = p == 1.0 ? decode_l1(N, y) : decode_lp_irls(N, y, p);
        worst = std::max(worst, quasi_norm(x - dec.z, exp_q));
    }
    return std::pow(2.0, 1.0 / q) * worst;
}

bool gaussian_rip_condition(int n, int m, int s, double constant) {
    if (n < 1 || m < 1 || s < 1 || s > m) {
        throw std::invalid_argument("gaussian_rip_condition: bad dimensions");
    }
    if (!(constant > 0.0)) {
        throw std::invalid_argument("gaussian_rip_condition: constant must be positive");
    }
    const double requirement =
        constant * static_cast<double>(s) *
        std::log(M_E * static_cast<double>(m) / static_cast<double>(s));
    return static_cast<double>(n) >= requirement;
}

}  // namespace ellipsec
