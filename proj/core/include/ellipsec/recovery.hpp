#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "ellipsec/ellipsoid.hpp"

namespace ellipsec {

enum class RipMethod { exact_enumeration, random_support_lower };

struct RipEstimate {
    int s = 0;
    double delta = 0.0;
    RipMethod method = RipMethod::exact_enumeration;
    long supports_checked = 0;
};

/// Restricted isometry constant delta_s of A: the largest deviation of a
/// Gram eigenvalue of any s-column submatrix from 1, by full enumeration.
/// Throws when C(m, s) exceeds the budget; use rip_lower_mc then.
RipEstimate rip_exact(const Eigen::MatrixXd& A, int s, long budget = 1000000);

/// Lower estimate of delta_s from randomly drawn supports.
RipEstimate rip_lower_mc(const Eigen::MatrixXd& A, int s, int trials, uint64_t seed);

struct QuasiConstants {
    /// Doubling constant: K + K inside C_K K for the body gauge.
    double c_body = 2.0;
    /// Quasi-triangle constant of the error norm.
    double c_error = 1.0;
};

/// Constants for the body exponent p (2^{1/p} when p < 1, else 2) and the
/// error exponent q (2^{1/q - 1} when q < 1, else 1).
QuasiConstants quasi_constants(const ExponentP& body_p, const ExponentP& error_q);

struct SandwichBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Brackets the optimal worst-case recovery error by the section radius:
/// radius / c_error <= optimal error <= c_body * radius.
SandwichBounds recovery_error_sandwich(double radius_value, const QuasiConstants& qc);

struct DecodeResult {
    Eigen::VectorXd z;
    double objective = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    /// decode_l1 only: the minimizer is not the unique optimal vertex.
    bool non_unique = false;
};

/// Basis pursuit: min ||z||_1 subject to N z = y, solved as a linear program
/// over the positive and negative parts of z.  Returns a vertex solution.
DecodeResult decode_l1(const Eigen::MatrixXd& N, const Eigen::VectorXd& y, double tol = 1e-9);

struct IrlsOptions {
    double eps_start = 1e-1;
    double eps_floor = 1e-9;
    int max_iters = 400;
    /// Relative stall threshold that triggers an epsilon decrease.
    double stall_tol = 1e-8;
};

/// Iteratively reweighted least squares for min ||z||_p^p subject to N z = y
/// with 0 < p <= 1.  Each iterate solves a weighted least-squares projection;
/// epsilon decreases on stalls.  Returns the best feasible iterate seen under
/// the exact p-quasi-norm, so the objective never exceeds the starting
/// least-squares point's.
DecodeResult decode_lp_irls(const Eigen::MatrixXd& N, const Eigen::VectorXd& y, double p,
                            const IrlsOptions& opts = {});

/// Upper estimate of the worst-case q-norm recovery error of the p-minimizing
/// decoder over E: probes sparse boundary witnesses, weighted axis vectors and
/// random boundary points, decodes each, and returns 2^{1/q} times the
/// largest observed error.  Requires 0 < p <= 1 and p < q <= 2.
double recovery_radius_upper(const Ellipsoid& E, const Eigen::MatrixXd& N, double p, double q,
                             int probe_count, uint64_t seed);

/// Sample-size condition n >= C1 s log(e m / s) under which a scaled Gaussian
/// matrix is s-RIP with high probability.
bool gaussian_rip_condition(int n, int m, int s, double constant = 1.0);

}  // namespace ellipsec
