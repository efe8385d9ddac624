#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>

#include "ellipsec/ellipsoid.hpp"

namespace ellipsec {

/// E ||g||_2 for a standard Gaussian vector in R^k, evaluated through
/// log-Gamma: sqrt(2) Gamma((k+1)/2) / Gamma(k/2).  Defined as 0 for k = 0.
/// Stable for k up to at least 1e6.
double expected_gaussian_norm(int k);

/// q-th moment constant gamma_q = (E |g|^q)^{1/q} for q >= 1.
double gaussian_moment(double q);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

struct KhintchineConstants {
    double c_low = 0.2;
    double c_high = 3.0;
};

/// Two-sided bracket for E ||(b_j g_j)_j||_q with independent standard
/// Gaussians.  For finite q the bracket is [gamma_1 ||b||_q, gamma_q ||b||_q];
/// for q = inf it is c_low * S and c_high * S with
/// S = sup_j b*_j sqrt(log j + 1) on the non-increasing rearrangement b*.
Interval khintchine_bounds(const Eigen::VectorXd& b, double q,
                           const KhintchineConstants& kc = {});

struct MeanWidthEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
    int dim = 0;
    /// Euclidean truncation radius used for the body, +inf when none.
    double truncation = 0.0;
};

struct GaussianSupResult {
    MeanWidthEstimate estimate;
    /// Closed-form upper bound: sqrt(p*) ||sigma||_{p*} for p > 1,
    /// sup_j sigma_j sqrt(log j + 1) for p <= 1.
    double sup_bound = 0.0;
};

/// Monte Carlo estimate of E sup_{y in E} <g, y> with per-sample streams
/// keyed by (seed, sample index); the thread count never changes the result.
GaussianSupResult expected_sup_ellipsoid(const Ellipsoid& E, long samples, uint64_t seed,
                                         int threads = 1);

/// h_{E \cap rho B_2}(u) through the infimal convolution
/// inf_v { h_E(v) + rho ||u - v||_2 }, solved by first-order descent with
/// step halving.  Any iterate gives an upper bound; the returned value also
/// never exceeds min(h_E(u), rho ||u||_2).  Requires p >= 1.
double support_function_intersection(const Ellipsoid& E, double rho, const Eigen::VectorXd& u,
                                     double tol = 1e-8, int max_iters = 10000);

/// Gaussian mean width of E cap rho B_2, normalized by E||g||_2 so that the
/// unit ball has mean width exactly 1.
MeanWidthEstimate mean_width_rounded(const Ellipsoid& E, double rho, long samples, uint64_t seed,
                                     int threads = 1, double tol = 1e-8);

struct MstarOptions {
    /// Replace sqrt(k) -> E||g||_2 over R^k, sqrt(p*) -> gamma_{p*} and
    /// sqrt(m) -> E||g||_2 over R^m, turning the bound into the exact
    /// moment-chain constant.
    bool gaussian_constants = false;
    double constant = 1.0;
    KhintchineConstants kc = {};
};

/// Split upper bound for the mean width of E cap rho B_2 at cut index k:
///   p = 1:  m^{-1/2} (rho sqrt(k) + sup_{k+1<=j<=m} sigma_j sqrt(log j + 1))
///   p > 1:  sqrt(p*) m^{-1/2} (rho sqrt(k) + (sum_{j>k} sigma_j^{p*})^{1/p*})
/// Requires 0 <= k < m and p >= 1.
double mstar_bound(const Ellipsoid& E, double rho, int k, const MstarOptions& opts = {});

struct EscapeBound {
    double radius_bound = 0.0;
    double success_prob = 0.0;
    double rho = 0.0;
    int k = 0;
};

/// Section-radius bound for a random codimension-n subspace:
/// radius <= 2 (a_m / a_n) * mstar_bound with probability at least
/// 1 - 3.5 exp(-a_n^2 / 72), clamped to [0, 1]; a_k = E||g||_2 on R^k.
EscapeBound escape_bound(const Ellipsoid& E, double rho, int k, int n,
                         const MstarOptions& opts = {});

/// escape_bound with (k, rho) chosen from the profile: k proportional to n
/// (scaled by 1/p* for p > 1) and rho matching the tail term at scale
/// 1/sqrt(k), mirroring how the split bound is balanced.
EscapeBound escape_bound_auto(const Ellipsoid& E, int n, double k_fraction = 0.25,
                              const MstarOptions& opts = {});

}  // namespace ellipsec
