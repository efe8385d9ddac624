#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "ellipsec/ellipsoid.hpp"

namespace ellipsec {

/// Information map: an n x m matrix of full row rank with n < m.
struct InfoMatrix {
    InfoMatrix(Eigen::MatrixXd entries_, uint64_t seed_);

    int n() const { return static_cast<int>(entries.rows()); }
    int m() const { return static_cast<int>(entries.cols()); }

    Eigen::MatrixXd entries;
    uint64_t seed = 0;
};

/// i.i.d. standard Gaussian entries, filled row-major from a stream keyed by
/// the seed alone; identical (n, m, seed) calls are bit-identical.
InfoMatrix sample_gaussian_info(int n, int m, uint64_t seed);

/// Subspace of R^m given by an orthonormal basis (columns).
struct Subspace {
    Subspace(Eigen::MatrixXd basis_, int codim_);

    /// Orthonormalizes the given spanning columns (must be independent).
    static Subspace from_span(const Eigen::MatrixXd& span);

    int dim() const { return static_cast<int>(basis.cols()); }
    int ambient() const { return static_cast<int>(basis.rows()); }

    Eigen::MatrixXd basis;
    int codim = 0;
};

/// Orthonormal basis of ker N via a full Householder QR of N^T.
/// Rank-deficient N raises an error rather than repairing silently.
Subspace kernel_basis(const InfoMatrix& N);

/// span{e_{n+1}, ..., e_m}: the section that attains the minimal radius for
/// diagonal bodies when the error norm is weaker than the body norm.
Subspace coordinate_tail_subspace(int m, int n);

enum class RadiusMethod { exact_p2, multistart, bruteforce };

const char* radius_method_name(RadiusMethod method);

struct RadiusEstimate {
    double value = 0.0;
    RadiusMethod method = RadiusMethod::multistart;
    Eigen::VectorXd witness;
    double witness_gauge = 0.0;
    int restarts = 0;
    bool converged = false;
};

/// Exact circumradius of E cap S for p = 2: the reciprocal square root of the
/// smallest eigenvalue of B^T diag(sigma^-2) B.
RadiusEstimate radius_p2_exact(const Ellipsoid& E, const Subspace& S);

struct MaximizeOptions {
    /// 0 means the default 16 + 4 dim(S).
    int restarts = 0;
    int iters = 400;
    double tol = 1e-12;
    uint64_t seed = 0;
    /// Skip the p = 2 closed form and run the generic optimizer (testing).
    bool force_generic = false;
};

/// Certified lower estimate of the section radius: minimizes the gauge of
/// B u over unit coefficient vectors u by smoothed projected gradient descent
/// with multistart (coordinate axes plus uniform directions), then evaluates
/// the best witness with the exact gauge.  p = 2 dispatches to the closed form.
RadiusEstimate radius_maximize(const Ellipsoid& E, const Subspace& S,
                               const MaximizeOptions& opts = {});

/// Dense angular grid search for dim(S) <= 3; within O(grid step^2) of the
/// truth.  Doubling the per-axis resolution refines the grid in a nested way,
/// so estimates are monotone along such refinements.  Test oracle only.
RadiusEstimate radius_oracle_bruteforce(const Ellipsoid& E, const Subspace& S, long grid_density);

struct CoordinateWitness {
    Eigen::VectorXd x;
    /// Squared first coordinate of x, which equals ||P_ker e_1||_2^2.
    double x1sq = 0.0;
    bool degenerate = false;
};

/// Unit-norm projection of e_1 onto ker N; the candidate kernel vector with
/// the largest possible first coordinate.
CoordinateWitness large_coordinate_witness(const InfoMatrix& N);

struct LowerWitness {
    Eigen::VectorXd x_tilde;
    double norm2 = 0.0;
    double gauge = 0.0;
    bool feasible = false;
    bool degenerate = false;
};

/// Rescales the large-coordinate witness by 1/(1 + 1/sigma_1).  When the
/// result lies in E it certifies section radius >= sigma_1/(1 + sigma_1).
/// Requires 1 < p <= 2.
LowerWitness lower_bound_witness(const Ellipsoid& E, const InfoMatrix& N);

struct RadiusTrial {
    int trial = 0;
    uint64_t trial_seed = 0;
    double radius = 0.0;
    double witness_gauge = 0.0;
    bool converged = false;
    /// Whether the closed-form optimal-section floor was available and held.
    bool floor_ok = true;
};

struct TrialSummary {
    std::vector<RadiusTrial> trials;
    double median = 0.0;
    double q10 = 0.0;
    double q90 = 0.0;
    /// Minimal-radius floor used for the per-trial check, 0 when unavailable.
    double floor_value = 0.0;
    RadiusMethod method = RadiusMethod::multistart;
};

/// Radii of E cap ker(G_t) over independent Gaussian draws G_t, with
/// per-trial streams keyed by (seed, t).  Deterministic for fixed inputs
/// regardless of the thread count.
TrialSummary random_section_radius_trials(const Ellipsoid& E, int n, int trials,
                                          RadiusMethod method, uint64_t seed, int threads = 1,
                                          const MaximizeOptions& opts = {});

double median_of(std::vector<double> values);
double quantile_of(std::vector<double> values, double q);

}  // namespace ellipsec
