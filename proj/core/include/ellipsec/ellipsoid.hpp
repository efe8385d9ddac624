#pragma once

#include <Eigen/Core>

#include "ellipsec/exponents.hpp"
#include "ellipsec/semiaxes.hpp"

namespace ellipsec {

/// The body { x in R^m : ||(x_j / sigma_j)_j||_p <= 1 }.  For p < 1 this is a
/// star-shaped quasi-convex body, for p >= 1 a convex one.
struct Ellipsoid {
    Ellipsoid(ExponentP p_, Semiaxes sigma_);

    int dim() const { return sigma.size(); }

    ExponentP p;
    Semiaxes sigma;
};

/// ||x||_p for p in (0, inf], overflow-safe (largest modulus factored out).
double quasi_norm(const Eigen::VectorXd& x, const ExponentP& p);

/// Minkowski gauge of E at x: ||(x_j / sigma_j)||_p.
double ellipsoid_gauge(const Eigen::VectorXd& x, const Ellipsoid& E);

/// Membership x in E up to a relative boundary tolerance.
bool ellipsoid_contains(const Ellipsoid& E, const Eigen::VectorXd& x, double tol = 1e-12);

/// sup_{y in E} <u, y>.  For p >= 1 this is ||(sigma_j u_j)||_{p*}; for p < 1
/// the supremum of a linear functional is reached on the convex hull, which is
/// the cross-polytope with vertices +-sigma_j e_j, so it equals max_j sigma_j |u_j|.
double support_function(const Ellipsoid& E, const Eigen::VectorXd& u);

/// ||x||_{p,t} = ||(j^{1/p - 1/t} x*_j)||_t with x* the non-increasing
/// rearrangement of moduli and 1-based j.  t = inf uses sup_j j^{1/p} x*_j.
double lorentz_norm(const Eigen::VectorXd& x, double p, double t);

/// sigma_s(x)_p = ||x - x_S||_p minimized over supports S of size s, i.e. the
/// p-quasi-norm of everything below the s largest moduli.  s = 0 gives ||x||_p.
double best_s_term_error(const Eigen::VectorXd& x, int s, const ExponentP& p);

/// Boundary vector with 2s equal positive entries on the leading coordinates
/// and zeros elsewhere, scaled so the gauge is exactly 1.  Requires 2s <= m.
Eigen::VectorXd extremal_sparse_witness(const Ellipsoid& E, int s);

}  // namespace ellipsec
