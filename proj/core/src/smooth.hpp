#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>

namespace ellipsec::detail {

struct SmoothNorm {
    double value = 0.0;
    Eigen::VectorXd grad;
};

/// Smoothed ||z||_r with value and gradient.  For finite r the entries are
/// regularized as (z_j^2 + eps^2)^{r/2}, which upper-bounds the exact norm
/// and is differentiable everywhere; for r = inf a two-sided log-sum-exp with
/// temperature eps is used (max |z| <= value <= max |z| + eps log(2n)).
/// Scale-invariant evaluation: the largest modulus is factored out first.
inline SmoothNorm smoothed_norm(const Eigen::VectorXd& z, double r, double eps) {
    SmoothNorm out;
    const Eigen::Index n = z.size();
    out.grad = Eigen::VectorXd::Zero(n);
    if (n == 0) return out;

    if (std::isinf(r)) {
        const double peak = z.cwiseAbs().maxCoeff();
        const double t = std::max(eps, 1e-100 * std::max(peak, 1.0));
        Eigen::VectorXd wp(n), wm(n);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            wp[i] = std::exp((z[i] - peak) / t);
            wm[i] = std::exp((-z[i] - peak) / t);
            sum += wp[i] + wm[i];
        }
        out.value = peak + t * std::log(sum);
        for (Eigen::Index i = 0; i < n; ++i) out.grad[i] = (wp[i] - wm[i]) / sum;
        return out;
    }

    double scale = z.cwiseAbs().maxCoeff();
    if (scale == 0.0 && eps == 0.0) return out;
    scale = std::max(scale, eps);
    const double eps_hat = std::max(eps / scale, 1e-100);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double zh = z[i] / scale;
        acc += std::pow(zh * zh + eps_hat * eps_hat, 0.5 * r);
    }
    out.value = scale * std::pow(acc, 1.0 / r);
    const double outer = std::pow(acc, (1.0 - r) / r);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double zh = z[i] / scale;
        out.grad[i] = outer * zh * std::pow(zh * zh + eps_hat * eps_hat, 0.5 * r - 1.0);
    }
    return out;
}

}  // namespace ellipsec::detail
