#include "ellipsec/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ellipsec/parallel.hpp"
#include "ellipsec/rng.hpp"
#include "smooth.hpp"

namespace ellipsec {

namespace {

constexpr double kLn2 = 0.6931471805599453094;
constexpr double kLnPi = 1.1447298858494001741;

double mean_and_stderr(const std::vector<double>& vals, double& std_error) {
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const auto n = static_cast<double>(vals.size());
    std_error = vals.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return mean;
}

/// sup_{j >= from} sigma_j sqrt(log j + 1), 1-based from.
double log_weighted_sup(const Semiaxes& sigma, int from) {
    double best = 0.0;
    for (int j = from; j <= sigma.size(); ++j) {
        best = std::max(best, sigma.at(j) * std::sqrt(std::log(static_cast<double>(j)) + 1.0));
    }
    return best;
}

}  // namespace

double expected_gaussian_norm(int k) {
    if (k < 0) throw std::invalid_argument("expected_gaussian_norm: k must be >= 0");
    if (k == 0) return 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(0.5 * kLn2 + std::lgamma(0.5 * (kd + 1.0)) - std::lgamma(0.5 * kd));
}

double gaussian_moment(double q) {
    if (!(q >= 1.0) || std::isinf(q)) {
        throw std::invalid_argument("gaussian_moment: q must lie in [1, inf)");
    }
    const double log_moment = 0.5 * q * kLn2 + std::lgamma(0.5 * (q + 1.0)) - 0.5 * kLnPi;
    return std::exp(log_moment / q);
}

Interval khintchine_bounds(const Eigen::VectorXd& b, double q, const KhintchineConstants& kc) {
    if (!(q >= 1.0)) throw std::invalid_argument("khintchine_bounds: q must be >= 1");
    if (!b.allFinite()) throw std::invalid_argument("khintchine_bounds: b has non-finite entries");
    if (std::isinf(q)) {
        std::vector<double> a(static_cast<size_t>(b.size()));
        for (Eigen::Index i = 0; i < b.size(); ++i) a[static_cast<size_t>(i)] = std::abs(b[i]);
        std::sort(a.begin(), a.end(), std::greater<double>());
        double s = 0.0;
        for (size_t j = 0; j < a.size(); ++j) {
            s = std::max(s, a[j] * std::sqrt(std::log(static_cast<double>(j + 1)) + 1.0));
        }
        return {kc.c_low * s, kc.c_high * s};
    }
    const double norm = quasi_norm(b, ExponentP(q));
    return {gaussian_moment(1.0) * norm, gaussian_moment(q) * norm};
}

GaussianSupResult expected_sup_ellipsoid(const Ellipsoid& E, long samples, uint64_t seed,
                                         int threads) {
    if (samples < 1) throw std::invalid_argument("expected_sup_ellipsoid: samples must be >= 1");
    std::vector<double> vals(static_cast<size_t>(samples));
    parallel_for(0, samples, threads, [&](long i) {
        RandomStream rs(seed, {0x5u, static_cast<uint64_t>(i)});
        vals[static_cast<size_t>(i)] = support_function(E, rs.normal_vector(E.dim()));
    });
    GaussianSupResult out;
    out.estimate.value = mean_and_stderr(vals, out.estimate.std_error);
    out.estimate.samples = samples;
    out.estimate.dim = E.dim();
    out.estimate.truncation = std::numeric_limits<double>::infinity();
    if (E.p.value() > 1.0) {
        const ExponentP dual = E.p.dual();
        Eigen::VectorXd sig(E.dim());
        for (int j = 0; j < E.dim(); ++j) sig[j] = E.sigma[j];
        out.sup_bound = std::sqrt(dual.value()) * quasi_norm(sig, dual);
    } else {
        out.sup_bound = log_weighted_sup(E.sigma, 1);
    }
    return out;
}

double support_function_intersection(const Ellipsoid& E, double rho, const Eigen::VectorXd& u,
                                     double tol, int max_iters) {
    if (E.p.is_quasi()) {
        throw std::domain_error("support_function_intersection: requires p >= 1");
    }
    if (!(rho >= 0.0)) throw std::invalid_argument("support_function_intersection: rho must be >= 0");
    if (u.size() != E.dim()) {
        throw std::invalid_argument("support_function_intersection: dimension mismatch");
    }
    if (!u.allFinite()) {
        throw std::invalid_argument("support_function_intersection: u has non-finite entries");
    }
    const double u_norm = u.norm();
    if (rho == 0.0 || u_norm == 0.0) return 0.0;

    Eigen::VectorXd sig(E.dim());
    for (int j = 0; j < E.dim(); ++j) sig[j] = E.sigma[j];
    const double r = E.p.dual().value();

    const auto exact = [&](const Eigen::VectorXd& v) {
        return support_function(E, v) + rho * (u - v).norm();
    };

    const double h_u = support_function(E, u);
    const double h_zero = rho * u_norm;
    Eigen::VectorXd v = h_u <= h_zero ? u : Eigen::VectorXd::Zero(E.dim());
    double best = std::min(h_u, h_zero);

    const double scale = std::max({u_norm, 1e-300});
    const double phases[] = {1e-2, 1e-4, 1e-6, 1e-9, 1e-12};
    const int per_phase = std::max(1, max_iters / static_cast<int>(std::size(phases)));
    double step = 1.0;
    for (double mu_rel : phases) {
        const double mu = mu_rel * scale;
        const auto smooth_obj = [&](const Eigen::VectorXd& w, Eigen::VectorXd* grad) {
            const Eigen::VectorXd z = sig.cwiseProduct(w);
            detail::SmoothNorm sn = detail::smoothed_norm(z, r, mu * sig.maxCoeff());
            const Eigen::VectorXd d = w - u;
            const double dist = std::sqrt(d.squaredNorm() + mu * mu);
            if (grad) *grad = sig.cwiseProduct(sn.grad) + (rho / dist) * d;
            return sn.value + rho * dist;
        };
        Eigen::VectorXd grad(E.dim());
        double f = smooth_obj(v, &grad);
        for (int it = 0; it < per_phase; ++it) {
            const double gn2 = grad.squaredNorm();
            if (gn2 <= tol * tol * std::max(1.0, f * f)) break;
            bool accepted = false;
            double trial_step = step;
            for (int h = 0; h < 60; ++h) {
                Eigen::VectorXd w = v - trial_step * grad;
                Eigen::VectorXd g_new(E.dim());
                const double f_new = smooth_obj(w, &g_new);
                if (f_new <= f - 1e-4 * trial_step * gn2) {
                    v = std::move(w);
                    f = f_new;
                    grad = std::move(g_new);
                    step = trial_step * 2.0;
                    accepted = true;
                    break;
                }
                trial_step *= 0.5;
            }
            if (!accepted) break;
        }
        best = std::min(best, exact(v));
    }
    return best;
}

MeanWidthEstimate mean_width_rounded(const Ellipsoid& E, double rho, long samples, uint64_t seed,
                                     int threads, double tol) {
    if (samples < 1) throw std::invalid_argument("mean_width_rounded: samples must be >= 1");
    const double norm_const = expected_gaussian_norm(E.dim());
    std::vector<double> vals(static_cast<size_t>(samples));
    parallel_for(0, samples, threads, [&](long i) {
        RandomStream rs(seed, {0x6u, static_cast<uint64_t>(i)});
        const Eigen::VectorXd g = rs.normal_vector(E.dim());
        vals[static_cast<size_t>(i)] = support_function_intersection(E, rho, g, tol) / norm_const;
    });
    MeanWidthEstimate est;
    est.value = mean_and_stderr(vals, est.std_error);
    est.samples = samples;
    est.dim = E.dim();
    est.truncation = rho;
    return est;
}

double mstar_bound(const Ellipsoid& E, double rho, int k, const MstarOptions& opts) {
    if (E.p.is_quasi()) throw std::domain_error("mstar_bound: requires p >= 1");
    if (!(rho >= 0.0)) throw std::invalid_argument("mstar_bound: rho must be >= 0");
    const int m = E.dim();
    if (k < 0 || k >= m) throw std::invalid_argument("mstar_bound: need 0 <= k < m");

    const double head_factor = opts.gaussian_constants ? expected_gaussian_norm(k)
                                                       : std::sqrt(static_cast<double>(k));
    const double denom = opts.gaussian_constants ? expected_gaussian_norm(m)
                                                 : std::sqrt(static_cast<double>(m));
    double tail_term;
    double outer = 1.0;
    if (E.p.value() == 1.0) {
        tail_term = log_weighted_sup(E.sigma, k + 1);
        if (opts.gaussian_constants) tail_term *= opts.kc.c_high;
    } else {
        const double dual = E.p.dual().value();
        tail_term = tail_power_sum(E.sigma, k + 1, m, dual);
        outer = opts.gaussian_constants ? gaussian_moment(dual) : std::sqrt(dual);
    }
    return opts.constant * outer * (rho * head_factor + tail_term) / denom;
}

EscapeBound escape_bound(const Ellipsoid& E, double rho, int k, int n, const MstarOptions& opts) {
    const int m = E.dim();
    if (n < 1 || n >= m) throw std::invalid_argument("escape_bound: need 1 <= n < m");
    const double a_n = expected_gaussian_norm(n);
    const double a_m = expected_gaussian_norm(m);
    EscapeBound out;
    out.radius_bound = 2.0 * (a_m / a_n) * mstar_bound(E, rho, k, opts);
    out.success_prob = std::clamp(1.0 - 3.5 * std::exp(-a_n * a_n / 72.0), 0.0, 1.0);
    out.rho = rho;
    out.k = k;
    return out;
}

EscapeBound escape_bound_auto(const Ellipsoid& E, int n, double k_fraction,
                              const MstarOptions& opts) {
    const int m = E.dim();
    if (n < 1 || n >= m) throw std::invalid_argument("escape_bound_auto: need 1 <= n < m");
    if (!(k_fraction > 0.0)) {
        throw std::invalid_argument("escape_bound_auto: k_fraction must be positive");
    }
    int k;
    double tail;
    if (E.p.value() == 1.0) {
        k = static_cast<int>(std::ceil(k_fraction * n));
        k = std::clamp(k, 1, m - 1);
        tail = log_weighted_sup(E.sigma, k + 1);
    } else {
        const double dual = E.p.dual().value();
        k = static_cast<int>(std::ceil(k_fraction * n / dual));
        k = std::clamp(k, 1, m - 1);
        tail = tail_power_sum(E.sigma, k + 1, m, dual);
    }
    const double rho = tail / std::sqrt(static_cast<double>(k));
    return escape_bound(E, rho, k, n, opts);
}

}  // namespace ellipsec
