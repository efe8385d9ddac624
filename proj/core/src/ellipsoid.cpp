#include "ellipsec/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ellipsec {

namespace {

void check_finite(const Eigen::VectorXd& x, const char* who) {
    if (!x.allFinite()) {
        throw std::invalid_argument(std::string(who) + ": vector has non-finite entries");
    }
}

std::vector<double> sorted_moduli(const Eigen::VectorXd& x) {
    std::vector<double> a(static_cast<size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) a[static_cast<size_t>(i)] = std::abs(x[i]);
    std::sort(a.begin(), a.end(), std::greater<double>());
    return a;
}

}  // namespace

Ellipsoid::Ellipsoid(ExponentP p_, Semiaxes sigma_) : p(p_), sigma(std::move(sigma_)) {}

double quasi_norm(const Eigen::VectorXd& x, const ExponentP& p) {
    check_finite(x, "quasi_norm");
    if (x.size() == 0) return 0.0;
    const double peak = x.cwiseAbs().maxCoeff();
    if (peak == 0.0) return 0.0;
    if (p.is_infinite()) return peak;
    const double pv = p.value();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double t = std::abs(x[i]) / peak;
        if (t > 0.0) acc += std::pow(t, pv);
    }
    return peak * std::pow(acc, 1.0 / pv);
}

double ellipsoid_gauge(const Eigen::VectorXd& x, const Ellipsoid& E) {
    if (x.size() != E.dim()) {
        throw std::invalid_argument("ellipsoid_gauge: dimension mismatch");
    }
    Eigen::VectorXd scaled(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) scaled[i] = x[i] / E.sigma[static_cast<int>(i)];
    return quasi_norm(scaled, E.p);
}

bool ellipsoid_contains(const Ellipsoid& E, const Eigen::VectorXd& x, double tol) {
    return ellipsoid_gauge(x, E) <= 1.0 + tol;
}

double support_function(const Ellipsoid& E, const Eigen::VectorXd& u) {
    if (u.size() != E.dim()) {
        throw std::invalid_argument("support_function: dimension mismatch");
    }
    check_finite(u, "support_function");
    Eigen::VectorXd scaled(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) scaled[i] = E.sigma[static_cast<int>(i)] * u[i];
    if (E.p.is_quasi()) {
        return scaled.size() == 0 ? 0.0 : scaled.cwiseAbs().maxCoeff();
    }
    return quasi_norm(scaled, E.p.dual());
}

double lorentz_norm(const Eigen::VectorXd& x, double p, double t) {
    if (!(p > 0.0) || std::isnan(p)) throw std::invalid_argument("lorentz_norm: p must be positive");
    if (!(t > 0.0) || std::isnan(t)) throw std::invalid_argument("lorentz_norm: t must be positive");
    check_finite(x, "lorentz_norm");
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    const double inv_t = std::isinf(t) ? 0.0 : 1.0 / t;
    const auto a = sorted_moduli(x);
    Eigen::VectorXd weighted(x.size());
    for (size_t j = 0; j < a.size(); ++j) {
        weighted[static_cast<Eigen::Index>(j)] =
            std::pow(static_cast<double>(j + 1), inv_p - inv_t) * a[j];
    }
    return quasi_norm(weighted, std::isinf(t) ? ExponentP::infinite() : ExponentP(t));
}

double best_s_term_error(const Eigen::VectorXd& x, int s, const ExponentP& p) {
    if (s < 0 || s > x.size()) throw std::invalid_argument("best_s_term_error: s out of range");
    check_finite(x, "best_s_term_error");
    const auto a = sorted_moduli(x);
    if (p.is_infinite()) {
        return s == static_cast<int>(a.size()) ? 0.0 : a[static_cast<size_t>(s)];
    }
    Eigen::VectorXd tail(x.size() - s);
    for (size_t j = static_cast<size_t>(s); j < a.size(); ++j) {
        tail[static_cast<Eigen::Index>(j) - s] = a[j];
    }
    return quasi_norm(tail, p);
}

Eigen::VectorXd extremal_sparse_witness(const Ellipsoid& E, int s) {
    const int m = E.dim();
    if (s < 1 || 2 * s > m) {
        throw std::invalid_argument("extremal_sparse_witness: need 1 <= s <= m/2");
    }
    Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(2 * s);
    for (int j = 0; j < 2 * s; ++j) inv_sigma[j] = 1.0 / E.sigma[j];
    const double level = 1.0 / quasi_norm(inv_sigma, E.p);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    x.head(2 * s).setConstant(level);
    return x;
}

}  // namespace ellipsec
