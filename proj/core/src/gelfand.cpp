#include "ellipsec/gelfand.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ellipsec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_weighted_sup_range(const Semiaxes& sigma, int from, int to) {
    double best = 0.0;
    for (int j = from; j <= to; ++j) {
        best = std::max(best, sigma.at(j) * std::sqrt(std::log(static_cast<double>(j)) + 1.0));
    }
    return best;
}

}  // namespace

double gelfand_exact_tail(const GelfandQuery& query) {
    if (query.m != query.sigma.size()) {
        throw std::invalid_argument("gelfand_exact_tail: m does not match profile length");
    }
    if (query.n < 1 || query.n > query.m) {
        throw std::invalid_argument("gelfand_exact_tail: need 1 <= n <= m");
    }
    const double inv_q = query.q.inv();
    const double inv_p = query.p.inv();
    if (inv_q < inv_p) {
        throw std::domain_error("gelfand_exact_tail: requires q <= p");
    }
    const double gap = inv_q - inv_p;
    const double r = gap == 0.0 ? kInf : 1.0 / gap;
    return tail_power_sum(query.sigma, query.n, query.m, r);
}

double operator_norm(const Semiaxes& sigma, const ExponentP& p, const ExponentP& q) {
    const double gap = q.inv() - p.inv();
    const double r = gap <= 0.0 ? kInf : 1.0 / gap;
    return tail_power_sum(sigma, 1, sigma.size(), r);
}

TailBound gelfand_upper_mstar(const Semiaxes& sigma, const ExponentP& p, int n, int m,
                              double constant, double k_fraction) {
    if (p.is_quasi()) throw std::domain_error("gelfand_upper_mstar: requires p >= 1");
    if (m != sigma.size()) {
        throw std::invalid_argument("gelfand_upper_mstar: m does not match profile length");
    }
    if (n < 1 || n >= m) throw std::invalid_argument("gelfand_upper_mstar: need 1 <= n < m");
    if (!(k_fraction > 0.0)) {
        throw std::invalid_argument("gelfand_upper_mstar: k_fraction must be positive");
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    TailBound out;
    if (p.value() == 1.0) {
        out.k_used = std::clamp(static_cast<int>(std::ceil(k_fraction * n)), 1, m);
        out.value = constant / root_n * log_weighted_sup_range(sigma, out.k_used, m);
        return out;
    }
    const double dual = p.dual().value();
    out.k_used = std::clamp(static_cast<int>(std::ceil(k_fraction * n / dual)), 1, m);
    out.value = constant * std::sqrt(dual) / root_n * tail_power_sum(sigma, out.k_used, m, dual);
    return out;
}

QuasiBound gelfand_upper_quasi(double lambda, const ExponentP& p, const ExponentP& q, int n,
                               int m, double constant, double condition_const) {
    if (!(p.value() <= 1.0)) throw std::domain_error("gelfand_upper_quasi: requires p <= 1");
    if (!(q.inv() < p.inv()) || q.value() > 2.0) {
        throw std::domain_error("gelfand_upper_quasi: requires p < q <= 2");
    }
    if (!(lambda > 0.0)) throw std::invalid_argument("gelfand_upper_quasi: lambda must be positive");
    if (n < 1 || n >= m) throw std::invalid_argument("gelfand_upper_quasi: need 1 <= n < m");
    const double log_term = std::log(M_E * static_cast<double>(m) / static_cast<double>(n));
    QuasiBound out;
    out.condition_ok = static_cast<double>(n) >= condition_const * log_term;
    if (!out.condition_ok) {
        out.value = 1.0;
        return out;
    }
    const double exponent = lambda + p.inv() - q.inv();
    out.value = constant * std::pow(log_term / static_cast<double>(n), exponent);
    return out;
}

MinRadiusResult min_radius(const Ellipsoid& E, int n, double constant, double k_fraction) {
    const int m = E.dim();
    if (n < 0 || n >= m) throw std::invalid_argument("min_radius: need 0 <= n < m");
    MinRadiusResult out;
    if (n == 0) {
        out.exact = operator_norm(E.sigma, E.p, ExponentP(2.0));
        out.lower = *out.exact;
        out.upper = *out.exact;
        out.lower_tag = "operator_norm";
        out.upper_tag = "operator_norm";
        return out;
    }
    if (E.p.value() >= 2.0) {
        out.exact = tail_power_sum(E.sigma, n + 1, m, E.p.tail_exponent());
        out.lower = *out.exact;
        out.upper = *out.exact;
        out.lower_tag = "euclidean_tail";
        out.upper_tag = "euclidean_tail";
        return out;
    }
    out.lower = 0.0;
    out.lower_tag = "trivial_floor";
    if (!E.p.is_quasi()) {
        out.upper = gelfand_upper_mstar(E.sigma, E.p, n, m, constant, k_fraction).value;
        out.upper_tag = "mean_width";
        return out;
    }
    // Quasi-convex regime: the sparse-regime bound applies to polynomial
    // profiles; detect one, otherwise fall back to the operator norm.
    const double lambda = -std::log(E.sigma.at(m)) / std::log(static_cast<double>(std::max(m, 2)));
    bool polynomial = m >= 2 && lambda > 0.0;
    if (polynomial) {
        for (int j = 1; j <= m; ++j) {
            const double model = std::pow(static_cast<double>(j), -lambda);
            if (std::abs(E.sigma.at(j) - model) > 1e-9 * model) {
                polynomial = false;
                break;
            }
        }
    }
    if (polynomial) {
        const QuasiBound qb = gelfand_upper_quasi(lambda, E.p, ExponentP(2.0), n, m, constant);
        out.upper = qb.value;
        out.upper_tag = qb.condition_ok ? "sparse_regime" : "trivial_norm";
    } else {
        out.upper = operator_norm(E.sigma, E.p, ExponentP(2.0));
        out.upper_tag = "trivial_norm";
    }
    return out;
}

const char* decay_region_name(DecayRegion region) {
    switch (region) {
        case DecayRegion::above_threshold: return "above_threshold";
        case DecayRegion::below_threshold: return "below_threshold";
        case DecayRegion::boundary: return "boundary";
        case DecayRegion::useless: return "useless";
        case DecayRegion::open_case: return "open_case";
    }
    return "unknown";
}

const char* random_decay_flag_name(RandomDecayFlag flag) {
    switch (flag) {
        case RandomDecayFlag::value: return "value";
        case RandomDecayFlag::zero: return "zero";
        case RandomDecayFlag::open: return "open";
    }
    return "unknown";
}

DecayReport decay_exponents(const ExponentP& p, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("decay_exponents: lambda must be positive and finite");
    }
    DecayReport out;
    out.p = p.value();
    out.lambda = lambda;
    const double inv_p = p.inv();

    if (p.is_quasi()) {
        // Quasi-convex profiles always summable enough: full-order decay.
        out.region = DecayRegion::above_threshold;
        out.random_decay = lambda + inv_p - 0.5;
        out.random_flag = RandomDecayFlag::value;
        return out;
    }

    // Information is useless when the profile is not square-summable past the
    // compensating weight: lambda <= (1/2 - 1/p)_+ means no decay at all.
    const double useless_edge = std::max(0.0, 0.5 - inv_p);
    if (lambda <= useless_edge) {
        out.minimal_decay = 0.0;
        out.region = DecayRegion::useless;
        out.random_decay = 0.0;
        out.random_flag = RandomDecayFlag::zero;
        return out;
    }

    const double pv = p.value();
    const double dual_inv = 1.0 - inv_p;
    const double full_order = lambda + inv_p - 0.5;

    if (pv < 2.0) {
        out.minimal_decay = lambda < dual_inv ? lambda * (pv == 1.0 ? 0.0 : pv / (pv - 1.0)) / 2.0
                                              : full_order;
        if (pv == 1.0) out.minimal_decay = full_order;
        if (lambda > dual_inv || pv == 1.0) {
            out.region = DecayRegion::above_threshold;
            out.random_decay = full_order;
            out.random_flag = RandomDecayFlag::value;
            out.log_factor_caveat = pv == 1.0;
        } else if (lambda == dual_inv) {
            out.region = DecayRegion::open_case;
            out.random_flag = RandomDecayFlag::open;
        } else {
            out.region = DecayRegion::below_threshold;
            out.random_decay = 0.0;
            out.random_flag = RandomDecayFlag::zero;
        }
        return out;
    }

    if (pv == 2.0) {
        out.minimal_decay = full_order;  // = lambda
        if (lambda > 0.5) {
            out.region = DecayRegion::above_threshold;
            out.random_decay = lambda;
            out.random_flag = RandomDecayFlag::value;
        } else if (lambda == 0.5) {
            out.region = DecayRegion::boundary;
            out.random_decay = 0.0;
            out.random_flag = RandomDecayFlag::zero;
        } else {
            out.region = DecayRegion::below_threshold;
            out.random_decay = 0.0;
            out.random_flag = RandomDecayFlag::zero;
        }
        return out;
    }

    // p > 2 (including infinity).
    out.minimal_decay = full_order;
    if (lambda > dual_inv) {
        out.region = DecayRegion::above_threshold;
        out.random_decay = full_order;
        out.random_flag = RandomDecayFlag::value;
    } else if (lambda > 0.5) {
        out.region = DecayRegion::open_case;
        out.random_flag = RandomDecayFlag::open;
    } else {
        out.region = DecayRegion::below_threshold;
        out.random_decay = 0.0;
        out.random_flag = RandomDecayFlag::zero;
    }
    return out;
}

LorentzDecay lorentz_decay_exponent(const ExponentP& p, const ExponentP& q, double r) {
    if (p.is_quasi() || q.is_quasi()) {
        throw std::domain_error("lorentz_decay_exponent: requires 1 <= p, q <= inf");
    }
    if (!(r > 0.0) || std::isinf(r)) {
        throw std::invalid_argument("lorentz_decay_exponent: r must be positive and finite");
    }
    const double inv_p = p.inv();
    const double inv_q = q.inv();
    const double inv_r = 1.0 / r;
    if (!(inv_r > std::max(0.0, inv_q - inv_p))) {
        throw std::domain_error("lorentz_decay_exponent: requires 1/r > (1/q - 1/p)_+");
    }

    LorentzDecay out;
    if (inv_q >= inv_p) {  // q <= p
        out.inv_u = inv_r + inv_p - inv_q;
        return out;
    }
    const double pv = p.value();
    const double qv = q.value();
    if (pv >= 2.0) {  // 2 <= p < q
        out.inv_u = inv_r;
        return out;
    }
    // p < 2 from here on.  The threshold in 1/r separates a flat sparse
    // branch from the full-order branch; p = 1 degenerates the threshold to
    // zero, so only the full-order branch survives.
    const double dual_inv = 1.0 - inv_p;
    double threshold;
    if (qv <= 2.0) {
        threshold = dual_inv * (inv_p - inv_q) / (inv_p - 0.5);
    } else {
        threshold = dual_inv;
    }
    if (inv_r < threshold) {
        out.inv_u = (pv / (pv - 1.0)) / (2.0 * r);
        return out;
    }
    if (inv_r == threshold && threshold > 0.0) {
        out.gap = true;
        return out;
    }
    out.inv_u = inv_r + inv_p - inv_q;
    return out;
}

}  // namespace ellipsec
