#pragma once

#include <optional>
#include <string>

#include "ellipsec/ellipsoid.hpp"

namespace ellipsec {

struct GelfandQuery {
    Semiaxes sigma;
    ExponentP p;
    ExponentP q;
    /// Gelfand index: worst-case over subspaces of codimension n - 1.
    int n = 1;
    int m = 1;
};

/// n-th Gelfand number of the diagonal map (sigma_j x_j)_j from l_p^m to
/// l_q^m for q <= p: (sum_{j=n}^m sigma_j^r)^{1/r} with 1/r = 1/q - 1/p,
/// and sigma_n when q = p.  The minimal section radius at codimension n is
/// this quantity evaluated at index n + 1.
double gelfand_exact_tail(const GelfandQuery& query);

/// Norm of the diagonal map from l_p^m to l_q^m for any exponents in (0, inf]:
/// (sum_j sigma_j^r)^{1/r} with 1/r = (1/q - 1/p)_+ and sigma_1 when r = inf.
double operator_norm(const Semiaxes& sigma, const ExponentP& p, const ExponentP& q);

struct TailBound {
    double value = 0.0;
    int k_used = 0;
};

/// Mean-width upper bound for the minimal Euclidean section radius at
/// codimension n, evaluated at cut index k = max(1, ceil(k_fraction n))
/// for p = 1 and k = max(1, ceil(k_fraction n / p*)) for p > 1:
///   p = 1:  C n^{-1/2} sup_{k<=j<=m} sigma_j sqrt(log j + 1)
///   p > 1:  C sqrt(p*) n^{-1/2} (sum_{j=k}^m sigma_j^{p*})^{1/p*}
TailBound gelfand_upper_mstar(const Semiaxes& sigma, const ExponentP& p, int n, int m,
                              double constant = 1.0, double k_fraction = 0.25);

struct QuasiBound {
    double value = 0.0;
    /// Whether n >= D log(e m / n); below that the bound degrades to sigma_1.
    bool condition_ok = false;
};

/// Sparse-regime upper bound for polynomial profiles sigma_j = j^{-lambda}
/// with 0 < p <= 1 and p < q <= 2:
///   C (log(e m / n) / n)^{lambda + 1/p - 1/q}   when n >= D log(e m / n),
/// and the trivial bound sigma_1 = 1 otherwise.
QuasiBound gelfand_upper_quasi(double lambda, const ExponentP& p, const ExponentP& q, int n,
                               int m, double constant = 1.0, double condition_const = 1.0);

struct MinRadiusResult {
    /// Present when the minimal radius is known in closed form.
    std::optional<double> exact;
    double lower = 0.0;
    double upper = 0.0;
    std::string lower_tag;
    std::string upper_tag;
};

/// Minimal Euclidean section radius of E at codimension n: exact tail for
/// p >= 2 (and for n = 0 at any p, where it is the operator norm); otherwise
/// the best available one-sided bounds.
MinRadiusResult min_radius(const Ellipsoid& E, int n, double constant = 1.0,
                           double k_fraction = 0.25);

enum class DecayRegion { above_threshold, below_threshold, boundary, useless, open_case };

enum class RandomDecayFlag { value, zero, open };

const char* decay_region_name(DecayRegion region);
const char* random_decay_flag_name(RandomDecayFlag flag);

struct DecayReport {
    double p = 0.0;
    double lambda = 0.0;
    /// Polynomial decay order of the minimal radius in n; absent for p < 1.
    std::optional<double> minimal_decay;
    /// Decay order along random sections when the flag is `value`.
    std::optional<double> random_decay;
    RandomDecayFlag random_flag = RandomDecayFlag::zero;
    DecayRegion region = DecayRegion::above_threshold;
    /// p = 1 random sections carry an extra sqrt(log n) factor.
    bool log_factor_caveat = false;
};

/// Classifies the decay of Euclidean section radii for sigma_j = j^{-lambda}:
/// the polynomial order for optimal sections, and for random sections either
/// the order, a proven no-decay verdict, or an open flag at the two unresolved
/// parameter ranges (1 < p < 2 with lambda = 1/p*, and p > 2 with
/// 1/2 < lambda <= 1/p*).
DecayReport decay_exponents(const ExponentP& p, double lambda);

struct LorentzDecay {
    /// Exponent 1/u of the n^{-1/u} decay of Gelfand numbers of the diagonal
    /// map j^{-1/r} from l_p to l_q; absent exactly on a boundary case.
    std::optional<double> inv_u;
    /// True when (p, q, r) sits on a threshold where the two-sided order is
    /// not matched by the general theorem.
    bool gap = false;
};

/// Decay order of Gelfand numbers of the diagonal operator with entries
/// j^{-1/r} acting from l_p into l_q, for 1 <= p, q <= inf and
/// 1/r > (1/q - 1/p)_+.
LorentzDecay lorentz_decay_exponent(const ExponentP& p, const ExponentP& q, double r);

}  // namespace ellipsec
