#include "ellipsec/sections.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ellipsec/parallel.hpp"
#include "ellipsec/rng.hpp"
#include "smooth.hpp"

namespace ellipsec {

namespace {

Eigen::VectorXd sigma_vector(const Ellipsoid& E) {
    Eigen::VectorXd s(E.dim());
    for (int j = 0; j < E.dim(); ++j) s[j] = E.sigma[j];
    return s;
}

void check_section_inputs(const Ellipsoid& E, const Subspace& S) {
    if (S.ambient() != E.dim()) {
        throw std::invalid_argument("section radius: subspace ambient dimension mismatch");
    }
}

RadiusEstimate finish_estimate(const Ellipsoid& E, const Eigen::VectorXd& direction,
                               RadiusMethod method) {
    const double gauge = ellipsoid_gauge(direction, E);
    RadiusEstimate est;
    est.method = method;
    est.witness = direction / gauge;
    est.witness_gauge = ellipsoid_gauge(est.witness, E);
    est.value = est.witness.norm();
    return est;
}

}  // namespace

InfoMatrix::InfoMatrix(Eigen::MatrixXd entries_, uint64_t seed_)
    : entries(std::move(entries_)), seed(seed_) {
    const int rows = static_cast<int>(entries.rows());
    const int cols = static_cast<int>(entries.cols());
    if (rows < 1 || rows >= cols) {
        throw std::invalid_argument("InfoMatrix: need 1 <= n < m");
    }
    if (!entries.allFinite()) {
        throw std::invalid_argument("InfoMatrix: non-finite entries");
    }
    const Eigen::MatrixXd gram = entries * entries.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("InfoMatrix: rows are numerically rank deficient");
    }
}

InfoMatrix sample_gaussian_info(int n, int m, uint64_t seed) {
    if (n < 1 || n >= m) throw std::invalid_argument("sample_gaussian_info: need 1 <= n < m");
    RandomStream rs(seed, {0x11u});
    return InfoMatrix(rs.normal_matrix(n, m), seed);
}

Subspace::Subspace(Eigen::MatrixXd basis_, int codim_) : basis(std::move(basis_)), codim(codim_) {
    if (basis.cols() < 1 || basis.rows() < basis.cols()) {
        throw std::invalid_argument("Subspace: basis must be m x d with 1 <= d <= m");
    }
    if (codim != static_cast<int>(basis.rows() - basis.cols())) {
        throw std::invalid_argument("Subspace: codim does not match basis shape");
    }
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    const double defect =
        (gram - Eigen::MatrixXd::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw std::invalid_argument("Subspace: basis is not orthonormal");
    }
}

Subspace Subspace::from_span(const Eigen::MatrixXd& span) {
    if (span.cols() < 1 || span.rows() < span.cols()) {
        throw std::invalid_argument("Subspace::from_span: need m x d spanning set, d <= m");
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
    const Eigen::VectorXd diag = qr.matrixQR().diagonal();
    const double peak = diag.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (std::abs(diag[i]) <= 1e-12 * peak) {
            throw std::invalid_argument("Subspace::from_span: spanning columns are dependent");
        }
    }
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(span.rows(), span.cols());
    return Subspace(std::move(q), static_cast<int>(span.rows() - span.cols()));
}

Subspace kernel_basis(const InfoMatrix& N) {
    const int n = N.n();
    const int m = N.m();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(N.entries.transpose());
    const Eigen::VectorXd diag = qr.matrixQR().diagonal();
    const double peak = diag.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (std::abs(diag[i]) <= 1e-12 * std::max(peak, 1e-300)) {
            throw std::runtime_error("kernel_basis: information matrix is rank deficient");
        }
    }
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    return Subspace(q.rightCols(m - n), n);
}

Subspace coordinate_tail_subspace(int m, int n) {
    if (n < 0 || n >= m) throw std::invalid_argument("coordinate_tail_subspace: need 0 <= n < m");
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, m - n);
    for (int j = 0; j < m - n; ++j) basis(n + j, j) = 1.0;
    return Subspace(std::move(basis), n);
}

const char* radius_method_name(RadiusMethod method) {
    switch (method) {
        case RadiusMethod::exact_p2: return "exact_p2";
        case RadiusMethod::multistart: return "multistart";
        case RadiusMethod::bruteforce: return "bruteforce";
    }
    return "unknown";
}

RadiusEstimate radius_p2_exact(const Ellipsoid& E, const Subspace& S) {
    if (E.p.value() != 2.0) throw std::domain_error("radius_p2_exact: requires p = 2");
    check_section_inputs(E, S);
    const Eigen::VectorXd sig = sigma_vector(E);
    const Eigen::MatrixXd scaled = sig.cwiseInverse().asDiagonal() * S.basis;
    const Eigen::MatrixXd gram = scaled.transpose() * scaled;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("radius_p2_exact: eigensolver failed");
    }
    const Eigen::VectorXd u = eig.eigenvectors().col(0);
    RadiusEstimate est = finish_estimate(E, S.basis * u, RadiusMethod::exact_p2);
    est.converged = true;
    return est;
}

namespace {

/// Minimizes the smoothed gauge of B u over the unit sphere in u by projected
/// gradient descent with an Armijo step-halving line search, tightening the
/// smoothing in phases.  Returns the best exact gauge seen and its direction.
struct GaugeMinimizer {
    const Ellipsoid& E;
    const Subspace& S;
    Eigen::VectorXd sig;
    double p;
    bool inf_p;

    explicit GaugeMinimizer(const Ellipsoid& E_, const Subspace& S_)
        : E(E_), S(S_), sig(sigma_vector(E_)), p(E_.p.value()), inf_p(E_.p.is_infinite()) {}

    double smooth_eval(const Eigen::VectorXd& u, double eps_rel, Eigen::VectorXd* grad_u) const {
        const Eigen::VectorXd y = S.basis * u;
        Eigen::VectorXd z(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) z[i] = y[i] / sig[i];
        const double scale = std::max(z.cwiseAbs().maxCoeff(), 1e-300);
        const double r = inf_p ? std::numeric_limits<double>::infinity() : p;
        detail::SmoothNorm sn = detail::smoothed_norm(z, r, eps_rel * scale);
        if (grad_u) {
            Eigen::VectorXd gz(z.size());
            for (Eigen::Index i = 0; i < z.size(); ++i) gz[i] = sn.grad[i] / sig[i];
            *grad_u = S.basis.transpose() * gz;
        }
        return sn.value;
    }

    double exact_gauge(const Eigen::VectorXd& u) const {
        return ellipsoid_gauge(S.basis * u, E);
    }

    std::vector<double> eps_schedule() const {
        if (inf_p) return {1e-1, 1e-2, 1e-4, 1e-6, 1e-9};
        if (p < 1.0) return {1e-2, 1e-3, 1e-4, 1e-6, 1e-8};
        if (p < 2.0) return {1e-4, 1e-8, 1e-12};
        return {1e-8, 1e-12};
    }

    /// One descent run from u0; returns the exact gauge at the final iterate.
    double run(Eigen::VectorXd u, int iters, double tol, Eigen::VectorXd* u_out,
               bool* converged) const {
        const auto schedule = eps_schedule();
        const int per_phase = std::max(1, iters / static_cast<int>(schedule.size()));
        bool hit_tol = false;
        for (double eps_rel : schedule) {
            Eigen::VectorXd grad(u.size());
            double f = smooth_eval(u, eps_rel, &grad);
            double step = 1.0;
            hit_tol = false;
            for (int it = 0; it < per_phase; ++it) {
                Eigen::VectorXd rgrad = grad - grad.dot(u) * u;
                const double rg2 = rgrad.squaredNorm();
                if (rg2 <= tol * tol * std::max(f * f, 1e-300)) {
                    hit_tol = true;
                    break;
                }
                bool accepted = false;
                double trial = step;
                for (int h = 0; h < 60; ++h) {
                    Eigen::VectorXd w = (u - trial * rgrad).normalized();
                    Eigen::VectorXd gw(u.size());
                    const double fw = smooth_eval(w, eps_rel, &gw);
                    if (fw <= f - 1e-4 * trial * rg2) {
                        u = std::move(w);
                        f = fw;
                        grad = std::move(gw);
                        step = std::min(trial * 2.0, 1e6);
                        accepted = true;
                        break;
                    }
                    trial *= 0.5;
                }
                if (!accepted) {
                    hit_tol = true;
                    break;
                }
            }
        }
        if (u_out) *u_out = u;
        if (converged) *converged = hit_tol;
        return exact_gauge(u);
    }
};

}  // namespace

RadiusEstimate radius_maximize(const Ellipsoid& E, const Subspace& S,
                               const MaximizeOptions& opts) {
    check_section_inputs(E, S);
    if (E.p.value() == 2.0 && !opts.force_generic) {
        return radius_p2_exact(E, S);
    }
    const int d = S.dim();
    const int restarts = opts.restarts > 0 ? opts.restarts : 16 + 4 * d;
    GaugeMinimizer gm(E, S);

    double best_gauge = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_u;
    bool best_converged = false;
    for (int restart = 0; restart < restarts; ++restart) {
        Eigen::VectorXd u0;
        if (restart < d) {
            u0 = Eigen::VectorXd::Unit(d, restart);
        } else {
            RandomStream rs(opts.seed, {0x21u, static_cast<uint64_t>(restart)});
            u0 = rs.sphere_vector(d);
        }
        Eigen::VectorXd u_final;
        bool converged = false;
        const double gauge = gm.run(std::move(u0), opts.iters, opts.tol, &u_final, &converged);
        if (gauge < best_gauge) {
            best_gauge = gauge;
            best_u = u_final;
            best_converged = converged;
        }
    }
    RadiusEstimate est = finish_estimate(E, S.basis * best_u, RadiusMethod::multistart);
    est.restarts = restarts;
    est.converged = best_converged;
    return est;
}

RadiusEstimate radius_oracle_bruteforce(const Ellipsoid& E, const Subspace& S,
                                        long grid_density) {
    check_section_inputs(E, S);
    const int d = S.dim();
    if (d > 3) throw std::domain_error("radius_oracle_bruteforce: dim(S) must be <= 3");
    if (grid_density < 1) {
        throw std::invalid_argument("radius_oracle_bruteforce: grid_density must be >= 1");
    }

    double best_gauge = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_u;
    const auto consider = [&](const Eigen::VectorXd& u) {
        const double gauge = ellipsoid_gauge(S.basis * u, E);
        if (gauge < best_gauge) {
            best_gauge = gauge;
            best_u = u;
        }
    };

    if (d == 1) {
        consider(Eigen::VectorXd::Unit(1, 0));
    } else if (d == 2) {
        const long steps = grid_density;
        for (long i = 0; i < steps; ++i) {
            const double theta = M_PI * static_cast<double>(i) / static_cast<double>(steps);
            Eigen::VectorXd u(2);
            u << std::cos(theta), std::sin(theta);
            consider(u);
        }
    } else {
        const long n_theta = std::max<long>(1, static_cast<long>(std::sqrt(
                                                   static_cast<double>(grid_density) / 2.0)));
        const long n_phi = 2 * n_theta;
        for (long i = 0; i <= n_theta; ++i) {
            const double theta = M_PI * static_cast<double>(i) / static_cast<double>(n_theta);
            for (long j = 0; j < n_phi; ++j) {
                const double phi = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n_phi);
                Eigen::VectorXd u(3);
                u << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                    std::cos(theta);
                consider(u);
            }
        }
    }
    RadiusEstimate est = finish_estimate(E, S.basis * best_u, RadiusMethod::bruteforce);
    est.converged = true;
    return est;
}

CoordinateWitness large_coordinate_witness(const InfoMatrix& N) {
    const Eigen::MatrixXd gram = N.entries * N.entries.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("large_coordinate_witness: rank deficient information matrix");
    }
    const Eigen::VectorXd first_col = N.entries.col(0);
    Eigen::VectorXd projected =
        Eigen::VectorXd::Unit(N.m(), 0) - N.entries.transpose() * llt.solve(first_col);
    CoordinateWitness out;
    const double norm = projected.norm();
    if (norm <= 1e-12) {
        out.degenerate = true;
        out.x = Eigen::VectorXd::Zero(N.m());
        return out;
    }
    out.x = projected / norm;
    out.x1sq = out.x[0] * out.x[0];
    return out;
}

LowerWitness lower_bound_witness(const Ellipsoid& E, const InfoMatrix& N) {
    if (!(E.p.value() > 1.0) || E.p.value() > 2.0) {
        throw std::domain_error("lower_bound_witness: requires 1 < p <= 2");
    }
    if (N.m() != E.dim()) {
        throw std::invalid_argument("lower_bound_witness: dimension mismatch");
    }
    const CoordinateWitness cw = large_coordinate_witness(N);
    LowerWitness out;
    out.degenerate = cw.degenerate;
    if (cw.degenerate) {
        out.x_tilde = cw.x;
        return out;
    }
    const double shrink = 1.0 + 1.0 / E.sigma[0];
    out.x_tilde = cw.x / shrink;
    out.norm2 = out.x_tilde.norm();
    out.gauge = ellipsoid_gauge(out.x_tilde, E);
    out.feasible = out.gauge <= 1.0 + 1e-12;
    return out;
}

double median_of(std::vector<double> values) { return quantile_of(std::move(values), 0.5); }

double quantile_of(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile_of: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile_of: q must be in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

TrialSummary random_section_radius_trials(const Ellipsoid& E, int n, int trials,
                                          RadiusMethod method, uint64_t seed, int threads,
                                          const MaximizeOptions& opts) {
    if (trials < 1) throw std::invalid_argument("random_section_radius_trials: trials must be >= 1");
    if (method == RadiusMethod::bruteforce) {
        throw std::invalid_argument("random_section_radius_trials: bruteforce is a test oracle");
    }
    const int m = E.dim();
    if (n < 1 || n >= m) throw std::invalid_argument("random_section_radius_trials: need 1 <= n < m");

    // For p >= 2 the minimal section radius has a closed form (the Euclidean
    // tail of the profile), which every random section must dominate.
    double floor_value = 0.0;
    if (E.p.value() >= 2.0) {
        floor_value = tail_power_sum(E.sigma, n + 1, m, E.p.tail_exponent());
    }

    TrialSummary out;
    out.method = method;
    out.floor_value = floor_value;
    out.trials.resize(static_cast<size_t>(trials));
    parallel_for(0, trials, threads, [&](long t) {
        const uint64_t trial_seed = derive_stream(seed, {0x31u, static_cast<uint64_t>(t)});
        const InfoMatrix info = sample_gaussian_info(n, m, trial_seed);
        const Subspace S = kernel_basis(info);
        MaximizeOptions local = opts;
        local.seed = trial_seed;
        const RadiusEstimate est = method == RadiusMethod::exact_p2 ? radius_p2_exact(E, S)
                                                                   : radius_maximize(E, S, local);
        RadiusTrial& row = out.trials[static_cast<size_t>(t)];
        row.trial = static_cast<int>(t);
        row.trial_seed = trial_seed;
        row.radius = est.value;
        row.witness_gauge = est.witness_gauge;
        row.converged = est.converged;
        row.floor_ok = floor_value == 0.0 || est.value >= floor_value - 1e-9;
    });
    std::vector<double> radii;
    radii.reserve(out.trials.size());
    for (const auto& row : out.trials) radii.push_back(row.radius);
    out.median = median_of(radii);
    out.q10 = quantile_of(radii, 0.10);
    out.q90 = quantile_of(radii, 0.90);
    return out;
}

}  // namespace ellipsec
