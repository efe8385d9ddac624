#include "ellipsec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "ellipsec/csv.hpp"
#include "ellipsec/gelfand.hpp"
#include "ellipsec/parallel.hpp"
#include "ellipsec/recovery.hpp"
#include "ellipsec/rng.hpp"
#include "ellipsec/sections.hpp"

namespace ellipsec {

namespace {

const std::vector<std::string> kAllowedKeys = {
    "experiment", "p",         "lambda",   "sigma_file", "n_grid",  "n",
    "m",          "m_factor",  "m_grid",   "trials",     "seed",    "method",
    "out",        "threads",   "q",        "C",          "D",       "C1",
    "k_fraction", "epsilon",   "s",        "probe_count"};

void check_strictly_increasing(const std::vector<int>& grid, const char* name) {
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1) {
            throw std::invalid_argument(std::string("config: ") + name + " entries must be >= 1");
        }
        if (i > 0 && grid[i] <= grid[i - 1]) {
            throw std::invalid_argument(std::string("config: ") + name +
                                        " must be strictly increasing");
        }
    }
}

std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / file).string();
}

RadiusMethod resolve_method(const ExperimentConfig& cfg) {
    if (cfg.method == "exact_p2") {
        if (cfg.p.value() != 2.0) {
            throw std::invalid_argument("config: method exact_p2 requires p = 2");
        }
        return RadiusMethod::exact_p2;
    }
    if (cfg.method == "multistart") return RadiusMethod::multistart;
    return cfg.p.value() == 2.0 ? RadiusMethod::exact_p2 : RadiusMethod::multistart;
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto count = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    SlopeFit fit;
    fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / count;
    return fit;
}

/// Per-n mean-width or sparse-regime bound value for trial rows; zero when no
/// bound applies to the configured exponents.
struct BoundColumn {
    double value = 0.0;
    int k_used = 0;
    bool condition_ok = true;
    bool available = false;
};

BoundColumn bound_for(const ExperimentConfig& cfg, const Semiaxes& sigma, int n, int m,
                      double constant) {
    BoundColumn out;
    if (!cfg.p.is_quasi()) {
        const TailBound tb = gelfand_upper_mstar(sigma, cfg.p, n, m, constant, cfg.k_fraction);
        out.value = tb.value;
        out.k_used = tb.k_used;
        out.available = true;
        return out;
    }
    if (cfg.lambda && *cfg.lambda > 0.0) {
        const QuasiBound qb = gelfand_upper_quasi(*cfg.lambda, cfg.p, ExponentP(cfg.q), n, m,
                                                  constant, cfg.condition_D);
        out.value = qb.value;
        out.condition_ok = qb.condition_ok;
        out.available = true;
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const KeyValueConfig& kv) {
    kv.require_known(kAllowedKeys);
    ExperimentConfig cfg;
    cfg.experiment = kv.get_string("experiment", "");
    cfg.p = ExponentP(kv.get_double("p", 2.0));
    if (kv.has("lambda")) {
        const double lambda = kv.get_double("lambda", 0.0);
        if (lambda < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
        cfg.lambda = lambda;
    }
    if (kv.has("sigma_file")) cfg.sigma_file = kv.get_string("sigma_file", "");
    if (cfg.lambda && cfg.sigma_file) {
        throw std::invalid_argument("config: lambda and sigma_file are mutually exclusive");
    }
    cfg.n_grid = kv.get_int_list("n_grid");
    check_strictly_increasing(cfg.n_grid, "n_grid");
    cfg.n_single = kv.get_int("n", 0);
    if (kv.has("m")) cfg.m_fixed = kv.get_int("m", 0);
    cfg.m_factor = kv.get_int("m_factor", 8);
    if (cfg.m_factor < 2) throw std::invalid_argument("config: m_factor must be >= 2");
    cfg.m_grid = kv.get_int_list("m_grid");
    check_strictly_increasing(cfg.m_grid, "m_grid");
    cfg.trials = kv.get_int("trials", 50);
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    cfg.seed = kv.get_u64("seed", 0);
    cfg.method = kv.get_string("method", "auto");
    if (cfg.method != "auto" && cfg.method != "exact_p2" && cfg.method != "multistart") {
        throw std::invalid_argument("config: method must be auto, exact_p2 or multistart");
    }
    cfg.out_dir = kv.get_string("out", ".");
    cfg.threads = kv.get_int("threads", 1);
    if (cfg.threads < 0) throw std::invalid_argument("config: threads must be >= 0");
    cfg.q = kv.get_double("q", 2.0);
    if (!(cfg.q > 0.0)) throw std::invalid_argument("config: q must be positive");
    cfg.constant_C = kv.get_double("C", 1.0);
    cfg.condition_D = kv.get_double("D", 1.0);
    cfg.rip_C1 = kv.get_double("C1", 1.0);
    cfg.k_fraction = kv.get_double("k_fraction", 0.25);
    if (!(cfg.k_fraction > 0.0)) throw std::invalid_argument("config: k_fraction must be positive");
    cfg.epsilon = kv.get_double("epsilon", 0.25);
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw std::invalid_argument("config: epsilon must lie in (0, 1)");
    }
    cfg.s_sparse = kv.get_int("s", 3);
    if (cfg.s_sparse < 1) throw std::invalid_argument("config: s must be >= 1");
    cfg.probe_count = kv.get_int("probe_count", 8);
    if (cfg.probe_count < 0) throw std::invalid_argument("config: probe_count must be >= 0");
    return cfg;
}

int ExperimentConfig::resolved_m() const {
    if (m_fixed) {
        if (*m_fixed < 2) throw std::invalid_argument("config: m must be >= 2");
        return *m_fixed;
    }
    if (n_grid.empty()) {
        throw std::invalid_argument("config: neither m nor an n_grid to derive it from");
    }
    return m_factor * n_grid.back();
}

Semiaxes ExperimentConfig::resolve_sigma(int m) const {
    if (sigma_file) {
        Semiaxes sigma = Semiaxes::load_csv(*sigma_file);
        if (sigma.size() != m) {
            throw std::invalid_argument("config: sigma_file length does not match m");
        }
        return sigma;
    }
    if (!lambda) throw std::invalid_argument("config: profile unspecified (lambda or sigma_file)");
    return *lambda == 0.0 ? Semiaxes::constant(m) : Semiaxes::polynomial(m, *lambda);
}

std::string ExperimentConfig::lambda_tag() const {
    return sigma_file ? "custom" : csv_field(lambda.value_or(0.0));
}

Interval wilson_interval(int successes, int total) {
    if (total < 1 || successes < 0 || successes > total) {
        throw std::invalid_argument("wilson_interval: bad counts");
    }
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(total);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

const std::vector<std::string> kTrialHeader = {
    "trial",  "seed",          "n",         "m",        "p",     "lambda", "method",
    "radius", "witness_gauge", "converged", "floor_ok", "floor", "bound"};

std::vector<std::string> trial_row(const ExperimentConfig& cfg, const RadiusTrial& trial, int n,
                                   int m, RadiusMethod method, double floor_value,
                                   const BoundColumn& bound) {
    return {csv_field(trial.trial),
            csv_field(trial.trial_seed),
            csv_field(n),
            csv_field(m),
            csv_field(cfg.p.value()),
            cfg.lambda_tag(),
            radius_method_name(method),
            csv_field(trial.radius),
            csv_field(trial.witness_gauge),
            csv_field(trial.converged),
            csv_field(trial.floor_ok),
            csv_field(floor_value),
            bound.available ? csv_field(bound.value) : ""};
}

struct GridRun {
    std::vector<TrialSummary> summaries;
    RadiusMethod method = RadiusMethod::multistart;
};

GridRun run_radius_grid(const ExperimentConfig& cfg, const Ellipsoid& E, int m) {
    GridRun out;
    out.method = resolve_method(cfg);
    for (int n : cfg.n_grid) {
        if (n >= m) throw std::invalid_argument("config: every n must be below m");
        const uint64_t seed_n = derive_stream(cfg.seed, {0x51u, static_cast<uint64_t>(n)});
        out.summaries.push_back(random_section_radius_trials(E, n, cfg.trials, out.method, seed_n,
                                                             cfg.threads));
    }
    return out;
}

}  // namespace

DecayOutput run_decay(const ExperimentConfig& cfg) {
    if (cfg.n_grid.size() < 2) {
        throw std::invalid_argument("decay: slope undefined for fewer than two grid points");
    }
    const int m = cfg.resolved_m();
    const Semiaxes sigma = cfg.resolve_sigma(m);
    const Ellipsoid E(cfg.p, sigma);
    const GridRun run = run_radius_grid(cfg, E, m);

    DecayOutput out;
    if (cfg.p.is_quasi()) {
        out.warning = "decay: p < 1 is outside the random-section decay regime";
    } else if (cfg.lambda && *cfg.lambda <= cfg.p.dual_inv()) {
        out.warning = "decay: lambda at or below 1/p*, medians need not decay";
    }
    CsvWriter trials(out_path(cfg, "decay_trials.csv"), kTrialHeader);
    CsvWriter summary(out_path(cfg, "decay_summary.csv"),
                      {"n", "m", "median", "q10", "q90", "bound", "bound_k", "bound_condition_ok",
                       "floor"});
    std::vector<double> ns, medians;
    for (size_t i = 0; i < cfg.n_grid.size(); ++i) {
        const int n = cfg.n_grid[i];
        const TrialSummary& ts = run.summaries[i];
        const BoundColumn bound = bound_for(cfg, sigma, n, m, cfg.constant_C);
        for (const RadiusTrial& trial : ts.trials) {
            trials.row(trial_row(cfg, trial, n, m, run.method, ts.floor_value, bound));
        }
        summary.row({csv_field(n), csv_field(m), csv_field(ts.median), csv_field(ts.q10),
                     csv_field(ts.q90), bound.available ? csv_field(bound.value) : "",
                     bound.available ? csv_field(bound.k_used) : "",
                     csv_field(bound.condition_ok), csv_field(ts.floor_value)});
        ns.push_back(static_cast<double>(n));
        medians.push_back(ts.median);
    }
    const SlopeFit fit = fit_loglog(ns, medians);
    out.slope = fit.slope;
    out.constant_hat = std::exp(fit.intercept);
    out.files = {trials.path(), summary.path()};
    return out;
}

std::string run_radius_table(const ExperimentConfig& cfg) {
    if (cfg.n_grid.empty()) throw std::invalid_argument("radius: n_grid is required");
    const int m = cfg.resolved_m();
    const Semiaxes sigma = cfg.resolve_sigma(m);
    const Ellipsoid E(cfg.p, sigma);
    const GridRun run = run_radius_grid(cfg, E, m);
    CsvWriter trials(out_path(cfg, "radius_trials.csv"), kTrialHeader);
    for (size_t i = 0; i < cfg.n_grid.size(); ++i) {
        const int n = cfg.n_grid[i];
        const BoundColumn bound = bound_for(cfg, sigma, n, m, cfg.constant_C);
        for (const RadiusTrial& trial : run.summaries[i].trials) {
            trials.row(trial_row(cfg, trial, n, m, run.method, run.summaries[i].floor_value,
                                 bound));
        }
    }
    return trials.path();
}

DichotomyOutput run_dichotomy(const ExperimentConfig& cfg) {
    if (!(cfg.p.value() > 1.0) || cfg.p.value() > 2.0) {
        throw std::invalid_argument("dichotomy: requires 1 < p <= 2");
    }
    if (cfg.sigma_file) {
        throw std::invalid_argument("dichotomy: requires a lambda profile (m varies)");
    }
    const int n = cfg.n_single;
    if (n < 1) throw std::invalid_argument("dichotomy: n is required");
    std::vector<int> m_grid = cfg.m_grid;
    if (m_grid.empty() && cfg.m_fixed) m_grid = {*cfg.m_fixed};
    if (m_grid.empty()) throw std::invalid_argument("dichotomy: m_grid is required");

    DichotomyOutput out;
    CsvWriter trials(out_path(cfg, "dichotomy_trials.csv"),
                     {"m", "trial", "seed", "n", "p", "lambda", "radius_floor_estimate",
                      "witness_feasible", "indicator"});
    CsvWriter summary(out_path(cfg, "dichotomy_summary.csv"),
                      {"m", "n", "threshold", "frequency", "wilson_lo", "wilson_hi",
                       "condition_ok"});

    const double pv = cfg.p.value();
    for (int m : m_grid) {
        if (m <= n) throw std::invalid_argument("dichotomy: every m must exceed n");
        const Semiaxes sigma = cfg.resolve_sigma(m);
        const Ellipsoid E(cfg.p, sigma);
        const double sigma1 = sigma.at(1);
        const double threshold = sigma1 / (1.0 + sigma1);

        struct Row {
            uint64_t seed = 0;
            double estimate = 0.0;
            bool feasible = false;
            bool indicator = false;
        };
        std::vector<Row> rows(static_cast<size_t>(cfg.trials));
        parallel_for(0, cfg.trials, cfg.threads, [&](long t) {
            Row& row = rows[static_cast<size_t>(t)];
            row.seed = derive_stream(cfg.seed, {0x52u, static_cast<uint64_t>(m),
                                                static_cast<uint64_t>(t)});
            const InfoMatrix info = sample_gaussian_info(n, m, row.seed);
            const LowerWitness lw = lower_bound_witness(E, info);
            row.feasible = lw.feasible;
            if (pv == 2.0) {
                const RadiusEstimate est = radius_p2_exact(E, kernel_basis(info));
                row.estimate = est.value;
            } else if (lw.feasible) {
                row.estimate = lw.norm2;
            } else {
                MaximizeOptions opts;
                opts.restarts = 8;
                opts.seed = row.seed;
                const RadiusEstimate est = radius_maximize(E, kernel_basis(info), opts);
                row.estimate = est.value;
            }
            row.indicator = row.estimate >= threshold - 1e-12;
        });

        int hits = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Row& row = rows[static_cast<size_t>(t)];
            trials.row({csv_field(m), csv_field(t), csv_field(row.seed), csv_field(n),
                        csv_field(pv), cfg.lambda_tag(), csv_field(row.estimate),
                        csv_field(row.feasible), csv_field(row.indicator)});
            hits += row.indicator ? 1 : 0;
        }
        const Interval ci = wilson_interval(hits, cfg.trials);
        const double sigma_m = sigma.at(m);
        const double dual = cfg.p.dual().value();
        const bool condition_ok =
            static_cast<double>(n) <=
            cfg.epsilon * sigma_m * sigma_m * std::pow(static_cast<double>(m), 2.0 / dual);
        if (condition_ok && out.threshold_m < 0) out.threshold_m = m;
        summary.row({csv_field(m), csv_field(n), csv_field(threshold),
                     csv_field(static_cast<double>(hits) / cfg.trials), csv_field(ci.lower),
                     csv_field(ci.upper), csv_field(condition_ok)});
    }
    out.files = {trials.path(), summary.path()};
    return out;
}

AuditOutput run_bound_audit(const ExperimentConfig& cfg) {
    if (cfg.n_grid.size() < 2) {
        throw std::invalid_argument("bound_audit: need at least two grid points");
    }
    const int m = cfg.resolved_m();
    const Semiaxes sigma = cfg.resolve_sigma(m);
    const Ellipsoid E(cfg.p, sigma);
    const bool quasi = cfg.p.is_quasi();
    if (quasi && !(cfg.lambda && *cfg.lambda > 0.0)) {
        throw std::invalid_argument("bound_audit: p < 1 requires a polynomial lambda profile");
    }
    if (quasi && !(cfg.q > cfg.p.value() && cfg.q <= 2.0)) {
        throw std::invalid_argument("bound_audit: p < 1 requires p < q <= 2");
    }

    AuditOutput out;
    CsvWriter trials(out_path(cfg, "audit_trials.csv"),
                     {"n", "trial", "seed", "m", "p", "lambda", "observed", "shape",
                      "escape_bound", "chat"});
    CsvWriter summary(out_path(cfg, "audit_summary.csv"),
                      {"n", "m", "shape", "observed_max", "chat"});

    std::vector<double> chats;
    const RadiusMethod method = quasi ? RadiusMethod::multistart : resolve_method(cfg);
    for (int n : cfg.n_grid) {
        if (n >= m) throw std::invalid_argument("config: every n must be below m");
        const BoundColumn shape = bound_for(cfg, sigma, n, m, 1.0);
        if (!shape.available) {
            throw std::invalid_argument("bound_audit: no bound shape for these exponents");
        }
        double escape = 0.0;
        if (!quasi) escape = escape_bound_auto(E, n, cfg.k_fraction).radius_bound;

        std::vector<double> observed(static_cast<size_t>(cfg.trials));
        std::vector<uint64_t> seeds(static_cast<size_t>(cfg.trials));
        parallel_for(0, cfg.trials, cfg.threads, [&](long t) {
            const uint64_t trial_seed = derive_stream(
                cfg.seed, {0x53u, static_cast<uint64_t>(n), static_cast<uint64_t>(t)});
            seeds[static_cast<size_t>(t)] = trial_seed;
            if (quasi) {
                const InfoMatrix info = sample_gaussian_info(n, m, trial_seed);
                observed[static_cast<size_t>(t)] = recovery_radius_upper(
                    E, info.entries, cfg.p.value(), cfg.q, cfg.probe_count, trial_seed);
            } else {
                const InfoMatrix info = sample_gaussian_info(n, m, trial_seed);
                const Subspace S = kernel_basis(info);
                if (method == RadiusMethod::exact_p2) {
                    observed[static_cast<size_t>(t)] = radius_p2_exact(E, S).value;
                } else {
                    MaximizeOptions opts;
                    opts.seed = trial_seed;
                    observed[static_cast<size_t>(t)] = radius_maximize(E, S, opts).value;
                }
            }
        });

        double chat = 0.0;
        double obs_max = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const double ratio = observed[static_cast<size_t>(t)] / shape.value;
            chat = std::max(chat, ratio);
            obs_max = std::max(obs_max, observed[static_cast<size_t>(t)]);
            trials.row({csv_field(n), csv_field(t), csv_field(seeds[static_cast<size_t>(t)]),
                        csv_field(m), csv_field(cfg.p.value()), cfg.lambda_tag(),
                        csv_field(observed[static_cast<size_t>(t)]), csv_field(shape.value),
                        quasi ? "" : csv_field(escape), csv_field(ratio)});
        }
        summary.row({csv_field(n), csv_field(m), csv_field(shape.value), csv_field(obs_max),
                     csv_field(chat)});
        chats.push_back(chat);
    }
    out.chat_min = *std::min_element(chats.begin(), chats.end());
    out.chat_max = *std::max_element(chats.begin(), chats.end());
    out.stable = out.chat_max <= 2.0 * out.chat_min;
    out.files = {trials.path(), summary.path()};
    return out;
}

ProbeOutput run_lower_probe(const ExperimentConfig& cfg) {
    if (!(cfg.p.value() > 1.0) || cfg.p.value() > 2.0) {
        throw std::invalid_argument("lower_probe: requires 1 < p <= 2");
    }
    const int n = cfg.n_single;
    if (n < 1) throw std::invalid_argument("lower_probe: n is required");
    std::vector<int> m_grid = cfg.m_grid;
    if (m_grid.empty() && cfg.m_fixed) m_grid = {*cfg.m_fixed};
    if (m_grid.empty()) throw std::invalid_argument("lower_probe: m_grid is required");
    if (cfg.sigma_file && m_grid.size() > 1) {
        throw std::invalid_argument("lower_probe: sigma_file only works with a single m");
    }

    ProbeOutput out;
    CsvWriter trials(out_path(cfg, "probe_trials.csv"),
                     {"m", "trial", "seed", "n", "x1sq", "lemma_threshold", "lemma_event",
                      "witness_feasible", "radius_floor"});
    CsvWriter summary(out_path(cfg, "probe_summary.csv"),
                      {"m", "n", "lemma_threshold", "lemma_frequency", "lemma_lo", "lemma_hi",
                       "feasible_frequency", "feasible_lo", "feasible_hi"});

    for (int m : m_grid) {
        if (m <= n) throw std::invalid_argument("lower_probe: every m must exceed n");
        const Semiaxes sigma = cfg.resolve_sigma(m);
        const Ellipsoid E(cfg.p, sigma);
        const double lemma_threshold =
            1.0 - static_cast<double>(n) / (cfg.epsilon * static_cast<double>(m));

        struct Row {
            uint64_t seed = 0;
            double x1sq = 0.0;
            bool event = false;
            bool feasible = false;
            double floor = 0.0;
        };
        std::vector<Row> rows(static_cast<size_t>(cfg.trials));
        parallel_for(0, cfg.trials, cfg.threads, [&](long t) {
            Row& row = rows[static_cast<size_t>(t)];
            row.seed = derive_stream(cfg.seed, {0x55u, static_cast<uint64_t>(m),
                                                static_cast<uint64_t>(t)});
            const InfoMatrix info = sample_gaussian_info(n, m, row.seed);
            const LowerWitness lw = lower_bound_witness(E, info);
            const CoordinateWitness cw = large_coordinate_witness(info);
            row.x1sq = cw.x1sq;
            row.event = cw.x1sq >= lemma_threshold;
            row.feasible = lw.feasible;
            row.floor = lw.feasible ? lw.norm2 : 0.0;
        });

        int events = 0;
        int feasibles = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Row& row = rows[static_cast<size_t>(t)];
            trials.row({csv_field(m), csv_field(t), csv_field(row.seed), csv_field(n),
                        csv_field(row.x1sq), csv_field(lemma_threshold), csv_field(row.event),
                        csv_field(row.feasible), csv_field(row.floor)});
            events += row.event ? 1 : 0;
            feasibles += row.feasible ? 1 : 0;
        }
        const Interval event_ci = wilson_interval(events, cfg.trials);
        const Interval feas_ci = wilson_interval(feasibles, cfg.trials);
        summary.row({csv_field(m), csv_field(n), csv_field(lemma_threshold),
                     csv_field(static_cast<double>(events) / cfg.trials), csv_field(event_ci.lower),
                     csv_field(event_ci.upper),
                     csv_field(static_cast<double>(feasibles) / cfg.trials),
                     csv_field(feas_ci.lower), csv_field(feas_ci.upper)});
    }
    out.files = {trials.path(), summary.path()};
    return out;
}

RecoveryOutput run_recovery_sweep(const ExperimentConfig& cfg) {
    if (cfg.p.value() > 1.0) {
        throw std::invalid_argument("recovery_sweep: requires p <= 1 (sparsity decoder)");
    }
    if (cfg.n_grid.empty()) throw std::invalid_argument("recovery_sweep: n_grid is required");
    const int m = cfg.resolved_m();
    const int s = cfg.s_sparse;
    if (2 * s > m) throw std::invalid_argument("recovery_sweep: need 2 s <= m");

    RecoveryOutput out;
    CsvWriter trials(out_path(cfg, "recovery_trials.csv"),
                     {"seed", "n", "m", "s", "p", "q", "success", "error_q", "iterations"});
    CsvWriter summary(out_path(cfg, "recovery_summary.csv"),
                      {"n", "m", "s", "successes", "trials", "frequency", "wilson_lo",
                       "wilson_hi", "rip_condition_ok"});

    const double pv = cfg.p.value();
    const ExponentP exp_q(cfg.q);
    for (int n : cfg.n_grid) {
        if (n >= m) throw std::invalid_argument("config: every n must be below m");
        struct Row {
            uint64_t seed = 0;
            bool success = false;
            double error = 0.0;
            int iterations = 0;
        };
        std::vector<Row> rows(static_cast<size_t>(cfg.trials));
        parallel_for(0, cfg.trials, cfg.threads, [&](long t) {
            Row& row = rows[static_cast<size_t>(t)];
            row.seed = derive_stream(cfg.seed, {0x54u, static_cast<uint64_t>(n),
                                                static_cast<uint64_t>(t)});
            const InfoMatrix info = sample_gaussian_info(n, m, row.seed);
            RandomStream rs(row.seed, {0x1u});
            Eigen::VectorXd x0 = Eigen::VectorXd::Zero(m);
            std::vector<int> pool(static_cast<size_t>(m));
            for (int i = 0; i < m; ++i) pool[static_cast<size_t>(i)] = i;
            for (int i = 0; i < s; ++i) {
                const int j = i + rs.uniform_int(m - i);
                std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
            }
            for (int i = 0; i < s; ++i) x0[pool[static_cast<size_t>(i)]] = rs.normal();
            const Eigen::VectorXd y = info.entries * x0;
            const DecodeResult dec =
                pv == 1.0 ? decode_l1(info.entries, y) : decode_lp_irls(info.entries, y, pv);
            row.error = quasi_norm(x0 - dec.z, exp_q);
            row.success = row.error <= 1e-6 * std::max(1.0, quasi_norm(x0, exp_q));
            row.iterations = dec.iterations;
        });

        int successes = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Row& row = rows[static_cast<size_t>(t)];
            trials.row({csv_field(row.seed), csv_field(n), csv_field(m), csv_field(s),
                        csv_field(pv), csv_field(cfg.q), csv_field(row.success),
                        csv_field(row.error), csv_field(row.iterations)});
            successes += row.success ? 1 : 0;
        }
        const Interval ci = wilson_interval(successes, cfg.trials);
        summary.row({csv_field(n), csv_field(m), csv_field(s), csv_field(successes),
                     csv_field(cfg.trials), csv_field(static_cast<double>(successes) / cfg.trials),
                     csv_field(ci.lower), csv_field(ci.upper),
                     csv_field(gaussian_rip_condition(n, m, s, cfg.rip_C1))});
        out.successes += successes;
        out.total += cfg.trials;
    }
    out.files = {trials.path(), summary.path()};
    return out;
}

std::string run_gelfand_table(const ExperimentConfig& cfg) {
    if (cfg.n_grid.empty()) throw std::invalid_argument("gelfand: n_grid is required");
    const int m = cfg.resolved_m();
    const Semiaxes sigma = cfg.resolve_sigma(m);
    const ExponentP q(cfg.q);

    CsvWriter table(out_path(cfg, "gelfand_bounds.csv"),
                    {"theorem", "p", "q", "lambda", "n", "m", "k_used", "value", "C", "D",
                     "k_fraction", "condition_ok"});
    const std::string lambda = cfg.lambda_tag();
    for (int n : cfg.n_grid) {
        if (n >= m) throw std::invalid_argument("config: every n must be below m");
        if (q.inv() >= cfg.p.inv()) {
            const double value = gelfand_exact_tail({sigma, cfg.p, q, n + 1, m});
            table.row({"exact_tail", csv_field(cfg.p.value()), csv_field(cfg.q), lambda,
                       csv_field(n), csv_field(m), "", csv_field(value), "", "", "", "1"});
        }
        if (!cfg.p.is_quasi() && cfg.q == 2.0) {
            const TailBound tb =
                gelfand_upper_mstar(sigma, cfg.p, n, m, cfg.constant_C, cfg.k_fraction);
            table.row({"mean_width", csv_field(cfg.p.value()), csv_field(cfg.q), lambda,
                       csv_field(n), csv_field(m), csv_field(tb.k_used), csv_field(tb.value),
                       csv_field(cfg.constant_C), "", csv_field(cfg.k_fraction), "1"});
        }
        if (cfg.p.value() <= 1.0 && cfg.q > cfg.p.value() && cfg.q <= 2.0 && cfg.lambda &&
            *cfg.lambda > 0.0) {
            const QuasiBound qb = gelfand_upper_quasi(*cfg.lambda, cfg.p, q, n, m,
                                                      cfg.constant_C, cfg.condition_D);
            table.row({"sparse_regime", csv_field(cfg.p.value()), csv_field(cfg.q), lambda,
                       csv_field(n), csv_field(m), "", csv_field(qb.value),
                       csv_field(cfg.constant_C), csv_field(cfg.condition_D), "",
                       csv_field(qb.condition_ok)});
        }
    }
    return table.path();
}

namespace {

void write_tsv_line(std::ofstream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << '\t';
        out << fields[i];
    }
    out << '\n';
}

void plot_loglog_decay(const CsvTable& in, std::ofstream& out) {
    const int n_col = in.column("n");
    if (n_col < 0) throw std::invalid_argument("plotdata: input lacks an n column");
    const int median_col = in.column("median");
    const int radius_col = in.column("radius");
    const int bound_col = in.column("bound");
    write_tsv_line(out, {"n", "median_radius", "bound"});
    if (median_col >= 0) {
        for (const auto& row : in.rows) {
            write_tsv_line(out, {row[static_cast<size_t>(n_col)],
                                 row[static_cast<size_t>(median_col)],
                                 bound_col >= 0 ? row[static_cast<size_t>(bound_col)] : ""});
        }
        return;
    }
    if (radius_col < 0) {
        throw std::invalid_argument("plotdata: input lacks median and radius columns");
    }
    std::map<int, std::vector<double>> by_n;
    std::map<int, std::string> bound_by_n;
    for (const auto& row : in.rows) {
        const int n = std::stoi(row[static_cast<size_t>(n_col)]);
        by_n[n].push_back(std::stod(row[static_cast<size_t>(radius_col)]));
        if (bound_col >= 0) bound_by_n[n] = row[static_cast<size_t>(bound_col)];
    }
    for (auto& [n, radii] : by_n) {
        write_tsv_line(out, {csv_field(n), csv_field(median_of(radii)),
                             bound_col >= 0 ? bound_by_n[n] : ""});
    }
}

void plot_phase_diagram(std::ofstream& out) {
    write_tsv_line(out, {"inv_p", "lambda", "region", "random_flag", "random_decay",
                         "minimal_decay"});
    constexpr int kCells = 50;
    constexpr double kMax = 1.4;
    for (int i = 0; i < kCells; ++i) {
        const double inv_p = kMax * static_cast<double>(i) / static_cast<double>(kCells - 1);
        const ExponentP p = inv_p == 0.0 ? ExponentP::infinite() : ExponentP(1.0 / inv_p);
        for (int j = 1; j <= kCells; ++j) {
            const double lambda = kMax * static_cast<double>(j) / static_cast<double>(kCells);
            const DecayReport report = decay_exponents(p, lambda);
            write_tsv_line(out, {csv_field(inv_p), csv_field(lambda),
                                 decay_region_name(report.region),
                                 random_decay_flag_name(report.random_flag),
                                 report.random_decay ? csv_field(*report.random_decay) : "",
                                 report.minimal_decay ? csv_field(*report.minimal_decay) : ""});
        }
    }
}

void plot_probability_curve(const CsvTable& in, std::ofstream& out) {
    const int m_col = in.column("m");
    if (m_col < 0) throw std::invalid_argument("plotdata: input lacks an m column");
    write_tsv_line(out, {"m", "frequency", "wilson_lo", "wilson_hi"});
    const int freq_col = in.column("frequency");
    if (freq_col >= 0) {
        const int lo_col = in.column("wilson_lo");
        const int hi_col = in.column("wilson_hi");
        for (const auto& row : in.rows) {
            write_tsv_line(out, {row[static_cast<size_t>(m_col)],
                                 row[static_cast<size_t>(freq_col)],
                                 lo_col >= 0 ? row[static_cast<size_t>(lo_col)] : "",
                                 hi_col >= 0 ? row[static_cast<size_t>(hi_col)] : ""});
        }
        return;
    }
    int indicator_col = in.column("indicator");
    if (indicator_col < 0) indicator_col = in.column("lemma_event");
    if (indicator_col < 0) {
        throw std::invalid_argument("plotdata: input lacks frequency and indicator columns");
    }
    std::map<int, std::pair<int, int>> counts;
    for (const auto& row : in.rows) {
        const int m = std::stoi(row[static_cast<size_t>(m_col)]);
        auto& [hits, total] = counts[m];
        hits += row[static_cast<size_t>(indicator_col)] == "1" ? 1 : 0;
        ++total;
    }
    for (const auto& [m, hit_total] : counts) {
        const Interval ci = wilson_interval(hit_total.first, hit_total.second);
        write_tsv_line(out, {csv_field(m),
                             csv_field(static_cast<double>(hit_total.first) / hit_total.second),
                             csv_field(ci.lower), csv_field(ci.upper)});
    }
}

}  // namespace

void emit_plotdata(const std::string& csv_in, const std::string& kind,
                   const std::string& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("plotdata: cannot open " + out_path);
    if (kind == "phase_diagram") {
        plot_phase_diagram(out);
        return;
    }
    const CsvTable in = read_csv(csv_in);
    if (kind == "loglog_decay") {
        plot_loglog_decay(in, out);
    } else if (kind == "probability_curve") {
        plot_probability_curve(in, out);
    } else {
        throw std::invalid_argument("plotdata: unknown kind '" + kind + "'");
    }
}

}  // namespace ellipsec
