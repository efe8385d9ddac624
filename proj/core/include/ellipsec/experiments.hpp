#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellipsec/config.hpp"
#include "ellipsec/ellipsoid.hpp"
#include "ellipsec/gaussian.hpp"

namespace ellipsec {

/// Typed experiment description parsed from a flat key=value config.
/// Validation happens in parse(); running functions assume a valid config.
struct ExperimentConfig {
    std::string experiment;

    ExponentP p{2.0};
    /// Polynomial profile order; 0 selects the constant profile.
    std::optional<double> lambda;
    std::optional<std::string> sigma_file;

    std::vector<int> n_grid;
    /// Single-n experiments (dichotomy, lower probe).
    int n_single = 0;
    std::optional<int> m_fixed;
    /// m = m_factor * max(n grid) when no fixed m is given.
    int m_factor = 8;
    /// Growing ambient dimensions for dichotomy and lower probe runs.
    std::vector<int> m_grid;

    int trials = 50;
    uint64_t seed = 0;
    std::string method = "auto";
    std::string out_dir = ".";
    int threads = 1;

    double q = 2.0;
    double constant_C = 1.0;
    double condition_D = 1.0;
    double rip_C1 = 1.0;
    double k_fraction = 0.25;
    double epsilon = 0.25;
    int s_sparse = 3;
    int probe_count = 8;

    static ExperimentConfig parse(const KeyValueConfig& cfg);

    /// Ambient dimension for fixed-m experiments.
    int resolved_m() const;
    /// Profile of length m from lambda, the constant profile, or the CSV file.
    Semiaxes resolve_sigma(int m) const;
    /// Human-readable profile tag for CSV rows: the lambda value or "custom".
    std::string lambda_tag() const;
};

struct DecayOutput {
    std::vector<std::string> files;
    double slope = 0.0;
    double constant_hat = 0.0;
    /// Non-empty when the configured regime does not match the decay claim;
    /// the run still completes.
    std::string warning;
};

/// Median section radius across a grid of codimensions with a log-log slope
/// fit and the mean-width bound alongside.  Needs at least two grid points.
DecayOutput run_decay(const ExperimentConfig& cfg);

/// Per-trial radius table over the n grid, no fitting.
std::string run_radius_table(const ExperimentConfig& cfg);

struct DichotomyOutput {
    std::vector<std::string> files;
    /// First m in the grid where the no-decay condition n <= eps sigma_m^2
    /// m^{2/p*} holds, -1 when it never does.
    int threshold_m = -1;
};

/// Frequency of the event {radius >= sigma_1 / (1 + sigma_1)} along a growing
/// m grid at fixed n, with Wilson intervals.  Requires 1 < p <= 2.
DichotomyOutput run_dichotomy(const ExperimentConfig& cfg);

struct AuditOutput {
    std::vector<std::string> files;
    double chat_min = 0.0;
    double chat_max = 0.0;
    /// Fitted constants across the n grid vary by at most a factor 2.
    bool stable = false;
};

/// Compares observed section radii (or the decoder proxy for p < 1) against
/// the bound shapes evaluated with constant 1, and fits the implied constant
/// per grid point.
AuditOutput run_bound_audit(const ExperimentConfig& cfg);

struct ProbeOutput {
    std::vector<std::string> files;
};

/// Kernel large-coordinate statistics: x1sq, the concentration event
/// indicator, witness feasibility and the certified radius floor, aggregated
/// with Wilson intervals.  Requires 1 < p <= 2.
ProbeOutput run_lower_probe(const ExperimentConfig& cfg);

struct RecoveryOutput {
    std::vector<std::string> files;
    int successes = 0;
    int total = 0;
};

/// Sparse recovery sweep: random s-sparse signals, Gaussian measurements,
/// the p-minimizing decoder, success accounting.  Requires p <= 1.
RecoveryOutput run_recovery_sweep(const ExperimentConfig& cfg);

/// Bound table across the n grid for the configured (p, q) pair: exact tails
/// where available, mean-width and sparse-regime bounds where applicable.
std::string run_gelfand_table(const ExperimentConfig& cfg);

/// Converts experiment CSV output into tab-separated plot input.
/// Kinds: loglog_decay, phase_diagram, probability_curve.
void emit_plotdata(const std::string& csv_in, const std::string& kind,
                   const std::string& out_path);

/// 95% Wilson score interval for a binomial proportion.
Interval wilson_interval(int successes, int total);

}  // namespace ellipsec
