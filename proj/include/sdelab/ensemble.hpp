#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdelab/analysis.hpp"
#include "sdelab/engine.hpp"

namespace sdelab {

/// Finite-horizon stand-ins for the asymptotic statements.
///
/// A path counts as converged when the largest of its last `window` values on
/// the recording grid is below `eps_conv`, and as diverged when its running
/// maximum exceeds `c_div`.
struct Surrogate {
    double eps_conv = 1e-2;
    std::uint64_t window = 100;
    double c_div = 1e2;

    /// Throws InvalidArgument unless 0 < eps_conv < c_div and window >= 1.
    void validate() const;
    bool operator==(const Surrogate&) const = default;
};

/// Type-7 (linear interpolation) sample quantiles at the five reporting levels.
struct Quantiles {
    double q05 = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
    bool operator==(const Quantiles&) const = default;
};

/// Type-7 quantile of `values` at `level` in [0,1]; `values` need not be sorted.
double quantile(std::vector<double> values, double level);
Quantiles quantiles(const std::vector<double>& values);

struct EnsembleOptions {
    Surrogate surrogate;
    /// Indices at which the distribution of X_n is summarised.
    std::vector<std::uint64_t> checkpoints;
    /// Levels C for which first passages above C are tracked (c_div is always tracked).
    std::vector<double> exceed_thresholds;
    bool track_martingale = false;
    std::uint64_t record_stride = 64;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 1;
};

struct CheckpointQuantiles {
    std::uint64_t n = 0;
    Quantiles x;
    bool operator==(const CheckpointQuantiles&) const = default;
};

struct EnsembleResult {
    std::uint64_t horizon = 0;
    std::uint64_t replicas = 0;
    std::uint64_t master_seed = 0;
    Surrogate surrogate;
    /// Grid spacing actually used for the convergence window.
    std::uint64_t effective_stride = 1;
    std::vector<double> thresholds;

    std::vector<PathSummary> paths;
    /// Per path: max over the last `window` grid values.
    std::vector<double> tail_max;
    /// Per path and checkpoint: X_n (the last value before overflow if the path halted).
    std::vector<std::vector<double>> checkpoint_values;

    double p_converged = 0.0;
    double p_diverged = 0.0;
    double p_overflow = 0.0;
    Quantiles final_value;
    Quantiles running_min;
    std::vector<CheckpointQuantiles> checkpoints;
    std::optional<double> martingale_mean;
    std::optional<double> martingale_se;

    /// Fraction of paths whose running maximum exceeds C.
    double p_exceeded(double C) const;
    /// Fraction of paths that exceeded C at some n <= by_n. C must be a tracked threshold.
    double p_exceeded_at(double C, std::uint64_t by_n) const;

    bool operator==(const EnsembleResult&) const = default;
};

/// Grid spacing for the convergence window: the configured stride, shrunk so
/// that `window` grid points fit in half the horizon.
std::uint64_t effective_stride(std::uint64_t horizon, std::uint64_t stride, std::uint64_t window);

/// Simulates `replicas` paths; path r draws from RngStream(master_seed, r).
/// Results are independent of the number of threads.
EnsembleResult run_ensemble(const EquationSpec& spec, std::uint64_t horizon, std::uint64_t replicas,
                            std::uint64_t master_seed, const EnsembleOptions& options = {});

struct DecayCheckpoint {
    std::uint64_t n = 0;
    /// Quantiles of -gamma * sum_{i<=n} kappa_i + alpha ln X_n.
    double log_median = 0.0;
    double log_p95 = 0.0;
    double median = 0.0;
    double p95 = 0.0;
    bool operator==(const DecayCheckpoint&) const = default;
};

struct DecayRateResult {
    TheoremVerdict verdict;
    std::vector<DecayCheckpoint> checkpoints;
};

/// Distribution of exp(-gamma * sum_{i<=n} kappa_i) X_n^alpha at each checkpoint.
/// Requires a linear recursion for which check_theorem_3_2 concludes
/// ConvergesToZero; throws PreconditionFailed otherwise.
DecayRateResult decay_rate_check(const EquationSpec& spec, const KappaSequence& kappa, double alpha,
                                 double gamma_decay, std::vector<std::uint64_t> checkpoints,
                                 std::uint64_t replicas, std::uint64_t master_seed,
                                 std::uint64_t n_tail = kDefaultTail);

/// Quantiles of the running minimum over n = 0..horizon.
Quantiles liminf_estimator(const EquationSpec& spec, std::uint64_t horizon, std::uint64_t replicas,
                           std::uint64_t master_seed);

enum class SummabilityLabel { Summable, NotSummable, Boundary };
std::string_view to_string(SummabilityLabel label);

struct ProbeRow {
    double p = 0.0;
    SummabilityLabel label = SummabilityLabel::Boundary;
    double p_converged = 0.0;
    bool operator==(const ProbeRow&) const = default;
};

struct ProbeSettings {
    std::uint64_t horizon = 10000;
    std::uint64_t replicas = 200;
    std::uint64_t master_seed = 1;
    double x0 = 1.0;
    Surrogate surrogate;
    std::uint64_t record_stride = 64;
};

/// Sweeps S_n = n^-p over `p_grid` for the linear recursion driven by `noise`
/// and reports the convergence fraction. Each p is labelled by whether
/// sum n^(-p alpha_star) converges. Throws PreconditionFailed when alpha_star
/// is absent.
std::vector<ProbeRow> conjecture_probe(const NoiseModel& noise, std::optional<double> alpha_star,
                                       const std::vector<double>& p_grid,
                                       const ProbeSettings& settings = {});

}  // namespace sdelab
