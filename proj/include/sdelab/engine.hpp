#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdelab/feedback.hpp"
#include "sdelab/noise.hpp"
#include "sdelab/rng.hpp"
#include "sdelab/sequences.hpp"

namespace sdelab {

/// X_{n+1} = X_n (1 + xi_{n+1}) + S_n
struct LinearKind {
    bool operator==(const LinearKind&) const = default;
};

/// X_{n+1} = X_n (1 + f(X_n) xi_{n+1}) + S_n
struct NonlinearKind {
    FeedbackFunction f;
    bool operator==(const NonlinearKind&) const = default;
};

/// X_{n+1} = (1 + k f(X_n) a + sqrt(k f(X_n)) zeta_{n+1}) X_n + S_n
struct ItoKind {
    FeedbackFunction f;
    double drift = 0.0;
    double step = 0.0;
    bool operator==(const ItoKind&) const = default;
};

/// x_{n+1} = x_n (1 + f(x_n) a_{n+1}) + S_n
struct DeterministicKind {
    FeedbackFunction f;
    SignedSequence a;
    bool operator==(const DeterministicKind&) const = default;
};

using EquationKind = std::variant<LinearKind, NonlinearKind, ItoKind, DeterministicKind>;

inline constexpr double kOverflowCap = 1e300;

/// A fully specified recursion. Construction validates X0 > 0 and positivity
/// of the multiplier; it throws PreconditionFailed when positivity fails.
class EquationSpec {
public:
    static EquationSpec linear(NoiseModel xi, CoefficientSequence S, double x0);
    static EquationSpec nonlinear(FeedbackFunction f, NoiseModel xi, CoefficientSequence S, double x0);
    static EquationSpec ito(FeedbackFunction f, double drift, double step, NoiseModel zeta,
                            CoefficientSequence S, double x0);
    static EquationSpec deterministic(FeedbackFunction f, SignedSequence a, CoefficientSequence S,
                                      double x0);

    const EquationKind& kind() const noexcept { return kind_; }
    const std::optional<NoiseModel>& noise() const noexcept { return noise_; }
    const CoefficientSequence& forcing() const noexcept { return forcing_; }
    double x0() const noexcept { return x0_; }

    /// Gain applied to the noise at state x (1 for the linear kind).
    double gain(double x) const;

    bool operator==(const EquationSpec&) const = default;

private:
    EquationSpec(EquationKind kind, std::optional<NoiseModel> noise, CoefficientSequence forcing, double x0);

    EquationKind kind_;
    std::optional<NoiseModel> noise_;
    CoefficientSequence forcing_;
    double x0_;
};

/// Multiplier and forcing of one step: x_{n+1} = multiplier * x_n + forcing.
struct StepParts {
    double noise = 0.0;
    double gain = 1.0;
    double multiplier = 1.0;
    double forcing = 0.0;
};

/// Step n -> n+1 given the noise draw xi_{n+1} (ignored by the deterministic kind).
StepParts step_parts(const EquationSpec& spec, double x, std::uint64_t n, double noise_draw);

/// Step n -> n+1 with a draw from `rng`. Throws Overflow above kOverflowCap.
double step(const EquationSpec& spec, double x, std::uint64_t n, RngStream& rng);

/// Martingale built from the inverse multipliers of the nonlinear recursion:
///   M_{n+1} = M_n (1 + f(X_n) xi_{n+1})^-1 / E[(1 + f(X_n) xi)^-1],  M_0 = 1.
///
/// Needs noise bounded away from -1 and bounded above, so Pareto noise and
/// schedules whose lower edge tends to -1 are rejected with Unsupported.
class MartingaleTracker {
public:
    explicit MartingaleTracker(const EquationSpec& spec);

    double value() const noexcept { return value_; }
    /// Applies one step taken from state x at index n with draw xi_{n+1}.
    double update(double x, std::uint64_t n, double noise_draw);

private:
    std::optional<NoiseModel> noise_;
    FeedbackFunction f_;
    double value_ = 1.0;
};

struct SimulationOptions {
    bool track_martingale = false;
    /// Accumulate the mean of ln(multiplier) over the path.
    bool track_log_growth = false;
    std::vector<double> thresholds_below;
    std::vector<double> thresholds_above;
    std::uint64_t record_stride = 64;
    /// Indices recorded in addition to the stride grid, powers of two, 0 and the horizon.
    std::vector<std::uint64_t> checkpoints;
    bool record_trajectory = true;
};

struct TrajectoryPoint {
    std::uint64_t n;
    double x;
    bool operator==(const TrajectoryPoint&) const = default;
};

/// Streaming statistics of one path. Extremes cover X_0 .. X_N.
struct PathSummary {
    double final_value = 0.0;
    double running_max = 0.0;
    double running_min = 0.0;
    std::uint64_t argmax = 0;
    std::uint64_t argmin = 0;
    std::uint64_t steps = 0;
    /// One entry per configured threshold: first n with X_n < tau.
    std::vector<std::optional<std::uint64_t>> first_below;
    /// One entry per configured threshold: first n with X_n > C.
    std::vector<std::optional<std::uint64_t>> first_above;
    std::optional<double> martingale_final;
    /// Mean over n = 1..N of |M_n - 1|.
    std::optional<double> martingale_mean_abs_dev;
    std::optional<double> mean_log_multiplier;
    bool overflow = false;

    bool operator==(const PathSummary&) const = default;
};

struct PathResult {
    PathSummary summary;
    std::vector<TrajectoryPoint> trajectory;
};

PathResult simulate(const EquationSpec& spec, std::uint64_t horizon, RngStream& rng,
                    const SimulationOptions& options = {});

PathResult simulate(const EquationSpec& spec, std::uint64_t horizon, std::uint64_t seed,
                    const SimulationOptions& options = {});

}  // namespace sdelab
