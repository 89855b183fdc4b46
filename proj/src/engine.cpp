#include "sdelab/engine.hpp"

#include <algorithm>
#include <cmath>

#include "sdelab/errors.hpp"

namespace sdelab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::uint64_t kDriftScanWindow = 1024;

void require_positive_x0(double x0) {
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw InvalidArgument("X0 must be positive and finite");
}

void require_positivity(const NoiseModel& noise, const PositivityContext& context) {
    const PositivityReport report = validate_positivity(noise, context);
    if (!report.ok) throw PreconditionFailed("positivity violated: " + report.detail);
}

bool is_power_of_two(std::uint64_t m) { return m != 0 && (m & (m - 1)) == 0; }

}  // namespace

EquationSpec::EquationSpec(EquationKind kind, std::optional<NoiseModel> noise,
                           CoefficientSequence forcing, double x0)
    : kind_(std::move(kind)), noise_(std::move(noise)), forcing_(std::move(forcing)), x0_(x0) {
    require_positive_x0(x0_);
}

EquationSpec EquationSpec::linear(NoiseModel xi, CoefficientSequence S, double x0) {
    require_positivity(xi, LinearContext{});
    return EquationSpec(LinearKind{}, std::move(xi), std::move(S), x0);
}

EquationSpec EquationSpec::nonlinear(FeedbackFunction f, NoiseModel xi, CoefficientSequence S,
                                     double x0) {
    require_positivity(xi, NonlinearContext{});
    return EquationSpec(NonlinearKind{f}, std::move(xi), std::move(S), x0);
}

EquationSpec EquationSpec::ito(FeedbackFunction f, double drift, double step, NoiseModel zeta,
                               CoefficientSequence S, double x0) {
    if (!(drift >= 0.0)) throw InvalidArgument("Ito drift a must be >= 0");
    if (!(step > 0.0)) throw InvalidArgument("Ito step k must be > 0");
    require_positivity(zeta, ItoContext{drift, step});
    return EquationSpec(ItoKind{f, drift, step}, std::move(zeta), std::move(S), x0);
}

EquationSpec EquationSpec::deterministic(FeedbackFunction f, SignedSequence a, CoefficientSequence S,
                                         double x0) {
    for (std::uint64_t n = 1; n <= kDriftScanWindow; ++n)
        if (a.value_at(n) < -1.0)
            throw PreconditionFailed("deterministic drift a_n < -1 at n=" + std::to_string(n));
    return EquationSpec(DeterministicKind{f, std::move(a)}, std::nullopt, std::move(S), x0);
}

double EquationSpec::gain(double x) const {
    return std::visit(Overloaded{[](const LinearKind&) { return 1.0; },
                                 [&](const NonlinearKind& k) { return k.f(x); },
                                 [&](const ItoKind& k) { return k.f(x); },
                                 [&](const DeterministicKind& k) { return k.f(x); }},
                      kind_);
}

StepParts step_parts(const EquationSpec& spec, double x, std::uint64_t n, double noise_draw) {
    StepParts parts;
    parts.noise = noise_draw;
    parts.gain = spec.gain(x);
    parts.forcing = spec.forcing().forcing_at(n);
    parts.multiplier = std::visit(
        Overloaded{[&](const LinearKind&) { return 1.0 + noise_draw; },
                   [&](const NonlinearKind&) { return 1.0 + parts.gain * noise_draw; },
                   [&](const ItoKind& k) {
                       const double kf = k.step * parts.gain;
                       return 1.0 + kf * k.drift + std::sqrt(kf) * noise_draw;
                   },
                   [&](const DeterministicKind& k) {
                       parts.noise = k.a.value_at(n + 1);
                       return 1.0 + parts.gain * parts.noise;
                   }},
        spec.kind());
    return parts;
}

namespace {

double draw_noise(const EquationSpec& spec, std::uint64_t n, RngStream& rng) {
    return spec.noise() ? sample(*spec.noise(), n + 1, rng) : 0.0;
}

}  // namespace

double step(const EquationSpec& spec, double x, std::uint64_t n, RngStream& rng) {
    if (!(x >= 0.0)) throw InvalidArgument("state must be non-negative");
    const StepParts parts = step_parts(spec, x, n, draw_noise(spec, n, rng));
    const double next = parts.multiplier * x + parts.forcing;
    if (!(next <= kOverflowCap)) throw Overflow("iterate exceeded 1e300 at n=" + std::to_string(n + 1));
    return next;
}

MartingaleTracker::MartingaleTracker(const EquationSpec& spec) {
    const bool supported_kind = std::holds_alternative<LinearKind>(spec.kind()) ||
                                std::holds_alternative<NonlinearKind>(spec.kind());
    if (!supported_kind || !spec.noise())
        throw Unsupported("martingale tracker applies to linear and nonlinear recursions only");
    const NoiseModel& noise = *spec.noise();
    if (noise.family() == NoiseFamily::ParetoTail)
        throw Unsupported("martingale tracker requires bounded noise; Pareto noise is unbounded");
    if (!noise.is_iid() && !(noise.parameters()[0].limit() > -1.0))
        throw Unsupported("martingale tracker requires the noise support to stay away from -1");
    noise_ = noise;
    if (const auto* k = std::get_if<NonlinearKind>(&spec.kind())) f_ = k->f;
}

double MartingaleTracker::update(double x, std::uint64_t n, double noise_draw) {
    const double g = f_(x);
    const double conditional = inverse_moment(noise_->law_at(n + 1), g);
    value_ *= 1.0 / ((1.0 + g * noise_draw) * conditional);
    return value_;
}

PathResult simulate(const EquationSpec& spec, std::uint64_t horizon, RngStream& rng,
                    const SimulationOptions& options) {
    if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
    if (options.record_stride < 1) throw InvalidArgument("record_stride must be >= 1");

    std::optional<MartingaleTracker> tracker;
    if (options.track_martingale) tracker.emplace(spec);

    std::vector<std::uint64_t> checkpoints = options.checkpoints;
    std::sort(checkpoints.begin(), checkpoints.end());
    auto next_checkpoint = checkpoints.begin();

    PathResult result;
    PathSummary& s = result.summary;
    s.first_below.assign(options.thresholds_below.size(), std::nullopt);
    s.first_above.assign(options.thresholds_above.size(), std::nullopt);

    double x = spec.x0();
    double abs_dev_sum = 0.0;
    double log_sum = 0.0;
    s.running_max = s.running_min = x;

    const auto observe = [&](std::uint64_t n, double value) {
        if (value > s.running_max) {
            s.running_max = value;
            s.argmax = n;
        }
        if (value < s.running_min) {
            s.running_min = value;
            s.argmin = n;
        }
        for (std::size_t i = 0; i < options.thresholds_below.size(); ++i)
            if (!s.first_below[i] && value < options.thresholds_below[i]) s.first_below[i] = n;
        for (std::size_t i = 0; i < options.thresholds_above.size(); ++i)
            if (!s.first_above[i] && value > options.thresholds_above[i]) s.first_above[i] = n;
    };
    const auto record = [&](std::uint64_t n, double value, bool force) {
        while (next_checkpoint != checkpoints.end() && *next_checkpoint < n) ++next_checkpoint;
        const bool at_checkpoint = next_checkpoint != checkpoints.end() && *next_checkpoint == n;
        if (!options.record_trajectory) return;
        if (force || at_checkpoint || n % options.record_stride == 0 || is_power_of_two(n))
            result.trajectory.push_back({n, value});
    };

    observe(0, x);
    record(0, x, true);

    std::uint64_t n = 0;
    for (; n < horizon; ++n) {
        const double draw = draw_noise(spec, n, rng);
        const StepParts parts = step_parts(spec, x, n, draw);
        if (tracker) {
            const double m = tracker->update(x, n, draw);
            abs_dev_sum += std::abs(m - 1.0);
        }
        if (options.track_log_growth) log_sum += std::log(parts.multiplier);
        x = parts.multiplier * x + parts.forcing;
        observe(n + 1, x);
        if (!(x <= kOverflowCap)) {
            s.overflow = true;
            record(n + 1, x, true);
            ++n;
            break;
        }
        record(n + 1, x, n + 1 == horizon);
    }

    s.steps = n;
    s.final_value = x;
    if (tracker) {
        s.martingale_final = tracker->value();
        s.martingale_mean_abs_dev = abs_dev_sum / static_cast<double>(n);
    }
    if (options.track_log_growth) s.mean_log_multiplier = log_sum / static_cast<double>(n);
    return result;
}

PathResult simulate(const EquationSpec& spec, std::uint64_t horizon, std::uint64_t seed,
                    const SimulationOptions& options) {
    RngStream rng(seed, 0);
    return simulate(spec, horizon, rng, options);
}

}  // namespace sdelab
