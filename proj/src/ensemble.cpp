#include "sdelab/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sdelab/errors.hpp"

namespace sdelab {

void Surrogate::validate() const {
    if (!(eps_conv > 0.0)) throw InvalidArgument("eps_conv must be > 0");
    if (!(c_div > eps_conv)) throw InvalidArgument("c_div must exceed eps_conv");
    if (window < 1) throw InvalidArgument("surrogate window must be >= 1");
}

double quantile(std::vector<double> values, double level) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    if (!(level >= 0.0 && level <= 1.0)) throw InvalidArgument("quantile level must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
    return values[lo] + frac * (values[hi] - values[lo]);
}

Quantiles quantiles(const std::vector<double>& values) {
    return {quantile(values, 0.05), quantile(values, 0.25), quantile(values, 0.5),
            quantile(values, 0.75), quantile(values, 0.95)};
}

std::uint64_t effective_stride(std::uint64_t horizon, std::uint64_t stride, std::uint64_t window) {
    if (stride < 1) throw InvalidArgument("record stride must be >= 1");
    const std::uint64_t fit = std::max<std::uint64_t>(1, horizon / (2 * std::max<std::uint64_t>(window, 1)));
    return std::min(stride, fit);
}

double EnsembleResult::p_exceeded(double C) const {
    if (paths.empty()) return 0.0;
    const auto hits = std::count_if(paths.begin(), paths.end(),
                                    [C](const PathSummary& s) { return s.running_max > C; });
    return static_cast<double>(hits) / static_cast<double>(paths.size());
}

double EnsembleResult::p_exceeded_at(double C, std::uint64_t by_n) const {
    const auto it = std::find(thresholds.begin(), thresholds.end(), C);
    if (it == thresholds.end()) throw InvalidArgument("threshold " + format_double(C) + " is not tracked");
    const auto k = static_cast<std::size_t>(it - thresholds.begin());
    if (paths.empty()) return 0.0;
    const auto hits = std::count_if(paths.begin(), paths.end(), [&](const PathSummary& s) {
        return s.first_above[k] && *s.first_above[k] <= by_n;
    });
    return static_cast<double>(hits) / static_cast<double>(paths.size());
}

namespace {

struct PathRecord {
    PathSummary summary;
    double tail_max = 0.0;
    std::vector<double> checkpoint_values;
};

PathRecord run_path(const EquationSpec& spec, std::uint64_t horizon, std::uint64_t master_seed,
                    std::uint64_t replica, const SimulationOptions& sim, std::uint64_t window) {
    RngStream rng(master_seed, replica);
    PathResult path = simulate(spec, horizon, rng, sim);
    PathRecord record;

    std::vector<double> grid;
    for (const TrajectoryPoint& pt : path.trajectory)
        if (pt.n % sim.record_stride == 0 || pt.n == path.summary.steps) grid.push_back(pt.x);
    const std::size_t take = std::min<std::size_t>(grid.size(), window);
    record.tail_max = *std::max_element(grid.end() - static_cast<std::ptrdiff_t>(take), grid.end());

    record.checkpoint_values.reserve(sim.checkpoints.size());
    for (std::uint64_t c : sim.checkpoints) {
        const auto it = std::lower_bound(
            path.trajectory.begin(), path.trajectory.end(), c,
            [](const TrajectoryPoint& pt, std::uint64_t n) { return pt.n < n; });
        record.checkpoint_values.push_back(it != path.trajectory.end() && it->n == c
                                               ? it->x
                                               : path.summary.final_value);
    }
    record.summary = std::move(path.summary);
    return record;
}

template <class Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::uint64_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

EnsembleResult run_ensemble(const EquationSpec& spec, std::uint64_t horizon, std::uint64_t replicas,
                            std::uint64_t master_seed, const EnsembleOptions& options) {
    if (replicas < 1) throw InvalidArgument("replicas must be >= 1");
    if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
    options.surrogate.validate();

    EnsembleResult result;
    result.horizon = horizon;
    result.replicas = replicas;
    result.master_seed = master_seed;
    result.surrogate = options.surrogate;
    result.effective_stride = effective_stride(horizon, options.record_stride, options.surrogate.window);

    result.thresholds = options.exceed_thresholds;
    if (std::find(result.thresholds.begin(), result.thresholds.end(), options.surrogate.c_div) ==
        result.thresholds.end())
        result.thresholds.push_back(options.surrogate.c_div);

    std::vector<std::uint64_t> checkpoints = options.checkpoints;
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    for (std::uint64_t c : checkpoints)
        if (c > horizon) throw InvalidArgument("checkpoint " + std::to_string(c) + " exceeds the horizon");

    SimulationOptions sim;
    sim.track_martingale = options.track_martingale;
    sim.thresholds_above = result.thresholds;
    sim.record_stride = result.effective_stride;
    sim.checkpoints = checkpoints;

    std::vector<PathRecord> records(replicas);
    parallel_for(replicas, options.threads, [&](std::uint64_t r) {
        records[r] = run_path(spec, horizon, master_seed, r, sim, options.surrogate.window);
    });

    result.paths.reserve(replicas);
    result.tail_max.reserve(replicas);
    result.checkpoint_values.reserve(replicas);
    std::uint64_t converged = 0, diverged = 0, overflowed = 0;
    std::vector<double> finals, mins;
    for (PathRecord& rec : records) {
        if (rec.tail_max < options.surrogate.eps_conv && !rec.summary.overflow) ++converged;
        if (rec.summary.running_max > options.surrogate.c_div) ++diverged;
        if (rec.summary.overflow) ++overflowed;
        finals.push_back(rec.summary.final_value);
        mins.push_back(rec.summary.running_min);
        result.tail_max.push_back(rec.tail_max);
        result.checkpoint_values.push_back(std::move(rec.checkpoint_values));
        result.paths.push_back(std::move(rec.summary));
    }
    const auto R = static_cast<double>(replicas);
    result.p_converged = static_cast<double>(converged) / R;
    result.p_diverged = static_cast<double>(diverged) / R;
    result.p_overflow = static_cast<double>(overflowed) / R;
    result.final_value = quantiles(finals);
    result.running_min = quantiles(mins);

    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        std::vector<double> column;
        column.reserve(replicas);
        for (const auto& row : result.checkpoint_values) column.push_back(row[k]);
        result.checkpoints.push_back({checkpoints[k], quantiles(column)});
    }

    if (options.track_martingale) {
        double sum = 0.0;
        for (const PathSummary& s : result.paths) sum += *s.martingale_final;
        const double mean = sum / R;
        double ss = 0.0;
        for (const PathSummary& s : result.paths) ss += (*s.martingale_final - mean) * (*s.martingale_final - mean);
        result.martingale_mean = mean;
        result.martingale_se = replicas > 1 ? std::sqrt(ss / (R - 1.0) / R) : 0.0;
    }
    return result;
}

DecayRateResult decay_rate_check(const EquationSpec& spec, const KappaSequence& kappa, double alpha,
                                 double gamma_decay, std::vector<std::uint64_t> checkpoints,
                                 std::uint64_t replicas, std::uint64_t master_seed,
                                 std::uint64_t n_tail) {
    if (!std::holds_alternative<LinearKind>(spec.kind()) || !spec.noise())
        throw PreconditionFailed("decay-rate check needs a linear recursion");
    if (checkpoints.empty()) throw InvalidArgument("decay-rate check needs at least one checkpoint");

    DecayRateResult out;
    out.verdict = check_theorem_3_2(*spec.noise(), spec.forcing(), kappa, alpha, gamma_decay, n_tail);
    if (out.verdict.conclusion != Conclusion::ConvergesToZero) {
        std::string failing;
        for (const ConditionResult& c : out.verdict.conditions)
            if (c.status != ConditionStatus::Holds) failing += (failing.empty() ? "" : ", ") + c.id;
        throw PreconditionFailed("decay-rate hypotheses not established (" + failing + ")");
    }

    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    EnsembleOptions options;
    options.checkpoints = checkpoints;
    const EnsembleResult ens = run_ensemble(spec, checkpoints.back(), replicas, master_seed, options);

    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const std::uint64_t n = checkpoints[k];
        const double weight = -gamma_decay * kappa.prefix_sum(n);
        std::vector<double> logs;
        logs.reserve(replicas);
        for (const auto& row : ens.checkpoint_values) logs.push_back(weight + alpha * std::log(row[k]));
        DecayCheckpoint cp;
        cp.n = n;
        cp.log_median = quantile(logs, 0.5);
        cp.log_p95 = quantile(logs, 0.95);
        cp.median = std::exp(cp.log_median);
        cp.p95 = std::exp(cp.log_p95);
        out.checkpoints.push_back(cp);
    }
    return out;
}

Quantiles liminf_estimator(const EquationSpec& spec, std::uint64_t horizon, std::uint64_t replicas,
                           std::uint64_t master_seed) {
    return run_ensemble(spec, horizon, replicas, master_seed).running_min;
}

std::string_view to_string(SummabilityLabel label) {
    switch (label) {
        case SummabilityLabel::Summable: return "summable";
        case SummabilityLabel::NotSummable: return "not summable";
        case SummabilityLabel::Boundary: return "boundary";
    }
    return "boundary";
}

std::vector<ProbeRow> conjecture_probe(const NoiseModel& noise, std::optional<double> alpha_star,
                                       const std::vector<double>& p_grid,
                                       const ProbeSettings& settings) {
    if (!alpha_star || !(*alpha_star > 0.0))
        throw PreconditionFailed("conjecture probe needs a critical exponent alpha*");
    if (!noise.is_iid()) throw NotIID("conjecture probe needs iid noise");

    EnsembleOptions options;
    options.surrogate = settings.surrogate;
    options.record_stride = settings.record_stride;

    std::vector<ProbeRow> rows;
    for (double p : p_grid) {
        if (!(p > 0.0)) throw InvalidArgument("probe exponents must be > 0");
        ProbeRow row;
        row.p = p;
        const double t = p * *alpha_star;
        row.label = std::abs(t - 1.0) <= 1e-12 ? SummabilityLabel::Boundary
                    : t > 1.0                  ? SummabilityLabel::Summable
                                               : SummabilityLabel::NotSummable;
        const EquationSpec spec =
            EquationSpec::linear(noise, CoefficientSequence::power_law(1.0, p), settings.x0);
        row.p_converged =
            run_ensemble(spec, settings.horizon, settings.replicas, settings.master_seed, options).p_converged;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sdelab
