#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sdelab/analysis.hpp"
#include "sdelab/config.hpp"
#include "sdelab/engine.hpp"
#include "sdelab/ensemble.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/report.hpp"

namespace fs = std::filesystem;
using namespace sdelab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> replicas;
    std::optional<std::string> output;
    bool dump_config = false;
};

fs::path output_directory(const RunConfig& cfg) {
    if (!cfg.output.directory.empty()) return cfg.output.directory;
    if (const char* env = std::getenv("SDELAB_OUTPUT_DIR"); env && *env) return env;
    return "sdelab_out";
}

void emit(const fs::path& dir, const std::string& name, const std::string& content) {
    report::write_atomic(dir / name, content);
    std::cout << "wrote " << (dir / name).string() << '\n';
}

std::string cell(auto&& fn) {
    try {
        return format_double(fn());
    } catch (const NonFinite&) {
        return "inf";
    } catch (const DivisionByZero&) {
        return "undefined";
    }
}

int cmd_moments(const RunConfig& cfg) {
    if (!cfg.noise) throw ConfigError("noise", "required by the moments command");
    const NoiseModel noise = build_noise(cfg);
    const double alpha = cfg.analysis.alpha.value_or(1.0);

    std::ostringstream csv;
    csv << "n,alpha,power_moment,log_moment,mean,second_moment,third_moment,lemma45_ratio\n";
    for (std::uint64_t n : cfg.analysis.moment_indices) {
        csv << n << ',' << format_double(alpha) << ',' << cell([&] { return power_moment(noise, n, alpha); }) << ','
            << cell([&] { return log_moment(noise, n); }) << ',' << cell([&] { return raw_moment(noise, n, 1); })
            << ',' << cell([&] { return raw_moment(noise, n, 2); }) << ','
            << cell([&] { return raw_moment(noise, n, 3); }) << ','
            << cell([&] { return lemma45_ratio(noise, n); }) << '\n';
    }
    std::cout << csv.str();
    if (noise.is_iid()) {
        try {
            const CriticalExponent ce = critical_alpha(noise);
            std::cout << "critical_alpha," << format_double(*ce.alpha_star) << '\n';
        } catch (const NoRoot& e) {
            std::cout << "critical_alpha,none (" << e.what() << ")\n";
        }
    }
    if (cfg.analysis.lemma45_k) {
        const Lemma45Bound b = lemma45_alpha_bound(noise, *cfg.analysis.lemma45_k);
        std::cout << "lemma45_alpha_bound," << format_double(b.alpha_bound) << '\n'
                  << "lemma45_max_ratio," << format_double(b.max_ratio) << '\n';
    }
    emit(output_directory(cfg), "moments.csv", csv.str());
    return 0;
}

TheoremVerdict run_check(const RunConfig& cfg, TheoremId id) {
    const AnalysisConfig& an = cfg.analysis;
    const CoefficientSequence S = build_forcing(cfg);
    switch (id) {
        case TheoremId::T3_1: return check_theorem_3_1(build_noise(cfg), S, *an.alpha, an.n_tail);
        case TheoremId::T3_2:
            return check_theorem_3_2(build_noise(cfg), S, build_kappa(cfg), *an.alpha, *an.gamma_decay, an.n_tail);
        case TheoremId::T4_2: return check_theorem_4_2(build_noise(cfg), S);
        case TheoremId::T4_3: return check_theorem_4_3(build_noise(cfg), S);
        case TheoremId::T5_1: return check_theorem_5_1(build_noise(cfg), S, an.n_tail);
        case TheoremId::T5_2: return check_theorem_5_2(build_noise(cfg), S, *an.alpha, an.n_tail);
        case TheoremId::T5_4:
            return check_theorem_5_4(build_noise(cfg), cfg.equation.drift, cfg.equation.step, S, *an.alpha);
        case TheoremId::L6_1:
            return check_lemma_6_1(FeedbackFunction{cfg.equation.f}, SignedSequence(*cfg.equation.a), S, an.n_tail);
    }
    throw InvalidArgument("unknown theorem");
}

int cmd_check(const RunConfig& cfg) {
    if (cfg.analysis.theorems.empty()) throw ConfigError("analysis.theorems", "no theorems requested");
    std::vector<TheoremVerdict> verdicts;
    for (TheoremId id : cfg.analysis.theorems) {
        verdicts.push_back(run_check(cfg, id));
        std::cout << report::verdict_text(verdicts.back()) << '\n';
    }
    emit(output_directory(cfg), "verdicts.csv", report::verdicts_csv(verdicts));
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const EquationSpec spec = build_equation(cfg);
    SimulationOptions opts;
    opts.record_stride = cfg.output.stride;
    opts.checkpoints = cfg.ensemble.checkpoints;
    opts.thresholds_above = cfg.ensemble.exceed_thresholds;
    opts.track_martingale = cfg.ensemble.track_martingale;
    opts.record_trajectory = cfg.output.trajectories;
    RngStream rng(cfg.ensemble.master_seed, 0);
    const PathResult path = simulate(spec, cfg.ensemble.horizon, rng, opts);

    const std::string summary = report::path_summary_csv(path.summary);
    std::cout << summary;
    const fs::path dir = output_directory(cfg);
    emit(dir, "path_summary.csv", summary);
    if (cfg.output.trajectories) emit(dir, "trajectory_0.csv", report::trajectory_csv(path.trajectory));
    return 0;
}

int cmd_ensemble(const RunConfig& cfg) {
    const EquationSpec spec = build_equation(cfg);
    const EnsembleConfig& e = cfg.ensemble;
    EnsembleOptions opts;
    opts.surrogate = e.surrogate;
    opts.checkpoints = e.checkpoints;
    opts.exceed_thresholds = e.exceed_thresholds;
    opts.track_martingale = e.track_martingale;
    opts.record_stride = cfg.output.stride;
    opts.threads = e.threads;
    const EnsembleResult result = run_ensemble(spec, e.horizon, e.replicas, e.master_seed, opts);

    const std::string summary = report::summary_csv(result);
    std::cout << summary;
    const fs::path dir = output_directory(cfg);
    emit(dir, "paths.csv", report::paths_csv(result));
    emit(dir, "summary.csv", summary);

    if (e.decay_check) {
        const DecayRateResult decay = decay_rate_check(spec, build_kappa(cfg), *cfg.analysis.alpha,
                                                       *cfg.analysis.gamma_decay, e.checkpoints, e.replicas,
                                                       e.master_seed, cfg.analysis.n_tail);
        const std::string csv = report::decay_csv(decay);
        std::cout << csv;
        emit(dir, "decay.csv", csv);
    }
    return 0;
}

int cmd_probe(const RunConfig& cfg) {
    if (!cfg.noise) throw ConfigError("noise", "required by probe-conjecture");
    if (cfg.ensemble.probe_p_grid.empty()) throw ConfigError("ensemble.probe_p_grid", "no exponents given");
    const NoiseModel noise = build_noise(cfg);
    const CriticalExponent ce = critical_alpha(noise);
    ProbeSettings settings;
    settings.horizon = cfg.ensemble.horizon;
    settings.replicas = cfg.ensemble.replicas;
    settings.master_seed = cfg.ensemble.master_seed;
    settings.x0 = cfg.equation.x0;
    settings.surrogate = cfg.ensemble.surrogate;
    settings.record_stride = cfg.output.stride;
    const auto rows = conjecture_probe(noise, ce.alpha_star, cfg.ensemble.probe_p_grid, settings);

    std::cout << "alpha_star," << format_double(*ce.alpha_star) << '\n';
    const std::string csv = report::probe_csv(rows);
    std::cout << csv;
    emit(output_directory(cfg), "probe.csv", csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sdelab: analysis and simulation of stochastic difference equations"};
    app.require_subcommand(1);

    CommonOptions opts;
    struct Command {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&);
    };
    const Command commands[] = {
        {"moments", "Print noise moments over the configured index grid", cmd_moments},
        {"check", "Check theorem hypotheses and print verdicts", cmd_check},
        {"simulate", "Simulate one path", cmd_simulate},
        {"ensemble", "Run a seeded Monte Carlo ensemble", cmd_ensemble},
        {"probe-conjecture", "Sweep S_n = n^-p and report convergence fractions", cmd_probe},
    };
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", opts.config_path, "YAML run configuration")->required();
        sub->add_option("--seed", opts.seed, "Override ensemble.master_seed");
        sub->add_option("--horizon", opts.horizon, "Override ensemble.horizon");
        sub->add_option("--replicas", opts.replicas, "Override ensemble.replicas");
        sub->add_option("--output", opts.output, "Override output.directory");
        sub->add_flag("--dump-config", opts.dump_config, "Print the effective configuration and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        RunConfig cfg = load_config(opts.config_path);
        if (opts.seed) cfg.ensemble.master_seed = *opts.seed;
        if (opts.horizon) cfg.ensemble.horizon = *opts.horizon;
        if (opts.replicas) cfg.ensemble.replicas = *opts.replicas;
        if (opts.output) cfg.output.directory = *opts.output;
        validate_config(cfg);

        if (opts.dump_config) {
            std::cout << dump_config(cfg);
            return 0;
        }
        for (const Command& c : commands)
            if (app.got_subcommand(c.name)) return c.run(cfg);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error (" << e.kind() << "): " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
