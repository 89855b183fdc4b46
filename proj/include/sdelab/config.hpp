#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdelab/analysis.hpp"
#include "sdelab/engine.hpp"
#include "sdelab/ensemble.hpp"

namespace sdelab {

enum class RecursionKind { Linear, Nonlinear, Ito, Deterministic };
std::string_view to_string(RecursionKind kind);

struct EquationConfig {
    RecursionKind kind = RecursionKind::Linear;
    double x0 = 1.0;
    FeedbackKind f = FeedbackKind::One;
    double drift = 0.0;  ///< Ito drift a
    double step = 0.0;   ///< Ito step k
    /// Drift sequence a_n of the deterministic recursion.
    std::optional<SequenceFamily> a;
    bool operator==(const EquationConfig&) const = default;
};

struct NoiseConfig {
    NoiseFamily family = NoiseFamily::Degenerate;
    /// Ordered as NoiseModel::parameter_names(family).
    std::vector<ScheduleExpr> params;
    bool operator==(const NoiseConfig&) const = default;
};

struct AnalysisConfig {
    std::optional<double> alpha;
    std::optional<double> gamma_decay;
    std::vector<TheoremId> theorems;
    std::uint64_t n_tail = kDefaultTail;
    std::vector<std::uint64_t> moment_indices{1};
    /// Constant dominating the moment ratio, for the uniform alpha bound.
    std::optional<double> lemma45_k;
    bool operator==(const AnalysisConfig&) const = default;
};

struct EnsembleConfig {
    std::uint64_t horizon = 1000;
    std::uint64_t replicas = 100;
    std::uint64_t master_seed = 1;
    Surrogate surrogate;
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> exceed_thresholds;
    bool track_martingale = false;
    unsigned threads = 1;
    bool decay_check = false;
    std::vector<double> probe_p_grid;
    bool operator==(const EnsembleConfig&) const = default;
};

struct OutputConfig {
    /// Empty means: SDELAB_OUTPUT_DIR if set, else "sdelab_out".
    std::string directory;
    std::uint64_t stride = 64;
    bool trajectories = true;
    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    EquationConfig equation;
    std::optional<NoiseConfig> noise;
    SequenceFamily free_coefficient = Zero{};
    std::optional<SequenceFamily> kappa;
    AnalysisConfig analysis;
    EnsembleConfig ensemble;
    OutputConfig output;
    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a YAML document. Throws ConfigError naming the
/// offending field and, where known, its line.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::filesystem::path& path);

/// Cross-field validation (positivity, surrogate ordering, per-theorem alpha ranges).
void validate_config(const RunConfig& config);

/// YAML text that parse_config maps back to an identical RunConfig.
std::string dump_config(const RunConfig& config);

NoiseModel build_noise(const RunConfig& config);
CoefficientSequence build_forcing(const RunConfig& config);
KappaSequence build_kappa(const RunConfig& config);
EquationSpec build_equation(const RunConfig& config);

}  // namespace sdelab
