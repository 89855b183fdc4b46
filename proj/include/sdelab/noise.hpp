#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdelab/rng.hpp"
#include "sdelab/schedule.hpp"

namespace sdelab {

enum class NoiseFamily { TwoPoint, UniformInterval, ParetoTail, Degenerate };

std::string_view to_string(NoiseFamily family);
NoiseFamily noise_family_from_string(std::string_view name);

/// xi = hi with probability p_hi, lo otherwise.
struct TwoPointLaw {
    double lo;
    double hi;
    double p_hi;
};

/// xi uniform on [lo, hi].
struct UniformLaw {
    double lo;
    double hi;
};

/// 1 + xi has density gamma * scale^gamma / x^(1+gamma) on (scale, inf).
struct ParetoLaw {
    double gamma;
    double scale;
};

struct DegenerateLaw {
    double c;
};

/// The distribution of a single xi_n once its index is fixed.
using NoiseLaw = std::variant<TwoPointLaw, UniformLaw, ParetoLaw, DegenerateLaw>;

/// A (possibly index-dependent) law for the noise xi_n, n >= 1.
///
/// Parameters are ScheduleExpr values; the model is iid when every parameter
/// is constant. Construction checks the structural invariants (probabilities in
/// [0,1], lo < hi, positive Pareto shape and scale). Whether the support keeps
/// the recursion positive depends on how the noise is used and is checked
/// separately by validate_positivity.
class NoiseModel {
public:
    static NoiseModel two_point(ScheduleExpr lo, ScheduleExpr hi, ScheduleExpr p_hi);
    static NoiseModel uniform(ScheduleExpr lo, ScheduleExpr hi);
    static NoiseModel pareto(ScheduleExpr gamma, ScheduleExpr scale);
    static NoiseModel degenerate(ScheduleExpr c);

    static NoiseModel two_point(double lo, double hi, double p_hi) {
        return two_point(ScheduleExpr::constant(lo), ScheduleExpr::constant(hi),
                         ScheduleExpr::constant(p_hi));
    }
    static NoiseModel uniform(double lo, double hi) {
        return uniform(ScheduleExpr::constant(lo), ScheduleExpr::constant(hi));
    }
    static NoiseModel pareto(double gamma, double scale) {
        return pareto(ScheduleExpr::constant(gamma), ScheduleExpr::constant(scale));
    }
    static NoiseModel degenerate(double c) { return degenerate(ScheduleExpr::constant(c)); }

    /// Generic constructor used by the config layer; `params` follow parameter_names().
    static NoiseModel make(NoiseFamily family, const std::vector<ScheduleExpr>& params);

    NoiseFamily family() const noexcept { return family_; }
    bool is_iid() const noexcept { return iid_; }

    /// Law of xi_n. Throws InvalidArgument for n == 0.
    NoiseLaw law_at(std::uint64_t n) const;

    const std::vector<ScheduleExpr>& parameters() const noexcept { return params_; }
    static std::vector<std::string_view> parameter_names(NoiseFamily family);

    bool operator==(const NoiseModel& other) const {
        return family_ == other.family_ && params_ == other.params_;
    }

private:
    NoiseModel(NoiseFamily family, std::vector<ScheduleExpr> params);
    NoiseLaw evaluate(std::uint64_t n) const;
    void validate() const;

    NoiseFamily family_;
    std::vector<ScheduleExpr> params_;
    bool iid_ = true;
    NoiseLaw iid_law_;
};

// ---- law-level primitives -------------------------------------------------

/// Inverse-CDF draw from a uniform u in (0,1).
///   TwoPoint: hi when u < p_hi, else lo.
///   Uniform:  lo + (hi - lo) u.
///   Pareto:   1 + xi = scale * u^(-1/gamma).
double sample_from_uniform(const NoiseLaw& law, double u);

/// E(1+xi)^alpha for any real alpha where finite; throws NonFinite otherwise.
double power_moment(const NoiseLaw& law, double alpha);
bool power_moment_finite(const NoiseLaw& law, double alpha);
double log_moment(const NoiseLaw& law);
double raw_moment(const NoiseLaw& law, int k);
/// E|xi|^k is finite.
bool abs_moment_finite(const NoiseLaw& law, int k);
/// E[(2+xi) ln^2(1+xi)].
double lemma45_numerator(const NoiseLaw& law);
/// E[(1 + f xi)^-1] for a fixed gain f in [0,1]. Throws Unsupported for Pareto.
double inverse_moment(const NoiseLaw& law, double gain);
/// Smallest value in the support (atoms of zero probability excluded).
double support_infimum(const NoiseLaw& law);
/// P(xi > 0) > 0.
bool has_positive_mass(const NoiseLaw& law);

// ---- model-level operations -----------------------------------------------

double sample(const NoiseModel& model, std::uint64_t n, RngStream& rng);

/// E(1+xi_n)^alpha, alpha > 0. Throws NonFinite for Pareto with alpha >= gamma.
double power_moment(const NoiseModel& model, std::uint64_t n, double alpha);
/// E ln(1+xi_n).
double log_moment(const NoiseModel& model, std::uint64_t n);
/// E xi_n^k for k in 1..3.
double raw_moment(const NoiseModel& model, std::uint64_t n, int k);
/// E[(2+xi_n) ln^2(1+xi_n)] / |E ln(1+xi_n)|. Throws DivisionByZero when E ln = 0.
double lemma45_ratio(const NoiseModel& model, std::uint64_t n);

struct LinearContext {};
struct NonlinearContext {};
struct ItoContext {
    double drift;
    double step;
};
using PositivityContext = std::variant<LinearContext, NonlinearContext, ItoContext>;

struct PositivityReport {
    bool ok = true;
    std::optional<std::uint64_t> offending_n;
    /// Minimum of the positivity expression found (1 + inf support for linear kinds).
    double bound = 0.0;
    std::string detail;
};

/// Checks that the multiplier stays positive for every index n >= 1.
///
/// Linear/nonlinear: inf support(xi_n) > -1. Ito: 1 + k f a + sqrt(k f) z > 0
/// for every f in [0,1], z = inf support(zeta_n). Schedules are monotone in n,
/// so the scan covers a leading window plus the n -> infinity limit.
PositivityReport validate_positivity(const NoiseModel& model, const PositivityContext& context);

/// min over f in [0,1] of 1 + k f a + sqrt(k f) z.
double ito_multiplier_minimum(double drift, double step, double z);

}  // namespace sdelab
