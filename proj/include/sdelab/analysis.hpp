#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdelab/feedback.hpp"
#include "sdelab/noise.hpp"
#include "sdelab/sequences.hpp"

namespace sdelab {

enum class TheoremId { T3_1, T3_2, T4_2, T4_3, T5_1, T5_2, T5_4, L6_1 };

enum class Conclusion { LimitExists, ConvergesToZero, LiminfZero, DivergesAS, NotApplicable };

std::string_view to_string(TheoremId id);
TheoremId theorem_id_from_string(std::string_view name);
std::string_view to_string(Conclusion c);

struct ConditionResult {
    std::string id;
    ConditionStatus status = ConditionStatus::Inconclusive;
    double quantity = 0.0;
    std::string note;
};

/// Result of checking a theorem's hypotheses against a configuration.
///
/// `conclusion` is NotApplicable unless every condition the conclusion needs
/// holds. `claim` states the conclusion in words when it is not simply about
/// X_n (e.g. the weighted decay statement).
struct TheoremVerdict {
    TheoremId theorem = TheoremId::T3_1;
    std::vector<ConditionResult> conditions;
    Conclusion conclusion = Conclusion::NotApplicable;
    std::string claim;
    /// The conclusion holds only for a sufficiently small step k.
    bool small_k_required = false;

    const ConditionResult* find(std::string_view id) const;
    bool holds(std::string_view id) const;
};

/// Positive root of E(1+xi)^alpha = 1.
struct CriticalExponent {
    std::optional<double> alpha_star;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    /// |E(1+xi)^alpha_star - 1|.
    double residual = 0.0;
};

/// Finds the unique alpha* > 0 with E(1+xi)^alpha* = 1 for iid noise.
///
/// Brackets by doubling from alpha = 1 (capped at 128; moments that are
/// infinite count as above 1) and bisects on the convex moment function.
/// Throws NotIID for scheduled noise and NoRoot when E ln(1+xi) >= 0 or
/// P(xi > 0) = 0.
CriticalExponent critical_alpha(const NoiseModel& noise);

TheoremVerdict check_theorem_3_1(const NoiseModel& noise, const CoefficientSequence& S, double alpha,
                                 std::uint64_t n_tail = kDefaultTail);

TheoremVerdict check_theorem_3_2(const NoiseModel& noise, const CoefficientSequence& S,
                                 const KappaSequence& kappa, double alpha, double gamma_decay,
                                 std::uint64_t n_tail = kDefaultTail);

/// Homogeneous iid recursion: X_n -> 0 iff E ln(1+xi) < 0.
TheoremVerdict check_theorem_4_2(const NoiseModel& noise, const CoefficientSequence& S);

/// iid noise with E ln(1+xi) < 0 and some alpha-summable S: liminf X_n = 0.
TheoremVerdict check_theorem_4_3(const NoiseModel& noise, const CoefficientSequence& S);

TheoremVerdict check_theorem_5_1(const NoiseModel& noise, const CoefficientSequence& S,
                                 std::uint64_t n_tail = kDefaultTail);

TheoremVerdict check_theorem_5_2(const NoiseModel& noise, const CoefficientSequence& S, double alpha,
                                 std::uint64_t n_tail = kDefaultTail);

/// (E zeta^2 - 2a) / E zeta^2.
double ito_alpha0(const NoiseModel& zeta, double drift);

TheoremVerdict check_theorem_5_4(const NoiseModel& zeta, double drift, double step,
                                 const CoefficientSequence& S, double alpha);

TheoremVerdict check_lemma_6_1(const FeedbackFunction& f, const SignedSequence& a,
                               const CoefficientSequence& S, std::uint64_t n_tail = kDefaultTail);

/// Uniform alpha bound from a constant K dominating the ratio
/// E[(2+xi) ln^2(1+xi)] / |E ln(1+xi)|.
struct Lemma45Bound {
    double alpha_bound = 0.0;
    /// Largest ratio observed over the checked indices.
    double max_ratio = 0.0;
};

/// Returns min(1/K, 1) after checking the ratio is <= K on n = 1..n_check
/// (n = 1 only for iid noise). Throws PreconditionFailed otherwise.
Lemma45Bound lemma45_alpha_bound(const NoiseModel& noise, double K, std::uint64_t n_check = 1000);

struct Lemma45Sandwich {
    double lower = 0.0;   ///< alpha E ln(1+xi)
    double value = 0.0;   ///< E(1+xi)^alpha - 1
    double upper = 0.0;   ///< alpha (E ln + |E ln| / 2)
};

Lemma45Sandwich lemma45_sandwich(const NoiseModel& noise, std::uint64_t n, double alpha);

/// Smallest K(eps) with (a+b)^alpha <= (1+eps) a^alpha + K(eps) b^alpha for
/// all a, b > 0: K = (1 - (1+eps)^(-1/(alpha-1)))^(1-alpha), and 1 at alpha = 1.
double power_split_bound(double alpha, double epsilon);

}  // namespace sdelab
