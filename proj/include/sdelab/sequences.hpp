#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdelab/noise.hpp"

namespace sdelab {

/// c * n^-p
struct PowerLaw {
    double c;
    double p;
    bool operator==(const PowerLaw&) const = default;
};

/// c * r^n
struct Geometric {
    double c;
    double r;
    bool operator==(const Geometric&) const = default;
};

/// Explicit values for n = 1..size(); zero afterwards.
struct Table {
    std::vector<double> values;
    bool operator==(const Table&) const = default;
};

struct Zero {
    bool operator==(const Zero&) const = default;
};

using SequenceFamily = std::variant<PowerLaw, Geometric, Table, Zero>;

std::string_view family_name(const SequenceFamily& family);
double evaluate(const SequenceFamily& family, std::uint64_t n);

/// Non-negative free coefficient S_n (also used for the drift sequence a_n
/// of the deterministic recursion through SignedSequence).
class CoefficientSequence {
public:
    CoefficientSequence() : family_(Zero{}) {}
    explicit CoefficientSequence(SequenceFamily family);

    static CoefficientSequence power_law(double c, double p) { return CoefficientSequence(PowerLaw{c, p}); }
    static CoefficientSequence geometric(double c, double r) { return CoefficientSequence(Geometric{c, r}); }
    static CoefficientSequence table(std::vector<double> v) { return CoefficientSequence(Table{std::move(v)}); }
    static CoefficientSequence zero() { return CoefficientSequence(Zero{}); }

    /// S_n for n >= 1.
    double value_at(std::uint64_t n) const;

    /// Forcing applied at recursion step n >= 0. For n >= 1 this is S_n; the
    /// first step uses S_0, which parametric families take as c * n^-p at
    /// n = 1 (power law) or c * r^0 (geometric), and tables as their first entry.
    double forcing_at(std::uint64_t n) const;

    const SequenceFamily& family() const noexcept { return family_; }
    bool operator==(const CoefficientSequence&) const = default;

private:
    SequenceFamily family_;
};

/// Sequence allowed to take negative values (kappa_i of the decay theorem, a_n
/// of the deterministic recursion), with prefix sums.
class SignedSequence {
public:
    SignedSequence() : family_(Zero{}) {}
    explicit SignedSequence(SequenceFamily family);

    static SignedSequence constant(double c) { return SignedSequence(PowerLaw{c, 0.0}); }
    static SignedSequence power_law(double c, double p) { return SignedSequence(PowerLaw{c, p}); }

    double value_at(std::uint64_t n) const;
    /// sum_{i=1}^{n} value_at(i).
    double prefix_sum(std::uint64_t n) const;
    /// Whether sum_i value_i diverges to -infinity (exact for every family).
    bool diverges_to_minus_infinity() const;

    const SequenceFamily& family() const noexcept { return family_; }
    bool operator==(const SignedSequence&) const = default;

private:
    SequenceFamily family_;
};

using KappaSequence = SignedSequence;

enum class Summability { Summable, Divergent };
enum class ConditionStatus { Holds, Fails, Inconclusive };

std::string_view to_string(ConditionStatus status);
std::string_view to_string(Summability s);

/// Exact classification of sum_n S_n^alpha.
Summability alpha_summable(const CoefficientSequence& seq, double alpha);

inline constexpr std::uint64_t kDefaultTail = 100000;

/// Outcome of classifying an infinite sum from a finite prefix.
struct TailClassification {
    ConditionStatus status = ConditionStatus::Inconclusive;
    double partial_sum = 0.0;
    /// Fitted decay exponent q (summand ~ n^-q), NaN if not fitted.
    double decay_exponent = 0.0;
    bool overflow = false;
};

/// Classifies convergence of sum_{i=first}^{first+len-1} |summand_i| by a
/// least-squares fit of ln|summand| against ln i over the last decade of
/// indices: q >= 1.05 -> Holds (converges), q <= 0.95 -> Fails, otherwise
/// Inconclusive. A tail of exact zeros converges.
TailClassification classify_decay(std::span<const double> summand, std::uint64_t first_index);

/// Condition for alpha > 1:
///   sum_i S_i^alpha / |1 - E(1+xi_{i+1})^alpha|^(alpha-1) < infinity
/// over i = 1..n_tail. Throws DivisionByZero if the moment equals 1 exactly.
TailClassification weighted_condition8(const CoefficientSequence& seq, const NoiseModel& noise,
                                       double alpha, std::uint64_t n_tail = kDefaultTail);

/// sum_n exp(-sum_{i<=n+1} kappa_i) S_n^alpha < infinity, evaluated in log
/// space. Holds when successive-term ratios stay below 1 - 1e-3 over the last
/// decade, or failing that when the log-log decay exponent clears 1.05. A log
/// summand above 700 marks Fails with `overflow` set.
TailClassification thm32_exp_weighted(const CoefficientSequence& seq, const KappaSequence& kappa,
                                      double alpha, std::uint64_t n_tail = kDefaultTail);

}  // namespace sdelab
