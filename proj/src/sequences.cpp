#include "sdelab/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdelab/errors.hpp"

namespace sdelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogOverflow = 700.0;
constexpr double kRatioMargin = 1e-3;
constexpr double kConvergentSlope = 1.05;
constexpr double kDivergentSlope = 0.95;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_index(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("sequence index starts at n=1");
}

// Least-squares slope of log_summand against ln(index) over the last decade,
// skipping -inf entries (zero summands).
std::optional<double> last_decade_slope(std::span<const double> log_summand,
                                        std::uint64_t first_index) {
    if (log_summand.empty()) return std::nullopt;
    const std::uint64_t last = first_index + log_summand.size() - 1;
    const std::uint64_t start = std::max<std::uint64_t>(first_index, last / 10);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::uint64_t i = start; i <= last; ++i) {
        const double y = log_summand[i - first_index];
        if (!std::isfinite(y)) continue;
        const double x = std::log(static_cast<double>(i));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return std::nullopt;
    const double n = static_cast<double>(count);
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

TailClassification classify_log_decay(std::span<const double> log_summand,
                                      std::uint64_t first_index) {
    TailClassification out;
    for (double y : log_summand)
        if (std::isfinite(y)) out.partial_sum += std::exp(y);
    const auto slope = last_decade_slope(log_summand, first_index);
    if (!slope) {
        // Tail is (almost) entirely zero.
        out.status = ConditionStatus::Holds;
        out.decay_exponent = std::numeric_limits<double>::infinity();
        return out;
    }
    out.decay_exponent = -*slope;
    if (out.decay_exponent >= kConvergentSlope) out.status = ConditionStatus::Holds;
    else if (out.decay_exponent <= kDivergentSlope) out.status = ConditionStatus::Fails;
    else out.status = ConditionStatus::Inconclusive;
    return out;
}

}  // namespace

std::string_view family_name(const SequenceFamily& family) {
    return std::visit(Overloaded{[](const PowerLaw&) { return std::string_view("power_law"); },
                                 [](const Geometric&) { return std::string_view("geometric"); },
                                 [](const Table&) { return std::string_view("table"); },
                                 [](const Zero&) { return std::string_view("zero"); }},
                      family);
}

double evaluate(const SequenceFamily& family, std::uint64_t n) {
    return std::visit(Overloaded{[&](const PowerLaw& s) {
                                     if (s.p == 0.0) return s.c;
                                     return s.c * std::pow(static_cast<double>(n), -s.p);
                                 },
                                 [&](const Geometric& s) {
                                     return s.c * std::pow(s.r, static_cast<double>(n));
                                 },
                                 [&](const Table& s) {
                                     return (n >= 1 && n <= s.values.size()) ? s.values[n - 1] : 0.0;
                                 },
                                 [](const Zero&) { return 0.0; }},
                      family);
}

std::string_view to_string(ConditionStatus status) {
    switch (status) {
        case ConditionStatus::Holds: return "Holds";
        case ConditionStatus::Fails: return "Fails";
        case ConditionStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string_view to_string(Summability s) {
    return s == Summability::Summable ? "Summable" : "Divergent";
}

// ---- CoefficientSequence ----------------------------------------------------

CoefficientSequence::CoefficientSequence(SequenceFamily family) : family_(std::move(family)) {
    std::visit(Overloaded{[](const PowerLaw& s) {
                              if (!(s.c > 0.0) || !std::isfinite(s.p))
                                  throw InvalidArgument("power_law coefficient requires c > 0");
                          },
                          [](const Geometric& s) {
                              if (!(s.c > 0.0) || !(s.r > 0.0 && s.r < 1.0))
                                  throw InvalidArgument("geometric coefficient requires c > 0, r in (0,1)");
                          },
                          [](const Table& s) {
                              for (double v : s.values)
                                  if (!(v >= 0.0) || !std::isfinite(v))
                                      throw InvalidArgument("table coefficient values must be >= 0");
                          },
                          [](const Zero&) {}},
               family_);
}

double CoefficientSequence::value_at(std::uint64_t n) const {
    require_index(n);
    return evaluate(family_, n);
}

double CoefficientSequence::forcing_at(std::uint64_t n) const {
    if (n >= 1) return evaluate(family_, n);
    return std::visit(Overloaded{[](const PowerLaw& s) { return s.c; },
                                 [](const Geometric& s) { return s.c; },
                                 [](const Table& s) { return s.values.empty() ? 0.0 : s.values.front(); },
                                 [](const Zero&) { return 0.0; }},
                      family_);
}

// ---- SignedSequence -------------------------------------------------------

SignedSequence::SignedSequence(SequenceFamily family) : family_(std::move(family)) {
    std::visit(Overloaded{[](const PowerLaw& s) {
                              if (!std::isfinite(s.c) || !std::isfinite(s.p))
                                  throw InvalidArgument("power_law parameters must be finite");
                          },
                          [](const Geometric& s) {
                              if (!std::isfinite(s.c) || !(s.r > 0.0 && s.r < 1.0))
                                  throw InvalidArgument("geometric sequence requires r in (0,1)");
                          },
                          [](const Table& s) {
                              for (double v : s.values)
                                  if (!std::isfinite(v))
                                      throw InvalidArgument("table values must be finite");
                          },
                          [](const Zero&) {}},
               family_);
}

double SignedSequence::value_at(std::uint64_t n) const {
    require_index(n);
    return evaluate(family_, n);
}

double SignedSequence::prefix_sum(std::uint64_t n) const {
    return std::visit(Overloaded{[&](const PowerLaw& s) {
                                     if (s.p == 0.0) return s.c * static_cast<double>(n);
                                     // Kahan summation over the explicit terms.
                                     double sum = 0.0, carry = 0.0;
                                     for (std::uint64_t i = 1; i <= n; ++i) {
                                         const double y = evaluate(s, i) - carry;
                                         const double t = sum + y;
                                         carry = (t - sum) - y;
                                         sum = t;
                                     }
                                     return sum;
                                 },
                                 [&](const Geometric& s) {
                                     return s.c * s.r * (1.0 - std::pow(s.r, static_cast<double>(n))) /
                                            (1.0 - s.r);
                                 },
                                 [&](const Table& s) {
                                     double sum = 0.0;
                                     const std::size_t m = std::min<std::uint64_t>(n, s.values.size());
                                     for (std::size_t i = 0; i < m; ++i) sum += s.values[i];
                                     return sum;
                                 },
                                 [](const Zero&) { return 0.0; }},
                      family_);
}

bool SignedSequence::diverges_to_minus_infinity() const {
    if (const auto* s = std::get_if<PowerLaw>(&family_)) return s->c < 0.0 && s->p <= 1.0;
    return false;
}

// ---- classification -------------------------------------------------------

Summability alpha_summable(const CoefficientSequence& seq, double alpha) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (const auto* s = std::get_if<PowerLaw>(&seq.family()))
        return alpha * s->p > 1.0 ? Summability::Summable : Summability::Divergent;
    return Summability::Summable;
}

TailClassification classify_decay(std::span<const double> summand, std::uint64_t first_index) {
    std::vector<double> logs(summand.size());
    std::transform(summand.begin(), summand.end(), logs.begin(), [](double v) {
        return v == 0.0 ? kNegInf : std::log(std::abs(v));
    });
    TailClassification out = classify_log_decay(logs, first_index);
    out.partial_sum = 0.0;
    for (double v : summand) out.partial_sum += v;
    return out;
}

TailClassification weighted_condition8(const CoefficientSequence& seq, const NoiseModel& noise,
                                       double alpha, std::uint64_t n_tail) {
    if (!(alpha > 1.0)) throw InvalidArgument("weighted condition requires alpha > 1");
    if (n_tail < 1) throw InvalidArgument("n_tail must be >= 1");
    std::vector<double> logs(n_tail);
    const double iid_moment = noise.is_iid() ? power_moment(noise, 1, alpha) : 0.0;
    for (std::uint64_t i = 1; i <= n_tail; ++i) {
        const double m = noise.is_iid() ? iid_moment : power_moment(noise, i + 1, alpha);
        const double gap = std::abs(1.0 - m);
        if (gap == 0.0)
            throw DivisionByZero("E(1+xi)^alpha = 1 at n=" + std::to_string(i + 1));
        const double s = seq.value_at(i);
        logs[i - 1] = s == 0.0 ? kNegInf : alpha * std::log(s) - (alpha - 1.0) * std::log(gap);
    }
    return classify_log_decay(logs, 1);
}

TailClassification thm32_exp_weighted(const CoefficientSequence& seq, const KappaSequence& kappa,
                                      double alpha, std::uint64_t n_tail) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (n_tail < 2) throw InvalidArgument("n_tail must be >= 2");
    TailClassification out;
    std::vector<double> logs(n_tail);
    // running = sum_{i=1}^{n+1} kappa_i
    double running = kappa.value_at(1);
    for (std::uint64_t n = 1; n <= n_tail; ++n) {
        running += kappa.value_at(n + 1);
        const double s = seq.value_at(n);
        const double l = s == 0.0 ? kNegInf : -running + alpha * std::log(s);
        if (l > kLogOverflow) {
            out.status = ConditionStatus::Fails;
            out.overflow = true;
            out.partial_sum = std::numeric_limits<double>::infinity();
            out.decay_exponent = std::numeric_limits<double>::quiet_NaN();
            return out;
        }
        logs[n - 1] = l;
    }

    const std::uint64_t start = std::max<std::uint64_t>(1, n_tail / 10);
    bool all_contracting = true;
    bool all_growing = true;
    std::size_t ratios = 0;
    for (std::uint64_t n = start; n < n_tail; ++n) {
        const double a = logs[n - 1];
        const double b = logs[n];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        const double log_ratio = b - a;
        if (!(log_ratio < std::log1p(-kRatioMargin))) all_contracting = false;
        if (log_ratio < 0.0) all_growing = false;
        ++ratios;
    }

    out = classify_log_decay(logs, 1);
    if (ratios > 0 && all_contracting) out.status = ConditionStatus::Holds;
    else if (ratios > 0 && all_growing) out.status = ConditionStatus::Fails;
    return out;
}

}  // namespace sdelab
