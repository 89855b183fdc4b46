#include "sdelab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sdelab/errors.hpp"

namespace sdelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBracketCap = 128.0;
constexpr std::uint64_t kProvisoStart = 10;

ConditionStatus from_bool(bool b) { return b ? ConditionStatus::Holds : ConditionStatus::Fails; }

ConditionStatus flip(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::Holds: return ConditionStatus::Fails;
        case ConditionStatus::Fails: return ConditionStatus::Holds;
        default: return s;
    }
}

double positive_part(double u) { return u > 0.0 ? u : 0.0; }
double negative_part(double u) { return u < 0.0 ? u : 0.0; }

enum class Want { Finite, Infinite };

// Classifies sum_n term(n) over n = first..first+count-1. For iid inputs the
// term is constant and the answer is exact.
ConditionResult series_condition(std::string id, bool iid, Want want,
                                 const std::function<double(std::uint64_t)>& term,
                                 std::uint64_t first, std::uint64_t count) {
    ConditionResult out;
    out.id = std::move(id);
    if (iid) {
        const double t = term(first);
        out.quantity = t;
        const bool finite = t == 0.0;
        out.status = from_bool(want == Want::Finite ? finite : !finite);
        out.note = "iid: constant summand";
        return out;
    }
    std::vector<double> values(count);
    for (std::uint64_t i = 0; i < count; ++i) values[i] = term(first + i);
    const TailClassification tail = classify_decay(values, first);
    out.quantity = tail.partial_sum;
    out.status = want == Want::Finite ? tail.status : flip(tail.status);
    out.note = "tail decay exponent " + format_double(tail.decay_exponent);
    return out;
}

ConditionResult alpha_summable_condition(const CoefficientSequence& S, double alpha) {
    ConditionResult out;
    out.id = "alpha_summable";
    out.quantity = alpha;
    out.status = from_bool(alpha_summable(S, alpha) == Summability::Summable);
    return out;
}

bool all_hold(const TheoremVerdict& v, std::initializer_list<std::string_view> ids) {
    return std::all_of(ids.begin(), ids.end(), [&](std::string_view id) { return v.holds(id); });
}

void require_iid(const NoiseModel& noise, const char* what) {
    if (!noise.is_iid()) throw NotIID(std::string(what) + " requires iid noise");
}

}  // namespace

std::string_view to_string(TheoremId id) {
    switch (id) {
        case TheoremId::T3_1: return "T3_1";
        case TheoremId::T3_2: return "T3_2";
        case TheoremId::T4_2: return "T4_2";
        case TheoremId::T4_3: return "T4_3";
        case TheoremId::T5_1: return "T5_1";
        case TheoremId::T5_2: return "T5_2";
        case TheoremId::T5_4: return "T5_4";
        case TheoremId::L6_1: return "L6_1";
    }
    return "?";
}

TheoremId theorem_id_from_string(std::string_view name) {
    for (TheoremId id : {TheoremId::T3_1, TheoremId::T3_2, TheoremId::T4_2, TheoremId::T4_3,
                         TheoremId::T5_1, TheoremId::T5_2, TheoremId::T5_4, TheoremId::L6_1})
        if (to_string(id) == name) return id;
    throw InvalidArgument("unknown theorem id '" + std::string(name) + "'");
}

std::string_view to_string(Conclusion c) {
    switch (c) {
        case Conclusion::LimitExists: return "LimitExists";
        case Conclusion::ConvergesToZero: return "ConvergesToZero";
        case Conclusion::LiminfZero: return "LiminfZero";
        case Conclusion::DivergesAS: return "DivergesAS";
        case Conclusion::NotApplicable: return "NotApplicable";
    }
    return "?";
}

const ConditionResult* TheoremVerdict::find(std::string_view id) const {
    for (const auto& c : conditions)
        if (c.id == id) return &c;
    return nullptr;
}

bool TheoremVerdict::holds(std::string_view id) const {
    const ConditionResult* c = find(id);
    return c != nullptr && c->status == ConditionStatus::Holds;
}

// ---- critical exponent ------------------------------------------------------

CriticalExponent critical_alpha(const NoiseModel& noise) {
    require_iid(noise, "critical exponent");
    const NoiseLaw law = noise.law_at(1);
    if (!has_positive_mass(law)) throw NoRoot("P(xi > 0) = 0: E(1+xi)^alpha < 1 for all alpha > 0");
    double eln = -kInf;
    try {
        eln = log_moment(law);
    } catch (const NonFinite&) {
        // Mass at xi = -1 drives E ln to -infinity.
    }
    if (eln >= 0.0) throw NoRoot("E ln(1+xi) = " + format_double(eln) + " >= 0");

    const auto excess = [&](double alpha) {
        return power_moment_finite(law, alpha) ? power_moment(law, alpha) - 1.0 : kInf;
    };

    CriticalExponent out;
    double lo = 0.0;
    double hi = 1.0;
    double g_hi = excess(hi);
    while (g_hi < 0.0) {
        if (hi >= kBracketCap) {
            out.bracket_lo = lo;
            out.bracket_hi = hi;
            out.residual = std::abs(g_hi);
            return out;
        }
        lo = hi;
        hi = std::min(2.0 * hi, kBracketCap);
        g_hi = excess(hi);
    }

    double root = hi;
    if (g_hi != 0.0) {
        // Invariant: excess < 0 on (0, lo], excess(hi) > 0 (possibly infinite).
        for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double g = excess(mid);
            if (g == 0.0) {
                lo = hi = mid;
                break;
            }
            if (g < 0.0) lo = mid;
            else hi = mid;
        }
        const double g_lo = lo > 0.0 ? std::abs(excess(lo)) : kInf;
        const double g_up = std::abs(excess(hi));
        root = g_lo <= g_up ? lo : hi;
    }
    out.alpha_star = root;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.residual = std::abs(excess(root));
    return out;
}

// ---- linear recursion -------------------------------------------------------

TheoremVerdict check_theorem_3_1(const NoiseModel& noise, const CoefficientSequence& S, double alpha,
                                 std::uint64_t n_tail) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    TheoremVerdict v;
    v.theorem = TheoremId::T3_1;
    const auto excess = [&](std::uint64_t n) { return power_moment(noise, n, alpha) - 1.0; };

    // Summands are indexed by i and use xi_{i+1}.
    v.conditions.push_back(series_condition(
        "positive_part_summable", noise.is_iid(), Want::Finite,
        [&](std::uint64_t i) { return positive_part(excess(i + 1)); }, 1, n_tail));

    if (alpha <= 1.0) {
        v.conditions.push_back(alpha_summable_condition(S, alpha));
    } else {
        ConditionResult c;
        c.id = "weighted_alpha_sum";
        try {
            const TailClassification t = weighted_condition8(S, noise, alpha, n_tail);
            c.status = t.status;
            c.quantity = t.partial_sum;
            c.note = "tail decay exponent " + format_double(t.decay_exponent);
        } catch (const DivisionByZero& e) {
            c.status = ConditionStatus::Fails;
            c.quantity = kInf;
            c.note = e.what();
        }
        v.conditions.push_back(c);
    }

    v.conditions.push_back(series_condition(
        "negative_part_divergent", noise.is_iid(), Want::Infinite,
        [&](std::uint64_t i) { return negative_part(excess(i + 1)); }, 1, n_tail));

    const char* coefficient = alpha <= 1.0 ? "alpha_summable" : "weighted_alpha_sum";
    if (all_hold(v, {"positive_part_summable", coefficient})) {
        v.conclusion = v.holds("negative_part_divergent") ? Conclusion::ConvergesToZero
                                                          : Conclusion::LimitExists;
    }
    return v;
}

TheoremVerdict check_theorem_3_2(const NoiseModel& noise, const CoefficientSequence& S,
                                 const KappaSequence& kappa, double alpha, double gamma_decay,
                                 std::uint64_t n_tail) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("decay theorem requires alpha in (0,1]");
    if (!(gamma_decay > 0.0 && gamma_decay < 1.0))
        throw InvalidArgument("gamma_decay must lie in (0,1)");
    TheoremVerdict v;
    v.theorem = TheoremId::T3_2;
    v.claim = "exp(-gamma_decay * sum_{i<=n} kappa_i) X_n^alpha -> 0";

    // kappa_i >= [E(1+xi_{i+1})^alpha - 1]^- over the tested range.
    ConditionResult dominate;
    dominate.id = "kappa_dominates";
    double slack = kInf;
    for (std::uint64_t i = 1; i <= n_tail; ++i) {
        const double need = negative_part(power_moment(noise, i + 1, alpha) - 1.0);
        slack = std::min(slack, kappa.value_at(i) - need);
    }
    dominate.quantity = slack;
    dominate.status = from_bool(slack >= -1e-12);
    dominate.note = "min over tested i of kappa_i - [E(1+xi)^alpha - 1]^-";
    v.conditions.push_back(dominate);

    ConditionResult diverge;
    diverge.id = "kappa_sum_divergent";
    diverge.status = from_bool(kappa.diverges_to_minus_infinity());
    diverge.quantity = kappa.prefix_sum(std::min<std::uint64_t>(n_tail, 1000000));
    v.conditions.push_back(diverge);

    ConditionResult weighted;
    weighted.id = "exp_weighted_sum";
    const TailClassification t = thm32_exp_weighted(S, kappa, alpha, n_tail);
    weighted.status = t.status;
    weighted.quantity = t.partial_sum;
    weighted.note = t.overflow ? "log summand exceeded 700" : "";
    v.conditions.push_back(weighted);

    if (all_hold(v, {"kappa_dominates", "kappa_sum_divergent", "exp_weighted_sum"}))
        v.conclusion = Conclusion::ConvergesToZero;
    return v;
}

TheoremVerdict check_theorem_4_2(const NoiseModel& noise, const CoefficientSequence& S) {
    require_iid(noise, "homogeneous criterion");
    TheoremVerdict v;
    v.theorem = TheoremId::T4_2;
    ConditionResult homogeneous;
    homogeneous.id = "homogeneous";
    homogeneous.status = from_bool(std::holds_alternative<Zero>(S.family()));
    v.conditions.push_back(homogeneous);

    ConditionResult negative;
    negative.id = "log_moment_negative";
    try {
        negative.quantity = log_moment(noise, 1);
    } catch (const NonFinite&) {
        negative.quantity = -kInf;
    }
    negative.status = from_bool(negative.quantity < 0.0);
    v.conditions.push_back(negative);

    if (all_hold(v, {"homogeneous", "log_moment_negative"})) v.conclusion = Conclusion::ConvergesToZero;
    return v;
}

TheoremVerdict check_theorem_4_3(const NoiseModel& noise, const CoefficientSequence& S) {
    require_iid(noise, "lower-limit theorem");
    TheoremVerdict v;
    v.theorem = TheoremId::T4_3;
    ConditionResult negative;
    negative.id = "log_moment_negative";
    try {
        negative.quantity = log_moment(noise, 1);
    } catch (const NonFinite&) {
        negative.quantity = -kInf;
    }
    negative.status = from_bool(negative.quantity < 0.0);
    v.conditions.push_back(negative);

    // Some alpha > 0 makes S alpha-summable unless S is a non-decaying power law.
    ConditionResult some_alpha;
    some_alpha.id = "some_alpha_summable";
    bool exists = true;
    if (const auto* p = std::get_if<PowerLaw>(&S.family())) {
        exists = p->p > 0.0;
        some_alpha.quantity = exists ? 1.0 / p->p : kInf;
        some_alpha.note = "alpha must exceed quantity";
    }
    some_alpha.status = from_bool(exists);
    v.conditions.push_back(some_alpha);

    if (all_hold(v, {"log_moment_negative", "some_alpha_summable"})) v.conclusion = Conclusion::LiminfZero;
    return v;
}

// ---- nonlinear recursion ----------------------------------------------------

TheoremVerdict check_theorem_5_1(const NoiseModel& noise, const CoefficientSequence& S,
                                 std::uint64_t n_tail) {
    TheoremVerdict v;
    v.theorem = TheoremId::T5_1;
    const auto mean = [&](std::uint64_t n) { return raw_moment(noise, n, 1); };
    v.conditions.push_back(series_condition("mean_positive_part_summable", noise.is_iid(), Want::Finite,
                                            [&](std::uint64_t n) { return positive_part(mean(n)); }, 1,
                                            n_tail));
    ConditionResult summable = alpha_summable_condition(S, 1.0);
    summable.id = "coefficient_summable";
    v.conditions.push_back(summable);
    v.conditions.push_back(series_condition("mean_negative_part_divergent", noise.is_iid(),
                                            Want::Infinite,
                                            [&](std::uint64_t n) { return negative_part(mean(n)); }, 1,
                                            n_tail));
    if (all_hold(v, {"mean_positive_part_summable", "coefficient_summable"})) {
        v.conclusion = v.holds("mean_negative_part_divergent") ? Conclusion::ConvergesToZero
                                                               : Conclusion::LimitExists;
    }
    return v;
}

TheoremVerdict check_theorem_5_2(const NoiseModel& noise, const CoefficientSequence& S, double alpha,
                                 std::uint64_t n_tail) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("theorem requires alpha in (0,1)");
    TheoremVerdict v;
    v.theorem = TheoremId::T5_2;
    v.conditions.push_back(alpha_summable_condition(S, alpha));
    v.conditions.push_back(series_condition(
        "mean_positive_part_summable", noise.is_iid(), Want::Finite,
        [&](std::uint64_t n) { return positive_part(raw_moment(noise, n, 1)); }, 1, n_tail));

    // 3 E xi^2 - (2 - alpha) [E xi^3]^+ > 0 on [10, n_tail].
    const auto dominance = [&](std::uint64_t n) {
        return 3.0 * raw_moment(noise, n, 2) - (2.0 - alpha) * positive_part(raw_moment(noise, n, 3));
    };
    ConditionResult proviso;
    proviso.id = "second_moment_dominance";
    proviso.quantity = kInf;
    const std::uint64_t last = noise.is_iid() ? kProvisoStart : std::max(n_tail, kProvisoStart);
    for (std::uint64_t n = kProvisoStart; n <= last; ++n) proviso.quantity = std::min(proviso.quantity, dominance(n));
    proviso.status = from_bool(proviso.quantity > 0.0);
    proviso.note = "minimum over n in [10, n_tail]";
    v.conditions.push_back(proviso);

    ConditionResult divergence = series_condition(
        "second_moment_sum_divergent", noise.is_iid(), Want::Infinite,
        [&](std::uint64_t n) { return dominance(n) / 3.0; }, 1, n_tail);
    if (proviso.status != ConditionStatus::Holds && divergence.status == ConditionStatus::Holds &&
        !noise.is_iid()) {
        divergence.status = ConditionStatus::Inconclusive;
        divergence.note += "; summand changes sign";
    }
    if (noise.is_iid() && divergence.quantity < 0.0) divergence.status = ConditionStatus::Fails;
    v.conditions.push_back(divergence);

    if (all_hold(v, {"alpha_summable", "mean_positive_part_summable"})) {
        v.conclusion = all_hold(v, {"second_moment_dominance", "second_moment_sum_divergent"})
                           ? Conclusion::ConvergesToZero
                           : Conclusion::LimitExists;
    }
    return v;
}

double ito_alpha0(const NoiseModel& zeta, double drift) {
    require_iid(zeta, "Ito analogue");
    const double variance = raw_moment(zeta, 1, 2);
    if (variance == 0.0) throw DivisionByZero("E zeta^2 = 0");
    return (variance - 2.0 * drift) / variance;
}

TheoremVerdict check_theorem_5_4(const NoiseModel& zeta, double drift, double step,
                                 const CoefficientSequence& S, double alpha) {
    require_iid(zeta, "Ito analogue");
    if (!(drift >= 0.0)) throw InvalidArgument("drift a must be >= 0");
    if (!(step > 0.0)) throw InvalidArgument("step k must be > 0");
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    TheoremVerdict v;
    v.theorem = TheoremId::T5_4;
    v.small_k_required = true;
    const NoiseLaw law = zeta.law_at(1);

    ConditionResult moments;
    moments.id = "zeta_moments_finite";
    moments.status = from_bool(abs_moment_finite(law, 3));
    v.conditions.push_back(moments);
    if (moments.status != ConditionStatus::Holds) return v;

    ConditionResult centred;
    centred.id = "zeta_mean_zero";
    centred.quantity = raw_moment(law, 1);
    centred.status = from_bool(std::abs(centred.quantity) <= 1e-12);
    v.conditions.push_back(centred);

    const double variance = raw_moment(law, 2);
    ConditionResult drift_bound;
    drift_bound.id = "drift_below_half_variance";
    drift_bound.quantity = variance / 2.0 - drift;
    drift_bound.status = from_bool(drift < variance / 2.0);
    v.conditions.push_back(drift_bound);

    ConditionResult exponent;
    exponent.id = "alpha_below_alpha0";
    exponent.quantity = variance > 0.0 ? (variance - 2.0 * drift) / variance : -kInf;
    exponent.status = from_bool(alpha < exponent.quantity);
    exponent.note = "quantity is alpha0";
    v.conditions.push_back(exponent);

    v.conditions.push_back(alpha_summable_condition(S, alpha));

    const PositivityReport pos = validate_positivity(zeta, ItoContext{drift, step});
    ConditionResult positivity;
    positivity.id = "positivity";
    positivity.status = from_bool(pos.ok);
    positivity.quantity = pos.bound;
    positivity.note = pos.detail;
    v.conditions.push_back(positivity);

    if (all_hold(v, {"zeta_mean_zero", "drift_below_half_variance", "alpha_below_alpha0",
                     "alpha_summable", "positivity"}))
        v.conclusion = Conclusion::ConvergesToZero;
    return v;
}

// ---- deterministic recursion -------------------------------------------------

namespace {

// Whether S_n / a_n -> 0, decided on the symbolic families.
bool forcing_ratio_vanishes(const SignedSequence& a, const CoefficientSequence& S) {
    if (std::holds_alternative<Zero>(S.family()) || std::holds_alternative<Table>(S.family()))
        return true;
    if (const auto* pa = std::get_if<PowerLaw>(&a.family())) {
        if (pa->c == 0.0) return false;
        if (const auto* ps = std::get_if<PowerLaw>(&S.family())) return ps->p > pa->p;
        return std::holds_alternative<Geometric>(S.family());
    }
    if (const auto* ga = std::get_if<Geometric>(&a.family())) {
        if (const auto* gs = std::get_if<Geometric>(&S.family())) return gs->r < ga->r;
        return false;
    }
    return false;
}

}  // namespace

TheoremVerdict check_lemma_6_1(const FeedbackFunction& f, const SignedSequence& a,
                               const CoefficientSequence& S, std::uint64_t n_tail) {
    TheoremVerdict v;
    v.theorem = TheoremId::L6_1;

    // a_1 enters only the first step, where a_1 >= -1 keeps the iterate
    // non-negative; the open bound is required from n = 2 on.
    ConditionResult bounds;
    bounds.id = "a_in_open_unit_interval";
    bool ok = a.value_at(1) >= -1.0;
    double worst = a.value_at(1);
    for (std::uint64_t n = 2; n <= std::max<std::uint64_t>(n_tail, 2) && ok; ++n) {
        const double an = a.value_at(n);
        worst = std::max(worst, an);
        ok = an < 0.0 && an > -1.0;
    }
    bounds.status = from_bool(ok);
    bounds.quantity = worst;
    bounds.note = "largest a_n over the tested range";
    v.conditions.push_back(bounds);

    ConditionResult divergence;
    divergence.id = "a_sum_divergent";
    divergence.status = from_bool(a.diverges_to_minus_infinity());
    divergence.quantity = a.prefix_sum(std::min<std::uint64_t>(n_tail, 1000000));
    v.conditions.push_back(divergence);

    ConditionResult ratio;
    ratio.id = "forcing_ratio_vanishes";
    ratio.status = from_bool(forcing_ratio_vanishes(a, S));
    const double a_last = a.value_at(n_tail);
    ratio.quantity = a_last != 0.0 ? S.value_at(n_tail) / a_last : kInf;
    ratio.note = "quantity is S_n / a_n at n = n_tail";
    v.conditions.push_back(ratio);

    // f(0) = 0, values in [0,1], and inf_{u>c} u f(u) > 0 probed for c in 1e-3..10.
    ConditionResult admissible;
    admissible.id = "feedback_admissible";
    bool fine = f(0.0) == 0.0;
    double min_inf = kInf;
    for (double c : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        double inf_c = kInf;
        for (int j = 1; j <= 200; ++j) {
            const double u = c * std::pow(10.0, j / 20.0);
            const double fu = f(u);
            if (fu < 0.0 || fu > 1.0) fine = false;
            inf_c = std::min(inf_c, u * fu);
        }
        min_inf = std::min(min_inf, inf_c);
    }
    fine = fine && min_inf > 0.0;
    admissible.status = from_bool(fine);
    admissible.quantity = min_inf;
    admissible.note = "min over probed c of inf_{u>c} u f(u)";
    v.conditions.push_back(admissible);

    if (all_hold(v, {"a_in_open_unit_interval", "a_sum_divergent", "forcing_ratio_vanishes",
                     "feedback_admissible"}))
        v.conclusion = Conclusion::ConvergesToZero;
    return v;
}

// ---- inequalities -------------------------------------------------------------

Lemma45Bound lemma45_alpha_bound(const NoiseModel& noise, double K, std::uint64_t n_check) {
    if (!(K > 0.0)) throw InvalidArgument("K must be positive");
    Lemma45Bound out;
    const std::uint64_t last = noise.is_iid() ? 1 : n_check;
    for (std::uint64_t n = 1; n <= last; ++n) out.max_ratio = std::max(out.max_ratio, lemma45_ratio(noise, n));
    if (out.max_ratio > K)
        throw PreconditionFailed("ratio " + format_double(out.max_ratio) + " exceeds K = " +
                                 format_double(K));
    out.alpha_bound = std::min(1.0 / K, 1.0);
    return out;
}

Lemma45Sandwich lemma45_sandwich(const NoiseModel& noise, std::uint64_t n, double alpha) {
    const double eln = log_moment(noise, n);
    Lemma45Sandwich out;
    out.lower = alpha * eln;
    out.value = power_moment(noise, n, alpha) - 1.0;
    out.upper = alpha * (eln + std::abs(eln) / 2.0);
    return out;
}

double power_split_bound(double alpha, double epsilon) {
    if (!(alpha >= 1.0)) throw InvalidArgument("power split requires alpha >= 1");
    if (!(epsilon > 0.0)) throw InvalidArgument("power split requires epsilon > 0");
    if (alpha == 1.0) return 1.0;
    const double gap = -std::expm1(-std::log1p(epsilon) / (alpha - 1.0));
    return std::pow(gap, 1.0 - alpha);
}

}  // namespace sdelab
