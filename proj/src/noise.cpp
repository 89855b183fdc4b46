#include "sdelab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdelab/errors.hpp"
#include "sdelab/quadrature.hpp"

namespace sdelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kScanWindow = 1024;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Indices sampled when checking a schedule: a leading window plus powers of two.
std::vector<std::uint64_t> probe_indices() {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= kScanWindow; ++n) out.push_back(n);
    for (int k = 11; k <= 62; ++k) out.push_back(std::uint64_t{1} << k);
    return out;
}

std::string describe(std::uint64_t n) { return "n=" + std::to_string(n); }

// (1+x)^alpha for a single atom.
double atom_power(double x, double alpha) {
    const double base = 1.0 + x;
    if (base < 0.0) throw NonFinite("(1+xi)^alpha undefined for 1+xi < 0");
    if (base == 0.0 && alpha <= 0.0) throw NonFinite("(1+xi)^alpha infinite at 1+xi = 0");
    return std::pow(base, alpha);
}

double atom_log(double x) {
    if (x <= -1.0) throw NonFinite("ln(1+xi) diverges: support reaches -1");
    return std::log1p(x);
}

// x^(s) ln^j x integrated against the Pareto density; j in {0,1,2}.
double pareto_log_power(const ParetoLaw& law, double s, int j) {
    const double g = law.gamma;
    if (s >= g) throw NonFinite("Pareto moment diverges: order >= shape");
    const double la = std::log(law.scale);
    const double r = 1.0 / (g - s);
    const double base = g * std::pow(law.scale, s);
    switch (j) {
        case 0: return base * r;
        case 1: return base * (la * r + r * r);
        default: return base * (la * la * r + 2.0 * la * r * r + 2.0 * r * r * r);
    }
}

double binomial(int k, int j) {
    double out = 1.0;
    for (int i = 1; i <= j; ++i) out = out * (k - j + i) / i;
    return out;
}

}  // namespace

std::string_view to_string(NoiseFamily family) {
    switch (family) {
        case NoiseFamily::TwoPoint: return "two_point";
        case NoiseFamily::UniformInterval: return "uniform";
        case NoiseFamily::ParetoTail: return "pareto";
        case NoiseFamily::Degenerate: return "degenerate";
    }
    return "?";
}

NoiseFamily noise_family_from_string(std::string_view name) {
    if (name == "two_point") return NoiseFamily::TwoPoint;
    if (name == "uniform") return NoiseFamily::UniformInterval;
    if (name == "pareto") return NoiseFamily::ParetoTail;
    if (name == "degenerate") return NoiseFamily::Degenerate;
    throw InvalidArgument("unknown noise family '" + std::string(name) +
                          "' (expected two_point, uniform, pareto or degenerate)");
}

std::vector<std::string_view> NoiseModel::parameter_names(NoiseFamily family) {
    switch (family) {
        case NoiseFamily::TwoPoint: return {"lo", "hi", "p_hi"};
        case NoiseFamily::UniformInterval: return {"lo", "hi"};
        case NoiseFamily::ParetoTail: return {"gamma", "scale"};
        case NoiseFamily::Degenerate: return {"c"};
    }
    return {};
}

NoiseModel::NoiseModel(NoiseFamily family, std::vector<ScheduleExpr> params)
    : family_(family), params_(std::move(params)), iid_law_(DegenerateLaw{0.0}) {
    iid_ = std::all_of(params_.begin(), params_.end(),
                       [](const ScheduleExpr& e) { return e.is_constant(); });
    validate();
    if (iid_) iid_law_ = evaluate(1);
}

NoiseModel NoiseModel::make(NoiseFamily family, const std::vector<ScheduleExpr>& params) {
    if (params.size() != parameter_names(family).size())
        throw InvalidArgument("wrong parameter count for noise family " +
                              std::string(to_string(family)));
    return NoiseModel(family, params);
}

NoiseModel NoiseModel::two_point(ScheduleExpr lo, ScheduleExpr hi, ScheduleExpr p_hi) {
    return NoiseModel(NoiseFamily::TwoPoint, {lo, hi, p_hi});
}
NoiseModel NoiseModel::uniform(ScheduleExpr lo, ScheduleExpr hi) {
    return NoiseModel(NoiseFamily::UniformInterval, {lo, hi});
}
NoiseModel NoiseModel::pareto(ScheduleExpr gamma, ScheduleExpr scale) {
    return NoiseModel(NoiseFamily::ParetoTail, {gamma, scale});
}
NoiseModel NoiseModel::degenerate(ScheduleExpr c) {
    return NoiseModel(NoiseFamily::Degenerate, {c});
}

NoiseLaw NoiseModel::evaluate(std::uint64_t n) const {
    switch (family_) {
        case NoiseFamily::TwoPoint: return TwoPointLaw{params_[0](n), params_[1](n), params_[2](n)};
        case NoiseFamily::UniformInterval: return UniformLaw{params_[0](n), params_[1](n)};
        case NoiseFamily::ParetoTail: return ParetoLaw{params_[0](n), params_[1](n)};
        case NoiseFamily::Degenerate: return DegenerateLaw{params_[0](n)};
    }
    return DegenerateLaw{0.0};
}

NoiseLaw NoiseModel::law_at(std::uint64_t n) const {
    if (n == 0) throw InvalidArgument("noise index starts at n=1");
    return iid_ ? iid_law_ : evaluate(n);
}

void NoiseModel::validate() const {
    const auto check = [&](const NoiseLaw& law, const std::string& where) {
        std::visit(Overloaded{
                       [&](const TwoPointLaw& l) {
                           if (!(l.p_hi >= 0.0 && l.p_hi <= 1.0))
                               throw InvalidArgument("two_point p_hi outside [0,1] at " + where);
                           if (!(l.lo < l.hi))
                               throw InvalidArgument("two_point requires lo < hi at " + where);
                       },
                       [&](const UniformLaw& l) {
                           if (!(l.lo < l.hi))
                               throw InvalidArgument("uniform requires lo < hi at " + where);
                       },
                       [&](const ParetoLaw& l) {
                           if (!(l.gamma > 0.0) || !(l.scale > 0.0))
                               throw InvalidArgument("pareto requires gamma > 0 and scale > 0 at " +
                                                     where);
                       },
                       [&](const DegenerateLaw& l) {
                           if (!std::isfinite(l.c))
                               throw InvalidArgument("degenerate value must be finite");
                       }},
                   law);
    };
    if (iid_) {
        check(evaluate(1), describe(1));
        return;
    }
    for (std::uint64_t n : probe_indices()) check(evaluate(n), describe(n));
}

// ---- law-level ------------------------------------------------------------

double sample_from_uniform(const NoiseLaw& law, double u) {
    return std::visit(Overloaded{
                          [&](const TwoPointLaw& l) { return u < l.p_hi ? l.hi : l.lo; },
                          [&](const UniformLaw& l) { return l.lo + (l.hi - l.lo) * u; },
                          [&](const ParetoLaw& l) {
                              return l.scale * std::pow(u, -1.0 / l.gamma) - 1.0;
                          },
                          [&](const DegenerateLaw& l) { return l.c; }},
                      law);
}

double power_moment(const NoiseLaw& law, double alpha) {
    return std::visit(
        Overloaded{
            [&](const TwoPointLaw& l) {
                double out = 0.0;
                if (l.p_hi < 1.0) out += (1.0 - l.p_hi) * atom_power(l.lo, alpha);
                if (l.p_hi > 0.0) out += l.p_hi * atom_power(l.hi, alpha);
                return out;
            },
            [&](const UniformLaw& l) {
                const double a = 1.0 + l.lo;
                const double b = 1.0 + l.hi;
                if (a < 0.0 || (a == 0.0 && alpha <= -1.0))
                    throw NonFinite("uniform power moment diverges");
                if (alpha == -1.0) return (std::log(b) - std::log(a)) / (l.hi - l.lo);
                return (std::pow(b, alpha + 1.0) - std::pow(a, alpha + 1.0)) /
                       ((alpha + 1.0) * (l.hi - l.lo));
            },
            [&](const ParetoLaw& l) { return pareto_log_power(l, alpha, 0); },
            [&](const DegenerateLaw& l) { return atom_power(l.c, alpha); }},
        law);
}

bool power_moment_finite(const NoiseLaw& law, double alpha) {
    try {
        return std::isfinite(power_moment(law, alpha));
    } catch (const NonFinite&) {
        return false;
    }
}

double log_moment(const NoiseLaw& law) {
    return std::visit(
        Overloaded{[&](const TwoPointLaw& l) {
                       double out = 0.0;
                       if (l.p_hi < 1.0) out += (1.0 - l.p_hi) * atom_log(l.lo);
                       if (l.p_hi > 0.0) out += l.p_hi * atom_log(l.hi);
                       return out;
                   },
                   [&](const UniformLaw& l) {
                       if (l.lo < -1.0) throw NonFinite("ln(1+xi) undefined below -1");
                       const auto antiderivative = [](double u) {
                           return u == 0.0 ? 0.0 : u * std::log(u) - u;
                       };
                       return (antiderivative(1.0 + l.hi) - antiderivative(1.0 + l.lo)) /
                              (l.hi - l.lo);
                   },
                   [&](const ParetoLaw& l) { return std::log(l.scale) + 1.0 / l.gamma; },
                   [&](const DegenerateLaw& l) { return atom_log(l.c); }},
        law);
}

double raw_moment(const NoiseLaw& law, int k) {
    if (k < 1 || k > 3) throw InvalidArgument("raw moment order must be 1, 2 or 3");
    return std::visit(
        Overloaded{[&](const TwoPointLaw& l) {
                       double out = 0.0;
                       if (l.p_hi < 1.0) out += (1.0 - l.p_hi) * std::pow(l.lo, k);
                       if (l.p_hi > 0.0) out += l.p_hi * std::pow(l.hi, k);
                       return out;
                   },
                   [&](const UniformLaw& l) {
                       return (std::pow(l.hi, k + 1) - std::pow(l.lo, k + 1)) /
                              ((k + 1) * (l.hi - l.lo));
                   },
                   [&](const ParetoLaw& l) {
                       if (k >= l.gamma) throw NonFinite("Pareto raw moment diverges: k >= gamma");
                       // E(X-1)^k expanded over E X^j.
                       double out = 0.0;
                       for (int j = 0; j <= k; ++j) {
                           const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
                           out += sign * binomial(k, j) * pareto_log_power(l, j, 0);
                       }
                       return out;
                   },
                   [&](const DegenerateLaw& l) { return std::pow(l.c, k); }},
        law);
}

bool abs_moment_finite(const NoiseLaw& law, int k) {
    if (const auto* p = std::get_if<ParetoLaw>(&law)) return k < p->gamma;
    return true;
}

double lemma45_numerator(const NoiseLaw& law) {
    const auto term = [](double x) {
        const double l = atom_log(x);
        return (2.0 + x) * l * l;
    };
    return std::visit(
        Overloaded{[&](const TwoPointLaw& l) {
                       double out = 0.0;
                       if (l.p_hi < 1.0) out += (1.0 - l.p_hi) * term(l.lo);
                       if (l.p_hi > 0.0) out += l.p_hi * term(l.hi);
                       return out;
                   },
                   [&](const UniformLaw& l) {
                       if (l.lo <= -1.0) throw NonFinite("ln(1+xi) diverges: support reaches -1");
                       const QuadratureResult q = integrate_gk15(term, l.lo, l.hi);
                       if (!q.converged) throw NonFinite("quadrature did not converge");
                       return q.value / (l.hi - l.lo);
                   },
                   [&](const ParetoLaw& l) {
                       // (1 + X) ln^2 X with X = 1 + xi.
                       return pareto_log_power(l, 0.0, 2) + pareto_log_power(l, 1.0, 2);
                   },
                   [&](const DegenerateLaw& l) { return term(l.c); }},
        law);
}

double inverse_moment(const NoiseLaw& law, double gain) {
    const auto atom = [&](double x) {
        const double m = 1.0 + gain * x;
        if (m <= 0.0) throw NonFinite("1 + f xi not positive");
        return 1.0 / m;
    };
    return std::visit(
        Overloaded{[&](const TwoPointLaw& l) {
                       double out = 0.0;
                       if (l.p_hi < 1.0) out += (1.0 - l.p_hi) * atom(l.lo);
                       if (l.p_hi > 0.0) out += l.p_hi * atom(l.hi);
                       return out;
                   },
                   [&](const UniformLaw& l) {
                       if (gain == 0.0) return 1.0;
                       if (1.0 + gain * l.lo <= 0.0) throw NonFinite("1 + f xi not positive");
                       return (std::log1p(gain * l.hi) - std::log1p(gain * l.lo)) /
                              (gain * (l.hi - l.lo));
                   },
                   [&](const ParetoLaw&) -> double {
                       throw Unsupported("martingale tracker requires noise bounded away from -1 "
                                         "and bounded above; Pareto noise is unbounded");
                   },
                   [&](const DegenerateLaw& l) { return atom(l.c); }},
        law);
}

double support_infimum(const NoiseLaw& law) {
    return std::visit(Overloaded{[](const TwoPointLaw& l) {
                                     if (l.p_hi >= 1.0) return l.hi;
                                     if (l.p_hi <= 0.0) return l.lo;
                                     return std::min(l.lo, l.hi);
                                 },
                                 [](const UniformLaw& l) { return l.lo; },
                                 [](const ParetoLaw& l) { return l.scale - 1.0; },
                                 [](const DegenerateLaw& l) { return l.c; }},
                      law);
}

bool has_positive_mass(const NoiseLaw& law) {
    return std::visit(Overloaded{[](const TwoPointLaw& l) {
                                     return (l.p_hi > 0.0 && l.hi > 0.0) ||
                                            (l.p_hi < 1.0 && l.lo > 0.0);
                                 },
                                 [](const UniformLaw& l) { return l.hi > 0.0; },
                                 [](const ParetoLaw&) { return true; },
                                 [](const DegenerateLaw& l) { return l.c > 0.0; }},
                      law);
}

// ---- model-level ------------------------------------------------------------

double sample(const NoiseModel& model, std::uint64_t n, RngStream& rng) {
    return sample_from_uniform(model.law_at(n), rng.uniform01());
}

double power_moment(const NoiseModel& model, std::uint64_t n, double alpha) {
    if (!(alpha > 0.0)) throw InvalidArgument("power moment requires alpha > 0");
    return power_moment(model.law_at(n), alpha);
}

double log_moment(const NoiseModel& model, std::uint64_t n) { return log_moment(model.law_at(n)); }

double raw_moment(const NoiseModel& model, std::uint64_t n, int k) {
    return raw_moment(model.law_at(n), k);
}

double lemma45_ratio(const NoiseModel& model, std::uint64_t n) {
    const NoiseLaw law = model.law_at(n);
    const double denominator = std::abs(log_moment(law));
    if (denominator == 0.0) throw DivisionByZero("E ln(1+xi) = 0 at " + describe(n));
    return lemma45_numerator(law) / denominator;
}

double ito_multiplier_minimum(double drift, double step, double z) {
    // h(s) = 1 + drift s^2 + z s over s = sqrt(step f) in [0, sqrt(step)].
    if (z >= 0.0) return 1.0;
    const double s_max = std::sqrt(step);
    double s = s_max;
    if (drift > 0.0) s = std::min(s_max, -z / (2.0 * drift));
    return 1.0 + drift * s * s + z * s;
}

PositivityReport validate_positivity(const NoiseModel& model, const PositivityContext& context) {
    const auto margin = [&](double z) {
        return std::visit(Overloaded{[&](const ItoContext& c) {
                                         return ito_multiplier_minimum(c.drift, c.step, z);
                                     },
                                     [&](const auto&) { return 1.0 + z; }},
                          context);
    };

    PositivityReport report;
    report.bound = kInf;
    const std::uint64_t window = model.is_iid() ? 1 : kScanWindow;
    for (std::uint64_t n = 1; n <= window; ++n) {
        const double m = margin(support_infimum(model.law_at(n)));
        report.bound = std::min(report.bound, m);
        if (!(m > 0.0)) {
            report.ok = false;
            report.offending_n = n;
            report.detail = "multiplier lower bound " + format_double(m) + " <= 0 at " + describe(n);
            return report;
        }
    }
    if (model.is_iid() || model.family() == NoiseFamily::ParetoTail) return report;

    // Beyond the window the support's lower edge is a monotone schedule; its
    // limit decides the remaining indices.
    const ScheduleExpr& lower = model.parameters()[0];
    const double tail = margin(lower.limit());
    report.bound = std::min(report.bound, tail);
    if (tail >= 0.0) return report;

    std::uint64_t hi = kScanWindow;
    while (margin(lower(hi)) > 0.0 && hi < (std::uint64_t{1} << 62)) hi *= 2;
    std::uint64_t lo = hi / 2;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (margin(lower(mid)) > 0.0) lo = mid;
        else hi = mid;
    }
    report.ok = false;
    report.offending_n = hi;
    report.detail = "support lower edge crosses the positivity bound at " + describe(hi);
    return report;
}

}  // namespace sdelab
