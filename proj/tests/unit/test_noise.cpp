#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "sdelab/errors.hpp"
#include "sdelab/noise.hpp"

using namespace sdelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

NoiseModel scheduled_two_point() {
    return NoiseModel::two_point(ScheduleExpr::parse("-1*n^(-1/3)"), ScheduleExpr::parse("sqrt(n)"),
                                 ScheduleExpr::parse("n^-2"));
}

NoiseModel scheduled_uniform() {
    return NoiseModel::uniform(ScheduleExpr::parse("1*n^-2 - 1"), ScheduleExpr::constant(1.0));
}

/// Sample mean and standard error of g(xi) over `draws` seeded draws.
template <class G>
std::pair<double, double> monte_carlo(const NoiseModel& m, G g, int draws, std::uint64_t seed) {
    RngStream rng(seed, 0);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double v = g(sample(m, 1, rng));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / draws;
    const double var = (sum2 / draws - mean * mean) * draws / (draws - 1.0);
    return {mean, std::sqrt(var / draws)};
}

}  // namespace

TEST_CASE("sampling conventions", "[noise]") {
    RngStream rng(1);
    CHECK(sample(NoiseModel::degenerate(0.0), 5, rng) == 0.0);

    const NoiseLaw pareto = ParetoLaw{2.0, 0.5};
    CHECK_THAT(sample_from_uniform(pareto, 0.25), WithinAbs(0.0, 1e-15));

    const NoiseLaw at2 = scheduled_two_point().law_at(2);
    CHECK_THAT(sample_from_uniform(at2, 0.9), WithinAbs(-std::pow(2.0, -1.0 / 3.0), 1e-15));
    CHECK_THAT(sample_from_uniform(at2, 0.1), WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK_THAT(sample_from_uniform(at2, 0.25), WithinAbs(-std::pow(2.0, -1.0 / 3.0), 1e-15));

    CHECK_THAT(sample_from_uniform(UniformLaw{-0.5, 0.6}, 0.5), WithinAbs(0.05, 1e-15));
}

TEST_CASE("index zero is rejected", "[noise]") {
    CHECK_THROWS_AS(scheduled_two_point().law_at(0), InvalidArgument);
    CHECK_THROWS_AS(NoiseModel::degenerate(0.0).law_at(0), InvalidArgument);
}

TEST_CASE("structural invariants are enforced at construction", "[noise]") {
    CHECK_THROWS_AS(NoiseModel::two_point(-0.5, 1.0, 1.5), InvalidArgument);
    CHECK_THROWS_AS(NoiseModel::two_point(1.0, -0.5, 0.5), InvalidArgument);
    CHECK_THROWS_AS(NoiseModel::uniform(0.6, -0.5), InvalidArgument);
    CHECK_THROWS_AS(NoiseModel::pareto(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(NoiseModel::pareto(2.0, -1.0), InvalidArgument);
    CHECK(NoiseModel::uniform(-0.5, 0.6).is_iid());
    CHECK_FALSE(scheduled_two_point().is_iid());
}

TEST_CASE("power moment examples", "[noise]") {
    CHECK(power_moment(NoiseModel::degenerate(0.0), 1, 7.3) == 1.0);
    CHECK_THAT(power_moment(NoiseModel::pareto(2.0, 0.5), 1, 1.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(power_moment(NoiseModel::two_point(-0.5, 1.0, 0.25), 1, 2.0), WithinAbs(1.1875, 1e-15));
    CHECK_THROWS_AS(power_moment(NoiseModel::pareto(2.0, 0.5), 1, 2.0), NonFinite);
    CHECK_THROWS_AS(power_moment(NoiseModel::pareto(2.0, 0.5), 1, 3.0), NonFinite);
    CHECK_FALSE(power_moment_finite(ParetoLaw{2.0, 0.5}, 2.0));
    // closed form for uniform moments: ((1+b)^(a+1) - (1+a)^(a+1)) / ((a+1)(b-a))
    const double a = 0.7;
    const double expected = (std::pow(1.6, a + 1) - std::pow(0.5, a + 1)) / ((a + 1) * 1.1);
    CHECK_THAT(power_moment(NoiseModel::uniform(-0.5, 0.6), 1, a), WithinAbs(expected, 1e-13));
}

TEST_CASE("log moment examples", "[noise]") {
    CHECK(log_moment(NoiseModel::degenerate(0.0), 1) == 0.0);
    CHECK_THAT(log_moment(NoiseModel::two_point(-0.5, 0.5, 0.5), 1), WithinAbs(0.5 * std::log(0.75), 1e-15));
    CHECK_THAT(log_moment(NoiseModel::two_point(-0.5, 1.0, 0.25), 1), WithinAbs(-0.5 * std::log(2.0), 1e-15));
    // Pareto: E ln(1+xi) = ln scale + 1/gamma
    CHECK_THAT(log_moment(NoiseModel::pareto(1.5, 1.0 / 3.0), 1), WithinAbs(std::log(1.0 / 3.0) + 2.0 / 3.0, 1e-14));
}

TEST_CASE("raw moment examples", "[noise]") {
    const NoiseModel u = scheduled_uniform();
    CHECK_THAT(raw_moment(u, 1, 1), WithinAbs(0.5, 1e-15));
    CHECK_THAT(raw_moment(u, 1, 2), WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(raw_moment(u, 1, 3), WithinAbs(0.25, 1e-15));
    CHECK_THAT(raw_moment(scheduled_two_point(), 2, 1), WithinAbs(-0.24172, 1e-5));
    CHECK_THAT(raw_moment(scheduled_two_point(), 2, 1),
               WithinAbs(-std::pow(2.0, -1.0 / 3.0) * 0.75 + std::sqrt(2.0) * 0.25, 1e-15));
    CHECK_THAT(raw_moment(NoiseModel::degenerate(0.3), 4, 3), WithinAbs(0.027, 1e-15));
    CHECK_THROWS_AS(raw_moment(NoiseModel::pareto(2.0, 0.5), 1, 2), NonFinite);
    CHECK_THAT(raw_moment(NoiseModel::pareto(2.0, 0.5), 1, 1), WithinAbs(0.0, 1e-15));
    CHECK_THROWS_AS(raw_moment(NoiseModel::degenerate(0.3), 1, 4), InvalidArgument);
}

TEST_CASE("Lemma ratio examples", "[noise]") {
    CHECK_THAT(lemma45_ratio(NoiseModel::degenerate(0.5), 1), WithinAbs(2.5 * std::log(1.5), 1e-14));
    const double l5 = std::log(0.5), l15 = std::log(1.5);
    const double expected = 0.5 * (1.5 * l5 * l5 + 2.5 * l15 * l15) / (0.5 * std::abs(std::log(0.75)));
    CHECK_THAT(lemma45_ratio(NoiseModel::two_point(-0.5, 0.5, 0.5), 1), WithinRel(expected, 1e-14));
    CHECK_THROWS_AS(lemma45_ratio(NoiseModel::degenerate(0.0), 1), DivisionByZero);
}

TEST_CASE("quadrature and closed-form routes agree on uniform laws", "[noise]") {
    const UniformLaw law{-0.5, 0.6};
    // E[(2+xi) ln^2(1+xi)] has antiderivative in y = 1+xi: (1+y) ln^2 y ... evaluated by a fine midpoint rule
    const int m = 2000000;
    double mid = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = law.lo + (law.hi - law.lo) * (i + 0.5) / m;
        const double l = std::log1p(x);
        mid += (2 + x) * l * l;
    }
    mid /= m;
    CHECK_THAT(lemma45_numerator(law), WithinAbs(mid, 1e-9));
}

TEST_CASE("inverse moment for the martingale", "[noise]") {
    CHECK_THAT(inverse_moment(TwoPointLaw{-0.5, 1.0, 0.25}, 1.0), WithinAbs(1.625, 1e-15));
    CHECK(inverse_moment(DegenerateLaw{0.3}, 0.5) == 1.0 / 1.15);
    // uniform: (1/(f(b-a))) ln((1+fb)/(1+fa))
    const double f = 0.4;
    CHECK_THAT(inverse_moment(UniformLaw{-0.5, 0.6}, f),
               WithinAbs(std::log((1 + f * 0.6) / (1 - f * 0.5)) / (f * 1.1), 1e-14));
    CHECK(inverse_moment(UniformLaw{-0.5, 0.6}, 0.0) == 1.0);
    CHECK_THROWS_AS(inverse_moment(ParetoLaw{2.0, 0.5}, 1.0), Unsupported);
}

TEST_CASE("positivity validation", "[noise]") {
    CHECK(validate_positivity(NoiseModel::uniform(-0.5, 0.6), LinearContext{}).ok);
    const auto bad = validate_positivity(NoiseModel::two_point(-1.2, 1.0, 0.5), LinearContext{});
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.offending_n);
    CHECK(*bad.offending_n == 1);

    const auto ito = validate_positivity(NoiseModel::two_point(-1.0, 1.0, 0.5), ItoContext{0.25, 0.01});
    CHECK(ito.ok);
    CHECK_THAT(ito.bound, WithinAbs(0.9025, 1e-15));
    CHECK_THAT(ito_multiplier_minimum(0.25, 0.01, -1.0), WithinAbs(0.9025, 1e-15));
    // interior minimiser: z = -1, a = 1, k = 1 -> min over s in [0,1] of 1 + s^2 - s = 0.75
    CHECK_THAT(ito_multiplier_minimum(1.0, 1.0, -1.0), WithinAbs(0.75, 1e-15));
    CHECK_FALSE(validate_positivity(NoiseModel::two_point(-1.0, 1.0, 0.5), LinearContext{}).ok);
    CHECK_FALSE(validate_positivity(NoiseModel::two_point(-3.0, 3.0, 0.5), ItoContext{0.0, 1.0}).ok);

    // the scheduled example puts zero mass on sqrt(1)=1 at n=1 and is valid
    CHECK(validate_positivity(scheduled_two_point(), LinearContext{}).ok);
    CHECK(validate_positivity(scheduled_uniform(), NonlinearContext{}).ok);

    // lower edge -0.3 n crosses -1 at n = 4
    const auto sched = validate_positivity(
        NoiseModel::uniform(ScheduleExpr::parse("-0.3*n^1"), ScheduleExpr::constant(5.0)), LinearContext{});
    CHECK_FALSE(sched.ok);
    REQUIRE(sched.offending_n);
    CHECK(*sched.offending_n == 4);

    // crossing far beyond the scan window is found through the limit
    const auto late = validate_positivity(
        NoiseModel::uniform(ScheduleExpr::parse("-1e-6*n^1"), ScheduleExpr::constant(5.0)), LinearContext{});
    CHECK_FALSE(late.ok);
    REQUIRE(late.offending_n);
    CHECK(*late.offending_n == 1000000);
}

TEST_CASE("power moment is convex in alpha", "[noise]") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> U(0.01, 1.0);
    const std::vector<std::pair<NoiseModel, double>> models = {
        {NoiseModel::two_point(-0.5, 1.0, 0.25), 8.0},
        {NoiseModel::uniform(-0.5, 0.6), 8.0},
        {NoiseModel::pareto(2.0, 0.5), 1.99},
    };
    for (const auto& [m, amax] : models) {
        for (int t = 0; t < 200; ++t) {
            double a1 = U(gen) * amax, a3 = U(gen) * amax;
            if (a1 > a3) std::swap(a1, a3);
            if (a3 - a1 < 1e-3) continue;
            const double w = U(gen);
            const double a2 = a1 + w * (a3 - a1);
            const double chord = (1 - w) * power_moment(m, 1, a1) + w * power_moment(m, 1, a3);
            CHECK(power_moment(m, 1, a2) <= chord + 1e-9);
        }
        CHECK_THAT(power_moment(m, 1, 1e-12), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("derivative of the power moment at zero is the log moment", "[noise]") {
    const double h = 1e-5;
    for (const NoiseLaw& law : {NoiseLaw{TwoPointLaw{-0.5, 1.0, 0.25}}, NoiseLaw{TwoPointLaw{-0.5, 0.5, 0.5}},
                                NoiseLaw{UniformLaw{-0.5, 0.6}}, NoiseLaw{UniformLaw{0.0, 1.0}}}) {
        const double d = (power_moment(law, h) - power_moment(law, -h)) / (2 * h);
        CHECK_THAT(d, WithinAbs(log_moment(law), 1e-6));
    }
}

TEST_CASE("moments agree with Monte Carlo within 4 standard errors", "[noise]") {
    const int draws = 200000;
    struct Case {
        NoiseModel model;
        double alpha;
        int max_k;
    };
    const std::vector<Case> cases = {{NoiseModel::two_point(-0.5, 1.0, 0.25), 2.0, 3},
                                     {NoiseModel::uniform(-0.5, 0.6), 1.5, 3},
                                     {NoiseModel::pareto(2.0, 0.5), 0.5, 0},
                                     {NoiseModel::pareto(5.0, 0.8), 2.0, 2}};
    std::uint64_t seed = 100;
    for (const Case& c : cases) {
        const auto [pm, pse] = monte_carlo(c.model, [&](double x) { return std::pow(1 + x, c.alpha); }, draws, ++seed);
        CHECK(std::abs(pm - power_moment(c.model, 1, c.alpha)) <= 4 * pse);
        const auto [lm, lse] = monte_carlo(c.model, [](double x) { return std::log1p(x); }, draws, ++seed);
        CHECK(std::abs(lm - log_moment(c.model, 1)) <= 4 * lse);
        for (int k = 1; k <= c.max_k; ++k) {
            const auto [rm, rse] = monte_carlo(c.model, [&](double x) { return std::pow(x, k); }, draws, ++seed);
            CHECK(std::abs(rm - raw_moment(c.model, 1, k)) <= 4 * rse);
        }
    }
}

TEST_CASE("draws are reproducible per seed and stream", "[noise]") {
    const NoiseModel m = NoiseModel::uniform(-0.5, 0.6);
    RngStream a(42, 3), b(42, 3), c(42, 4);
    bool any_diff = false;
    for (int i = 1; i <= 1000; ++i) {
        const double x = sample(m, i, a);
        CHECK(x == sample(m, i, b));
        any_diff = any_diff || x != sample(m, i, c);
    }
    CHECK(any_diff);
}

TEST_CASE("family names", "[noise]") {
    for (NoiseFamily f : {NoiseFamily::TwoPoint, NoiseFamily::UniformInterval, NoiseFamily::ParetoTail,
                          NoiseFamily::Degenerate})
        CHECK(noise_family_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(noise_family_from_string("gaussian"), InvalidArgument);
}
