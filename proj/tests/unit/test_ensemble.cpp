#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdelab/ensemble.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/report.hpp"

using namespace sdelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const NoiseModel kAsym = NoiseModel::two_point(-0.5, 1.0, 0.25);

EquationSpec halving() {
    return EquationSpec::linear(NoiseModel::degenerate(-0.5), CoefficientSequence::zero(), 1.0);
}

}  // namespace

TEST_CASE("type-7 quantiles", "[ensemble]") {
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK_THAT(quantile(v, 0.5), WithinAbs(2.5, 1e-15));
    CHECK_THAT(quantile(v, 0.25), WithinAbs(1.75, 1e-15));
    const Quantiles q = quantiles({5.0, 1.0, 9.0, 3.0, 7.0});
    CHECK(q.q05 <= q.q25);
    CHECK(q.q25 <= q.q50);
    CHECK(q.q50 == 5.0);
    CHECK(q.q75 <= q.q95);
    CHECK_THROWS_AS(quantile({}, 0.5), InvalidArgument);
}

TEST_CASE("surrogate validation", "[ensemble]") {
    CHECK_NOTHROW(Surrogate{}.validate());
    CHECK_THROWS_AS((Surrogate{1.0, 10, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((Surrogate{1.0, 10, 0.5}.validate()), InvalidArgument);
    CHECK_THROWS_AS((Surrogate{1e-2, 0, 1e2}.validate()), InvalidArgument);
    EnsembleOptions bad;
    bad.surrogate = {1.0, 10, 0.1};
    CHECK_THROWS_AS(run_ensemble(halving(), 10, 1, 0, bad), InvalidArgument);
}

TEST_CASE("deterministic halving converges on every path", "[ensemble]") {
    EnsembleOptions opts;
    opts.surrogate = {1e-6, 10, 1e2};
    const EnsembleResult r = run_ensemble(halving(), 100, 20, 1, opts);
    CHECK(r.p_converged == 1.0);
    CHECK(r.p_diverged == 0.0);
    CHECK(effective_stride(100, 64, 10) == 5);
}

TEST_CASE("running minimum of the halving recursion", "[ensemble]") {
    const Quantiles q = liminf_estimator(halving(), 50, 5, 3);
    CHECK(q.q05 == std::ldexp(1.0, -50));
    CHECK(q.q95 == std::ldexp(1.0, -50));
    const EnsembleResult r = run_ensemble(halving(), 50, 3, 3);
    for (const auto& s : r.paths) CHECK(s.running_min == s.final_value);
}

TEST_CASE("liminf regime: running minimum shrinks with the horizon", "[ensemble]") {
    const auto spec = EquationSpec::linear(NoiseModel::two_point(-0.5, 0.5, 0.5), CoefficientSequence::power_law(1.0, 1.0), 1.0);
    const Quantiles short_run = liminf_estimator(spec, 1000, 200, 5);
    const Quantiles long_run = liminf_estimator(spec, 20000, 200, 5);
    CHECK(long_run.q50 < short_run.q50);
}

TEST_CASE("replica streams are indexed, not sequential", "[ensemble]") {
    const auto spec = EquationSpec::linear(kAsym, CoefficientSequence::power_law(1.0, 2.0), 1.0);
    EnsembleOptions opts;
    opts.exceed_thresholds = {2.0};
    const EnsembleResult r = run_ensemble(spec, 500, 8, 21, opts);
    for (std::uint64_t i = 0; i < 8; ++i) {
        SimulationOptions sim;
        sim.thresholds_above = {2.0, opts.surrogate.c_div};
        sim.record_stride = r.effective_stride;
        RngStream rng(21, i);
        CHECK(simulate(spec, 500, rng, sim).summary == r.paths[i]);
    }
    // a smaller ensemble reproduces the leading paths exactly
    const EnsembleResult head = run_ensemble(spec, 500, 3, 21, opts);
    for (std::size_t i = 0; i < 3; ++i) CHECK(head.paths[i] == r.paths[i]);
}

TEST_CASE("results do not depend on the thread count", "[ensemble]") {
    const auto spec = EquationSpec::linear(kAsym, CoefficientSequence::power_law(1.0, 2.0), 1.0);
    EnsembleOptions one, many;
    one.checkpoints = many.checkpoints = {100, 1000};
    many.threads = 4;
    const EnsembleResult a = run_ensemble(spec, 1000, 64, 9, one);
    const EnsembleResult b = run_ensemble(spec, 1000, 64, 9, many);
    CHECK(a == b);
    CHECK(report::paths_csv(a) == report::paths_csv(b));
    CHECK(report::summary_csv(a) == report::summary_csv(b));
}

TEST_CASE("fractions and first-passage exceedance", "[ensemble]") {
    const auto spec = EquationSpec::linear(NoiseModel::pareto(1.5, 1.0 / 3.0), CoefficientSequence::power_law(1.0, 2.0 / 3.0), 1.0);
    EnsembleOptions opts;
    opts.exceed_thresholds = {5.0};
    const EnsembleResult r = run_ensemble(spec, 5000, 200, 17, opts);
    double prev = 0.0;
    for (std::uint64_t n : {10u, 100u, 1000u, 5000u}) {
        const double p = r.p_exceeded_at(5.0, n);
        CHECK(p >= prev);
        prev = p;
    }
    CHECK(r.p_exceeded_at(5.0, 5000) == r.p_exceeded(5.0));
    CHECK(r.p_converged + r.p_diverged <= 1.0);
    CHECK((r.p_converged >= 0.0 && r.p_converged <= 1.0));
    CHECK_THROWS_AS(r.p_exceeded_at(7.0, 10), InvalidArgument);
}

TEST_CASE("martingale diagnostic over an ensemble", "[ensemble]") {
    const auto spec = EquationSpec::nonlinear(FeedbackFunction{FeedbackKind::MinAbsOne}, NoiseModel::uniform(-0.5, 0.6),
                                              CoefficientSequence::power_law(1.0, 2.0), 1.0);
    EnsembleOptions opts;
    opts.track_martingale = true;
    const EnsembleResult r = run_ensemble(spec, 500, 2000, 4, opts);
    REQUIRE(r.martingale_mean);
    CHECK(std::abs(*r.martingale_mean - 1.0) <= 4 * *r.martingale_se);
}

TEST_CASE("decay-rate check", "[ensemble]") {
    const auto spec = EquationSpec::linear(kAsym, CoefficientSequence::geometric(1.0, 0.25), 1.0);
    const auto kappa = SignedSequence::constant(-0.125);
    const DecayRateResult d = decay_rate_check(spec, kappa, 1.0, 0.5, {50, 200}, 300, 13);
    REQUIRE(d.checkpoints.size() == 2);
    CHECK(d.checkpoints[1].median < d.checkpoints[0].median);
    CHECK(d.checkpoints[0].median <= d.checkpoints[0].p95);

    // vanishing weight: the statistic is X_n^alpha (odd count so the median is an order statistic)
    const DecayRateResult plain = decay_rate_check(spec, kappa, 1.0, 1e-12, {50}, 301, 13);
    EnsembleOptions opts;
    opts.checkpoints = {50};
    const EnsembleResult e = run_ensemble(spec, 50, 301, 13, opts);
    CHECK_THAT(plain.checkpoints[0].median, WithinRel(e.checkpoints[0].x.q50, 1e-9));

    CHECK_THROWS_AS(decay_rate_check(spec, SignedSequence(), 1.0, 0.5, {50}, 10, 1), PreconditionFailed);
    const auto nonlin = EquationSpec::nonlinear(FeedbackFunction{}, kAsym, CoefficientSequence::geometric(1.0, 0.25), 1.0);
    CHECK_THROWS_AS(decay_rate_check(nonlin, kappa, 1.0, 0.5, {50}, 10, 1), PreconditionFailed);
}

TEST_CASE("conjecture probe labels and refusals", "[ensemble]") {
    const NoiseModel pareto = NoiseModel::pareto(2.0, 0.5);
    const auto ce = critical_alpha(pareto);
    ProbeSettings s;
    s.horizon = 5000;
    s.replicas = 40;
    const auto rows = conjecture_probe(pareto, ce.alpha_star, {0.5, 1.0 / *ce.alpha_star, 2.0}, s);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].label == SummabilityLabel::NotSummable);
    CHECK(rows[1].label == SummabilityLabel::Boundary);
    CHECK(rows[2].label == SummabilityLabel::Summable);
    for (const auto& row : rows) CHECK((row.p_converged >= 0.0 && row.p_converged <= 1.0));
    CHECK(rows[2].p_converged > rows[0].p_converged);

    CHECK_THROWS_AS(conjecture_probe(pareto, std::nullopt, {1.0}, s), PreconditionFailed);
    CHECK_THROWS_AS(critical_alpha(NoiseModel::degenerate(0.0)), NoRoot);
}

TEST_CASE("report serialisation", "[ensemble]") {
    const auto spec = EquationSpec::linear(kAsym, CoefficientSequence::power_law(1.0, 2.0), 1.0);
    EnsembleOptions opts;
    opts.track_martingale = true;
    opts.checkpoints = {10};
    const EnsembleResult r = run_ensemble(spec, 20, 3, 1, opts);
    const std::string paths = report::paths_csv(r);
    CHECK(paths.rfind("replica,final,max,min,argmax,argmin,overflow,M_N\n", 0) == 0);
    CHECK(std::count(paths.begin(), paths.end(), '\n') == 4);
    const std::string summary = report::summary_csv(r);
    CHECK(summary.rfind("statistic,value\n", 0) == 0);
    CHECK(summary.find("surrogate_eps_conv,0.01") != std::string::npos);
    CHECK(summary.find("x_10_q50,") != std::string::npos);
    CHECK(summary.find("martingale_se,") != std::string::npos);

    const std::string traj = report::trajectory_csv({{0, 1.0}, {1, 0.5}});
    CHECK(traj == "n,x\n0,1\n1,0.5\n");

    TheoremVerdict v;
    v.theorem = TheoremId::T4_2;
    v.conditions.push_back({"homogeneous", ConditionStatus::Holds, 0.0, ""});
    CHECK(report::verdicts_csv({v}) ==
          "theorem_id,condition_id,status,quantity\nT4_2,homogeneous,Holds,0\nT4_2,conclusion,NotApplicable,0\n");
    CHECK(report::verdict_text(v).find("condition homogeneous: Holds") != std::string::npos);
}

TEST_CASE("atomic writes leave no temporary files", "[ensemble]") {
    const auto dir = std::filesystem::temp_directory_path() / "sdelab_atomic_test";
    std::filesystem::remove_all(dir);
    report::write_atomic(dir / "a.csv", "n,x\n");
    report::write_atomic(dir / "a.csv", "n,x\n0,1\n");
    std::ifstream in(dir / "a.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "n,x\n0,1\n");
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        (void)entry;
        ++files;
    }
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
}
