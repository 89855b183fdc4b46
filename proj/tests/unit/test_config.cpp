#include <catch_amalgamated.hpp>

#include <filesystem>

#include "sdelab/config.hpp"
#include "sdelab/errors.hpp"

using namespace sdelab;

namespace {

const std::string kBase = R"(equation:
  kind: linear
  x0: 1
noise:
  family: two_point
  lo: -0.5
  hi: 1
  p_hi: 0.25
free_coefficient: {family: power_law, c: 1, p: 2}
analysis:
  alpha: 0.5
  theorems: [T3_1]
)";

template <class Fn>
ConfigError config_error(Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError");
    throw;
}

}  // namespace

TEST_CASE("example configurations parse and round-trip", "[config]") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(SDELAB_EXAMPLES_DIR)) {
        if (entry.path().extension() != ".yaml") continue;
        ++count;
        INFO(entry.path().string());
        const RunConfig cfg = load_config(entry.path());
        const std::string dumped = dump_config(cfg);
        const RunConfig again = parse_config(dumped);
        CHECK(again == cfg);
        CHECK(dump_config(again) == dumped);
        CHECK_NOTHROW(build_equation(cfg));
    }
    CHECK(count >= 8);
}

TEST_CASE("parsed values", "[config]") {
    const RunConfig cfg = parse_config(kBase);
    CHECK(cfg.equation.kind == RecursionKind::Linear);
    REQUIRE(cfg.noise);
    CHECK(cfg.noise->family == NoiseFamily::TwoPoint);
    CHECK(cfg.noise->params[2] == ScheduleExpr::constant(0.25));
    CHECK(std::get<PowerLaw>(cfg.free_coefficient) == PowerLaw{1.0, 2.0});
    CHECK(cfg.analysis.alpha == 0.5);
    CHECK(cfg.analysis.theorems == std::vector<TheoremId>{TheoremId::T3_1});
    CHECK(cfg.ensemble.surrogate == Surrogate{});
    CHECK(build_equation(cfg).noise() == NoiseModel::two_point(-0.5, 1.0, 0.25));
}

TEST_CASE("scheduled parameters and fractions", "[config]") {
    const RunConfig cfg = load_config(std::filesystem::path(SDELAB_EXAMPLES_DIR) / "scheduled_example.yaml");
    CHECK_FALSE(build_noise(cfg).is_iid());
    const RunConfig pareto = load_config(std::filesystem::path(SDELAB_EXAMPLES_DIR) / "pareto_divergence.yaml");
    CHECK(pareto.noise->params[1] == ScheduleExpr::constant(1.0 / 3.0));
}

TEST_CASE("malformed family names the field and line", "[config]") {
    std::string text = kBase;
    text.replace(text.find("two_point"), 9, "two_piont");
    const ConfigError e = config_error([&] { parse_config(text); });
    CHECK(e.field() == "noise.family");
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("two_piont") != std::string::npos);
}

TEST_CASE("validation errors", "[config]") {
    const auto field_of = [](const std::string& text) {
        return config_error([&] { parse_config(text); }).field();
    };
    CHECK(field_of(kBase + "ensemble:\n  eps_conv: 0.5\n  c_div: 0.1\n") == "ensemble.c_div");
    CHECK(field_of(kBase + "ensemble:\n  eps_conv: 0.5\n  c_div: 0.5\n") == "ensemble.c_div");
    CHECK(field_of(kBase + "bogus: 1\n") == "bogus");
    CHECK(field_of(kBase + "output:\n  colour: red\n") == "output.colour");

    std::string neg = kBase;
    neg.replace(neg.find("lo: -0.5"), 8, "lo: -1.2");
    CHECK(field_of(neg) == "noise");

    std::string t52 = kBase;
    t52.replace(t52.find("[T3_1]"), 6, "[T5_2]");
    t52.replace(t52.find("alpha: 0.5"), 10, "alpha: 1");
    CHECK(field_of(t52) == "analysis.alpha");

    std::string t54 = kBase;
    t54.replace(t54.find("[T3_1]"), 6, "[T5_4]");
    CHECK(field_of(t54) == "equation.kind");

    std::string t32 = kBase;
    t32.replace(t32.find("[T3_1]"), 6, "[T3_2]");
    CHECK(field_of(t32) == "analysis.gamma_decay");

    CHECK(field_of("equation:\n  kind: linear\n") == "noise");
    CHECK(field_of("equation:\n  kind: sideways\nnoise: {family: degenerate, c: 0}\n") == "equation.kind");
    CHECK(field_of("equation:\n  kind: linear\n  x0: -1\nnoise: {family: degenerate, c: 0}\n") == "equation.x0");
    CHECK(field_of("equation:\n  kind: linear\nnoise: {family: degenerate}\n") == "noise.c");
    CHECK(field_of("equation:\n  kind: linear\nnoise: {family: degenerate, c: exp(n)}\n") == "noise.c");
    CHECK(field_of("equation: [1, 2]\n") == "equation");
    CHECK(field_of("equation: {kind: linear\n") == "<document>");
    CHECK(field_of(kBase + "ensemble:\n  horizon: 10\n  checkpoints: [100]\n") == "ensemble.checkpoints");
    CHECK(field_of(kBase + "ensemble:\n  replicas: 2.5\n") == "ensemble.replicas");
}

TEST_CASE("programmatic validation", "[config]") {
    RunConfig cfg = parse_config(kBase);
    cfg.ensemble.horizon = 0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = parse_config(kBase);
    cfg.ensemble.surrogate.c_div = cfg.ensemble.surrogate.eps_conv;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}
