#include <catch_amalgamated.hpp>

#include <cmath>

#include "sdelab/errors.hpp"
#include "sdelab/schedule.hpp"

using namespace sdelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("constant expressions parse to their value", "[schedule]") {
    CHECK(ScheduleExpr::parse("0.25") == ScheduleExpr::constant(0.25));
    CHECK(ScheduleExpr::parse("-1/3")(7) == -1.0 / 3.0);
    CHECK(ScheduleExpr::parse("  2 ").is_constant());
    CHECK(ScheduleExpr::parse("1e-3")(1) == 1e-3);
}

TEST_CASE("whitelisted index-dependent forms", "[schedule]") {
    CHECK_THAT(ScheduleExpr::parse("1 - 1/n^2")(2), WithinAbs(0.75, 1e-15));
    CHECK_THAT(ScheduleExpr::parse("sqrt(n)")(4), WithinAbs(2.0, 1e-15));
    CHECK_THAT(ScheduleExpr::parse("sqrt(n)")(2), WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK_THAT(ScheduleExpr::parse("-1*n^(-1/3)")(8), WithinAbs(-0.5, 1e-15));
    CHECK_THAT(ScheduleExpr::parse("n^-2")(2), WithinAbs(0.25, 1e-15));
    CHECK_THAT(ScheduleExpr::parse("1*n^-2 - 1")(2), WithinAbs(-0.75, 1e-15));
    CHECK_THAT(ScheduleExpr::parse("3*n^0.5 + 1")(4), WithinAbs(7.0, 1e-15));
    CHECK_FALSE(ScheduleExpr::parse("n^-2").is_constant());
}

TEST_CASE("limit as n grows", "[schedule]") {
    CHECK(ScheduleExpr::parse("1 - 1/n^2").limit() == 1.0);
    CHECK(ScheduleExpr::parse("sqrt(n)").limit() == INFINITY);
    CHECK(ScheduleExpr::parse("-1*n^0.5").limit() == -INFINITY);
    CHECK(ScheduleExpr::parse("4").limit() == 4.0);
}

TEST_CASE("canonical text re-parses to an identical expression", "[schedule]") {
    for (const char* text : {"0.1", "-1/3", "1 - 1/n^2", "sqrt(n)", "-1*n^(-1/3)", "n^-2", "1*n^-2 - 1",
                             "2.5*n^1.25 + 0.125"}) {
        const ScheduleExpr e = ScheduleExpr::parse(text);
        INFO(text << " -> " << e.to_string());
        CHECK(ScheduleExpr::parse(e.to_string()) == e);
    }
}

TEST_CASE("expressions outside the whitelist are rejected", "[schedule]") {
    for (const char* text : {"", "exp(n)", "n^", "2*", "1 + + 2", "log(n)", "n*n", "1/0.5n"})
        CHECK_THROWS_AS(ScheduleExpr::parse(text), InvalidArgument);
}

TEST_CASE("format_double is the shortest round-trip form", "[schedule]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
