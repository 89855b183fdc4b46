#include <catch_amalgamated.hpp>

#include <cmath>

#include "sdelab/quadrature.hpp"

using namespace sdelab;
using Catch::Matchers::WithinAbs;

TEST_CASE("polynomials are integrated exactly", "[quadrature]") {
    const auto r = integrate_gk15([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinAbs(1.0 / 3.0, 1e-14));
}

TEST_CASE("smooth log integrand matches its antiderivative", "[quadrature]") {
    const double a = -0.5, b = 0.6;
    const auto F = [](double x) { return (1 + x) * std::log1p(x) - x; };
    const auto r = integrate_gk15([](double x) { return std::log1p(x); }, a, b);
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinAbs(F(b) - F(a), 1e-13));
}

TEST_CASE("integrable endpoint singularity", "[quadrature]") {
    const auto r = integrate_gk15([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinAbs(-1.0, 1e-11));
    CHECK(r.subdivisions > 1);
}

TEST_CASE("reversed and empty intervals", "[quadrature]") {
    CHECK_THAT(integrate_gk15([](double x) { return x; }, 1.0, 0.0).value, WithinAbs(-0.5, 1e-15));
    CHECK(integrate_gk15([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("subdivision budget is respected", "[quadrature]") {
    const auto r = integrate_gk15([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, 1e-14, 50);
    CHECK(r.subdivisions <= 50);
    CHECK_FALSE(r.converged);
}
