#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specdiff/errors.hpp"
#include "specdiff/extrapolation.hpp"
#include "specdiff/fill_metrics.hpp"
#include "specdiff/quadrature.hpp"

using namespace specdiff;

TEST_CASE("Gauss-Legendre is exact up to degree 2n - 1") {
    QuadratureParams p;
    p.a = 0.0;
    p.b = 2.0;
    const auto rule = make_quadrature(QuadratureKind::BoundedLegendre, 3, p);
    CHECK(rule.integrate([](double x) { return std::pow(x, 5); }) == doctest::Approx(64.0 / 6.0).epsilon(1e-14));
    CHECK(rule.integrate([](double) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-15));
    validate(rule);
}

TEST_CASE("half-line rules integrate exponential moments") {
    const double exact = 6.0;  // int_0^inf t^3 e^{-t} dt
    auto moment = [](double t) { return t * t * t * std::exp(-t); };

    const auto laguerre = make_quadrature(QuadratureKind::HalflineLaguerre, 20);
    CHECK(laguerre.integrate(moment) == doctest::Approx(exact).epsilon(1e-12));

    // In u = 1 - exp(-t) the integrand exp(-2t) dt becomes (1 - u) du: exact.
    const auto mapped = make_quadrature(QuadratureKind::HalflineExpMapped, 4);
    CHECK(mapped.integrate([](double t) { return std::exp(-2.0 * t); }) == doctest::Approx(0.5).epsilon(1e-14));

    const auto loguniform = make_quadrature(QuadratureKind::HalflineLogUniform, 200);
    CHECK(loguniform.integrate(moment) == doctest::Approx(exact).epsilon(1e-8));
    CHECK_FALSE(loguniform.support.bounded());
}

TEST_CASE("log-uniform rule resolves 1/t over many decades") {
    QuadratureParams p;
    p.t_min = 1e-6;
    p.t_max = 1e6;
    const auto rule = make_quadrature(QuadratureKind::HalflineLogUniform, 100, p);
    // int_{1e-6}^{1e6} dt / t = 12 log 10, and the midpoint rule in log t is exact for it.
    CHECK(rule.integrate([](double t) { return 1.0 / t; }) == doctest::Approx(12.0 * std::log(10.0)).epsilon(1e-13));
}

TEST_CASE("rule construction validates its inputs") {
    CHECK_THROWS_AS(make_quadrature(QuadratureKind::BoundedLegendre, 0), InvalidInput);
    QuadratureParams p;
    p.a = 1.0;
    p.b = 0.0;
    CHECK_THROWS_AS(make_quadrature(QuadratureKind::BoundedLegendre, 4, p), InvalidInput);

    QuadratureRule bad;
    bad.nodes = {0.0, 0.5, 0.4};
    bad.weights = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(validate(bad), InvalidInput);
    bad.nodes = {0.0, 0.4, 0.5};
    bad.weights = {1.0, -1.0, 1.0};
    CHECK_THROWS_AS(validate(bad), InvalidInput);

    for (auto kind : {QuadratureKind::BoundedLegendre, QuadratureKind::HalflineExpMapped,
                      QuadratureKind::HalflineLaguerre, QuadratureKind::HalflineLogUniform}) {
        CHECK(quadrature_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(quadrature_kind_from_string("simpson"), InvalidInput);
}

TEST_CASE("unit-interval and shifted rules concatenate into a half-line rule") {
    const auto lo = logistic_unit_rule(200, -30.0, 30.0);
    const auto hi = shifted_log_rule(200, 1.0, -30.0, 6.0);
    const auto rule = concatenate(lo, hi);
    validate(rule);
    CHECK(rule.integrate([](double x) { return std::exp(-x); }) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(concatenate(hi, lo), InvalidInput);
}

TEST_CASE("Richardson extrapolation removes polynomial error terms") {
    const std::vector<double> eps = {0.4, 0.2, 0.1};
    std::vector<double> values;
    for (double e : eps) values.push_back(1.5 - 2.0 * e + 3.0 * e * e);
    const auto r = extrapolate_to_zero(eps, values);
    CHECK(r.value == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(r.used == 3);

    const auto w = lagrange_weights_at_zero(eps);
    double sum = 0.0;
    for (double x : w) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(validate_ladder({0.1, 0.1}), InvalidInput);
    CHECK_THROWS_AS(validate_ladder({0.1, -0.01}), InvalidInput);
}

TEST_CASE("phase unwrapping and ladder admissibility") {
    const auto u = unwrap_phases({0.1, 2.0 * std::numbers::pi - 0.05});
    CHECK(u[1] == doctest::Approx(-0.05));

    RVector levels(20);
    for (int i = 0; i < 20; ++i) levels(i) = 0.1 * i;
    CHECK(local_level_spacing(levels, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
    const auto keep = admissible_members({0.1, 0.01, 0.001}, 0.005, 1.0);
    CHECK(keep == std::vector<int>{0, 1});
}

TEST_CASE("fill metrics on a hand-checked point set") {
    const auto m = fill_metrics({-1.0, 0.0, 1.0, 1.25}, -1.0, 1.0);
    CHECK(m.max_gap == doctest::Approx(1.0));
    CHECK(m.coverage_gap == doctest::Approx(0.5));
    CHECK(m.overshoot == doctest::Approx(0.25));
    CHECK(m.points_inside == 3);

    CHECK(hausdorff({0.0}, {1.0, 0.25}) == doctest::Approx(1.0));
    CHECK(directed_distance({0.0}, {1.0, 0.25}) == doctest::Approx(0.25));
    CHECK(std::isinf(hausdorff({}, {1.0})));
}

TEST_CASE("counting breakpoint finds a density change") {
    // Dense on [0.02, 0.3], sparse on (0.3, 0.7]: N(x) changes slope at 0.3.
    std::vector<double> points;
    for (int i = 0; i < 60; ++i) points.push_back(0.02 + 0.28 * (i + 0.5) / 60.0);
    for (int i = 0; i < 10; ++i) points.push_back(0.3 + 0.4 * (i + 0.5) / 10.0);
    CHECK(counting_breakpoint(points, 0.01) == doctest::Approx(0.3).epsilon(0.05 / 0.3));
    CHECK(std::isnan(counting_breakpoint({0.5, 0.6}, 0.01)));
}
