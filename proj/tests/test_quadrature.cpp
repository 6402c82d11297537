#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "llsc/quadrature.hpp"

using namespace llsc;

TEST_CASE("finite-interval basics") {
    const QuadResult a = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(a.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    const QuadResult b = integrate([](double x) { return std::sin(x); }, 0.0, kPi);
    CHECK(b.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.error < 1e-9 * 2.0 + 1e-12);
}

TEST_CASE("semi-infinite integrals through the rational map") {
    const QuadResult a = integrate_semi_infinite([](double g) { return std::exp(-g); }, 1.0);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-10));

    const QuadResult b = integrate_semi_infinite([](double g) { return g * std::exp(-g); }, 2.0);
    CHECK(b.value == doctest::Approx(1.0).epsilon(1e-10));

    // algebraic tail
    const QuadResult c =
        integrate_semi_infinite([](double g) { return std::pow(1.0 + g, -3.0); }, 1.0);
    CHECK(c.value == doctest::Approx(0.5).epsilon(1e-10));

    // integral of erfc(sqrt(g)) over (0, inf) equals 1/2
    const QuadResult d =
        integrate_semi_infinite([](double g) { return std::erfc(std::sqrt(g)); }, 1.0);
    CHECK(d.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("scale far from the integrand mass still converges") {
    // mass near gamma = 1, substitution scale 1e6
    const QuadResult a = integrate_semi_infinite(
        [](double g) { return std::exp(-(g - 1.0) * (g - 1.0) * 50.0); }, 1e6);
    CHECK(a.value == doctest::Approx(std::sqrt(kPi / 50.0)).epsilon(1e-8));
}

TEST_CASE("interval budget exhaustion raises an accuracy error") {
    CHECK_THROWS_AS(integrate([](double x) { return std::cos(200.0 * x); }, 0.0, 40.0, 1e-12, 0.0, 4),
                    AccuracyError);
    try {
        integrate([](double x) { return std::cos(200.0 * x); }, 0.0, 40.0, 1e-12, 0.0, 4);
    } catch (const AccuracyError& e) {
        CHECK(std::isfinite(e.best_value()));
        CHECK(e.error_estimate() > 0.0);
    }
}
