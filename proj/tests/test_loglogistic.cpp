#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "llsc/loglogistic.hpp"
#include "llsc/quadrature.hpp"

using namespace llsc;

TEST_CASE("construction validates parameters") {
    CHECK_THROWS_AS(AmplitudeParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AmplitudeParams(1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(BranchParams(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BranchParams(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("amplitude to SNR-domain parameter mapping") {
    const BranchParams a = from_amplitude(AmplitudeParams(1.0, 2.0));
    CHECK(a.alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.beta == doctest::Approx(1.0).epsilon(1e-15));

    const BranchParams b = from_amplitude(AmplitudeParams(2.0, 4.6622));
    CHECK(b.alpha == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(b.beta == doctest::Approx(2.3311).epsilon(1e-15));

    // measurement-based amplitude parameters map onto the SNR-domain pair
    const BranchParams c = from_amplitude(AmplitudeParams(0.9861, 4.6622));
    CHECK(c.alpha == doctest::Approx(0.9724).epsilon(2e-4));
    CHECK(c.beta == doctest::Approx(2.3311).epsilon(1e-15));
}

TEST_CASE("cdf_snr closed-form points") {
    const BranchParams p(1.0, 2.0);
    CHECK(cdf_snr(1.0, p, 1.0) == doctest::Approx(0.5).epsilon(1e-14));  // median at rho*alpha
    CHECK(cdf_snr(0.0, p, 1.0) == 0.0);
    CHECK(cdf_snr(2.0, p, 1.0) == doctest::Approx(0.8).epsilon(1e-14)); // 1/(1+2^-2)
    CHECK_THROWS_AS(cdf_snr(-1.0, p, 1.0), std::domain_error);

    // extreme arguments stay finite and ordered
    const BranchParams q(0.9724, 2.3311);
    CHECK(cdf_snr(1e-280, q, 1.0) == 0.0);
    CHECK(cdf_snr(1e280, q, 1.0) == doctest::Approx(1.0));
    CHECK(cdf_snr(1e-280, q, 1.0) >= 0.0);
}

TEST_CASE("cdf_snr scaling law in rho") {
    const BranchParams p(0.7, 1.9);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const double g = std::exp(-6.0 + 12.0 * detail::open_unit(rng));
        const double c = std::exp(-3.0 + 6.0 * detail::open_unit(rng));
        const double lhs = cdf_snr(g, p, 2.5);
        const double rhs = cdf_snr(c * g, p, c * 2.5);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("cdf_snr monotone on random grids") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const BranchParams p(0.1 + 3.0 * detail::open_unit(rng), 0.2 + 4.0 * detail::open_unit(rng));
        const double rho = std::exp(-2.0 + 8.0 * detail::open_unit(rng));
        double prev = 0.0, g = 0.0;
        for (int i = 0; i < 40; ++i) {
            g += 0.3 * std::exp(2.0 * detail::open_unit(rng));
            const double f = cdf_snr(g, p, rho);
            CHECK(f >= prev);
            prev = f;
        }
    }
}

TEST_CASE("pdf_snr values, normalization and finite differences") {
    CHECK(pdf_snr(1.0, BranchParams(1.0, 1.0), 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(pdf_snr(0.0, BranchParams(1.0, 1.0), 1.0), std::domain_error);

    const BranchParams p(0.9724, 2.3311);
    const double rho = 10.0;
    const QuadResult q = integrate_semi_infinite([&](double g) { return pdf_snr(g, p, rho); },
                                                 rho * p.alpha);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));

    // pdf equals the central finite difference of the cdf
    const double h = 1e-5;
    for (double g : {0.12, 2.0, 9.7, 88.0}) {
        const double fd = (cdf_snr(g + h, p, rho) - cdf_snr(g - h, p, rho)) / (2.0 * h);
        CHECK(std::abs(fd - pdf_snr(g, p, rho)) < 1e-6);
    }
}

TEST_CASE("quantile inverts the cdf") {
    const BranchParams p(1.0, 2.0);
    CHECK(quantile_snr(0.5, p, 3.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(quantile_snr(0.8, p, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(quantile_snr(0.0, p, 1.0), std::domain_error);
    CHECK_THROWS_AS(quantile_snr(1.0, p, 1.0), std::domain_error);

    const BranchParams q(0.63, 3.7);
    for (int i = 1; i <= 99; ++i) {
        const double u = i / 100.0;
        const double g = quantile_snr(u, q, 5.0);
        CHECK(cdf_snr(g, q, 5.0) == doctest::Approx(u).epsilon(1e-12));
    }
}

TEST_CASE("inverse-transform sampling matches the distribution") {
    const BranchParams p(0.9724, 2.3311);
    const double rho = 1.0;
    const int n = 1'000'000;
    std::mt19937_64 rng(12345);
    std::vector<double> xs(n);
    for (double& x : xs) x = sample_snr(rng, p, rho);
    std::sort(xs.begin(), xs.end());

    // Kolmogorov-Smirnov statistic against the closed-form CDF
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = cdf_snr(xs[i], p, rho);
        ks = std::max(ks, std::abs((i + 1.0) / n - f));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    CHECK(ks < 0.002);

    const double med = 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
    CHECK(med == doctest::Approx(rho * p.alpha).epsilon(0.01));
}

TEST_CASE("sampling is deterministic for a fixed seed") {
    const BranchParams p(1.3, 2.0);
    std::mt19937_64 a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(sample_snr(a, p, 2.0) == sample_snr(b, p, 2.0));
}

TEST_CASE("branch moments and the divergence guard") {
    CHECK(moment_snr(BranchParams(1.0, 2.0), 1.0, 1.0) == doctest::Approx(kPi / 2.0).epsilon(1e-13));
    CHECK(moment_snr(BranchParams(0.5, 3.0), 2.0, 0.0) == 1.0);
    CHECK_THROWS_AS(moment_snr(BranchParams(1.0, 2.0), 1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(moment_snr(BranchParams(1.0, 2.0), 1.0, 2.5), std::domain_error);
    CHECK_THROWS_AS(moment_snr(BranchParams(1.0, 2.0), 1.0, -2.0), std::domain_error);

    // sample mean vs analytic first moment
    const BranchParams p(0.9724, 2.3311);
    std::mt19937_64 rng(99);
    double sum = 0.0;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) sum += sample_snr(rng, p, 2.0);
    const double mean = sum / n;
    const double exact = moment_snr(p, 2.0, 1.0);
    CHECK(mean == doctest::Approx(exact).epsilon(0.05));
}
