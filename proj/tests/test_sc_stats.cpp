#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "llsc/quadrature.hpp"
#include "llsc/sc_stats.hpp"

using namespace llsc;

namespace {

ScModel scenario1(double rho) {
    return ScModel({BranchParams(1.0, 2.2), BranchParams(0.98, 2.3), BranchParams(1.1, 2.4)}, rho);
}

ScModel scenario2(int L, double rho) {
    return ScModel(std::vector<BranchParams>(L, BranchParams(0.9724, 2.3311)), rho);
}

double iid_closed_form(double gamma, const ScModel& m) {
    const BranchParams& b = m.branches.front();
    return std::pow(1.0 + std::pow(gamma / (m.rho * b.alpha), -b.beta),
                    -static_cast<double>(m.num_branches()));
}

} // namespace

TEST_CASE("model construction and iid detection") {
    CHECK_THROWS_AS(ScModel({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ScModel({BranchParams(1, 1)}, 0.0), std::invalid_argument);
    CHECK(scenario2(2, 1.0).iid());
    CHECK(!scenario1(1.0).iid());
    // near-equal parameters are not silently treated as i.i.d.
    ScModel nearly({BranchParams(1.0, 2.0), BranchParams(1.0 + 1e-12, 2.0)}, 1.0);
    CHECK(!nearly.iid());
}

TEST_CASE("elementary CDF of the SC output") {
    const ScModel m2 = scenario2(2, 5.0);
    const double med = 5.0 * 0.9724;
    CHECK(cdf_sc_elementary(med, m2) == doctest::Approx(0.25).epsilon(1e-12));

    const ScModel m1({BranchParams(0.7, 1.3)}, 2.0);
    CHECK(cdf_sc_elementary(1.9, m1) == cdf_snr(1.9, m1.branches[0], 2.0));

    // direct product of the three per-branch CDFs
    const ScModel s1 = scenario1(10.0);
    double prod = 1.0;
    for (const BranchParams& b : s1.branches)
        prod *= 1.0 / (1.0 + std::pow(10.0 / (10.0 * b.alpha), -b.beta));
    CHECK(cdf_sc_elementary(10.0, s1) == doctest::Approx(prod).epsilon(1e-14));

    CHECK(cdf_sc_elementary(0.0, s1) == 0.0);
    CHECK_THROWS_AS(cdf_sc_elementary(-1.0, s1), std::domain_error);

    // i.i.d. model follows the closed form
    for (double g : snr_grid(m2, 8))
        CHECK(cdf_sc_elementary(g, m2) == doctest::Approx(iid_closed_form(g, m2)).epsilon(1e-13));
}

TEST_CASE("elementary PDF: product rule, normalization, finite differences") {
    const ScModel m1({BranchParams(0.7, 1.3)}, 2.0);
    CHECK(pdf_sc_elementary(0.9, m1) == pdf_snr(0.9, m1.branches[0], 2.0));
    CHECK_THROWS_AS(pdf_sc_elementary(0.0, m1), std::domain_error);

    const ScModel s1 = scenario1(10.0);
    const QuadResult q = integrate_semi_infinite(
        [&](double g) { return pdf_sc_elementary(g, s1); }, 10.0 * 1.1);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));

    const double h = 1e-5;
    for (double g : {2.0, 9.0, 31.0}) {
        const double fd = (cdf_sc_elementary(g + h, s1) - cdf_sc_elementary(g - h, s1)) / (2 * h);
        CHECK(std::abs(fd - pdf_sc_elementary(g, s1)) < 1e-6);
    }
}

TEST_CASE("H-function CDF path agrees with the elementary product") {
    const ScModel m1({BranchParams(0.9, 2.1)}, 4.0);
    for (double g : {0.5, 3.6, 40.0})
        CHECK(cdf_sc_foxh(g, m1).value ==
              doctest::Approx(cdf_snr(g, m1.branches[0], 4.0)).epsilon(1e-9));

    const ScModel s1 = scenario1(10.0);
    for (double g : snr_grid(s1)) {
        const mb::EvalResult r = cdf_sc_foxh(g, s1);
        CHECK(std::abs(r.value - cdf_sc_elementary(g, s1)) < 1e-8);
        CHECK(r.imag_over_real < 1e-8);
    }

    const ScModel m2 = scenario2(2, db_to_linear(20.0));
    for (double g : snr_grid(m2, 6))
        CHECK(cdf_sc_foxh(g, m2).value == doctest::Approx(iid_closed_form(g, m2)).epsilon(1e-8));
}

TEST_CASE("H-function PDF path agrees with the product rule") {
    const ScModel m1({BranchParams(0.9, 2.1)}, 4.0);
    for (double g : {0.5, 3.6, 40.0})
        CHECK(pdf_sc_foxh(g, m1).value ==
              doctest::Approx(pdf_snr(g, m1.branches[0], 4.0)).epsilon(1e-8));

    const ScModel s1 = scenario1(10.0);
    double geo = 1.0;
    for (const BranchParams& b : s1.branches) geo *= b.alpha;
    const double g_mid = 10.0 * std::cbrt(geo);
    CHECK(pdf_sc_foxh(g_mid, s1).value ==
          doctest::Approx(pdf_sc_elementary(g_mid, s1)).epsilon(1e-7));

    for (double g : snr_grid(s1)) {
        const double rel =
            std::abs(pdf_sc_foxh(g, s1).value - pdf_sc_elementary(g, s1)) / pdf_sc_elementary(g, s1);
        CHECK(rel < 1e-6);
    }
}

TEST_CASE("Meijer G route for the i.i.d. CDF") {
    const ScModel m4 = scenario2(4, 3.0);
    const double med = 3.0 * 0.9724;
    CHECK(cdf_sc_iid_meijer(med, m4) == doctest::Approx(std::pow(0.5, 4)).epsilon(1e-9));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        const double g = med * std::exp(-2.0 + 4.0 * ((rng() >> 11) * 0x1.0p-53));
        CHECK(cdf_sc_iid_meijer(g, m4) == doctest::Approx(iid_closed_form(g, m4)).epsilon(1e-9));
    }

    const ScModel m1 = scenario2(1, 2.0);
    CHECK(cdf_sc_iid_meijer(1.1, m1) ==
          doctest::Approx(cdf_snr(1.1, m1.branches[0], 2.0)).epsilon(1e-9));

    CHECK_THROWS_AS(cdf_sc_iid_meijer(1.0, scenario1(1.0)), std::invalid_argument);
}

TEST_CASE("asymptotic constants") {
    const auto s1 = asymptotic_constants(scenario1(1.0));
    CHECK(s1.s_beta == doctest::Approx(6.9).epsilon(1e-14));
    const auto s4 = asymptotic_constants(scenario2(4, 1.0));
    CHECK(s4.s_beta == doctest::Approx(9.3244).epsilon(1e-12));
    const auto one = asymptotic_constants(ScModel({BranchParams(1.0, 1.7)}, 1.0));
    CHECK(one.phi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.s_beta == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("asymptotic CDF/PDF behaviour") {
    const ScModel s1 = scenario1(db_to_linear(60.0));
    CHECK(cdf_sc_asymptotic(0.0, s1) == 0.0);

    // exact over asymptotic ratio approaches one, monotonically in rho
    const double gth = 10.0;
    double prev = 0.0;
    for (double db : {30.0, 40.0, 50.0, 60.0}) {
        const ScModel m = scenario1(db_to_linear(db));
        const double ratio = cdf_sc_elementary(gth, m) / cdf_sc_asymptotic(gth, m);
        CHECK(ratio > prev);
        prev = ratio;
    }
    CHECK(prev > 0.99);
    CHECK(prev < 1.0 + 1e-9);
    CHECK(cdf_sc_elementary(gth, s1) / cdf_sc_asymptotic(gth, s1) ==
          doctest::Approx(1.0).epsilon(0.01));

    // asymptotic PDF is the derivative of the asymptotic CDF
    const ScModel m = scenario1(100.0);
    const double h = 1e-6;
    for (double g : {0.5, 2.0}) {
        const double fd = (cdf_sc_asymptotic(g + h, m) - cdf_sc_asymptotic(g - h, m)) / (2 * h);
        CHECK(fd == doctest::Approx(pdf_sc_asymptotic(g, m)).epsilon(1e-6));
    }
}

TEST_CASE("adding a branch lowers the CDF pointwise") {
    std::mt19937_64 rng(31);
    std::vector<BranchParams> branches{BranchParams(1.0, 2.2)};
    for (int add = 0; add < 3; ++add) {
        const ScModel small(branches, 7.0);
        branches.push_back(BranchParams(0.6 + (rng() >> 11) * 0x1.0p-53,
                                        1.5 + 2.0 * ((rng() >> 11) * 0x1.0p-53)));
        const ScModel big(branches, 7.0);
        for (double g : snr_grid(big, 10))
            CHECK(cdf_sc_elementary(g, big) <= cdf_sc_elementary(g, small) + 1e-15);
    }
}

TEST_CASE("snr grid convention") {
    const ScModel s1 = scenario1(10.0);
    const std::vector<double> grid = snr_grid(s1);
    CHECK(grid.size() == 20);
    CHECK(grid.front() == doctest::Approx(0.01 * 10.0 * 1.1));
    CHECK(grid.back() == doctest::Approx(100.0 * 10.0 * 1.1));
}
