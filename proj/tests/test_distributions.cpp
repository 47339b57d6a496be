#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sphuni/distributions.hpp"

using namespace sphuni;

TEST_CASE("chi-square CDF against quadrature") {
    CHECK(chi2_cdf(0.0, 3) == 0.0);
    CHECK(chi2_cdf(-1.0, 3) == 0.0);
    CHECK(chi2_cdf(7.8147, 3) == doctest::Approx(0.95).epsilon(1e-4));
    CHECK(chi2_cdf(15.5073, 8) == doctest::Approx(0.95).epsilon(1e-4));

    for (int dof : {1, 2, 3, 5, 8, 12})
        for (double x : {0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 20.0, 40.0})
            CHECK(chi2_cdf(x, dof) == doctest::Approx(oracles::chi2_cdf_quadrature(x, dof)).epsilon(1e-9));
}

TEST_CASE("chi-square quantiles") {
    CHECK(chi2_quantile(0.95, 3) == doctest::Approx(7.8147).epsilon(1e-4));
    CHECK(chi2_quantile(0.95, 5) == doctest::Approx(11.0705).epsilon(1e-4));
    CHECK(chi2_quantile(0.95, 8) == doctest::Approx(15.5073).epsilon(1e-4));
    CHECK(chi2_quantile(0.5, 2) == doctest::Approx(2.0 * std::numbers::ln2).epsilon(1e-9));

    for (int dof : {1, 3, 8})
        for (double p : {0.05, 0.5, 0.9, 0.95, 0.999})
            CHECK(chi2_quantile(p, dof) == doctest::Approx(oracles::chi2_quantile_bisection(p, dof)).epsilon(1e-6));

    CHECK_THROWS_AS(chi2_quantile(0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(chi2_quantile(1.0, 3), std::invalid_argument);
}

TEST_CASE("quantile and CDF are inverse") {
    for (int dof = 1; dof <= 12; ++dof)
        for (double x = 0.5; x <= 40.0; x += 0.5) {
            const double p = chi2_cdf(x, dof);
            if (p <= 0.0 || p >= 1.0) continue;
            CHECK(chi2_quantile(p, dof) == doctest::Approx(x).epsilon(1e-7));
        }
}

TEST_CASE("noncentral chi-square series") {
    // central reduction
    for (double x : {1.0, 5.0, 12.0}) CHECK(noncentral_chi2_cdf(x, 5, 0.0) == chi2_cdf(x, 5));

    // Watson tau = 6 noncentrality: strictly between 0 and the central value
    const double xi = 4.0 * std::pow(6.0, 4) / 45.0;
    const double p = noncentral_chi2_cdf(11.0705, 5, xi);
    CHECK(p > 0.0);
    CHECK(p < 0.95);

    // stochastic ordering in xi
    for (int dof : {3, 8})
        for (double x : {5.0, 15.0, 30.0}) {
            double prev = noncentral_chi2_cdf(x, dof, 0.0);
            for (double grid_xi : {0.5, 2.0, 8.0, 32.0, 128.0, 512.0}) {
                const double cur = noncentral_chi2_cdf(x, dof, grid_xi);
                CHECK(cur <= prev + 1e-12);
                prev = cur;
            }
        }

    CHECK_THROWS_AS(noncentral_chi2_cdf(1.0, 3, -0.5), std::invalid_argument);
}

TEST_CASE("mixture CDF: unit-weight collapse") {
    ChiSquareMixture both{{{3, 0.0, 1.0}, {5, 0.0, 1.0}}};
    CHECK(mixture_cdf(15.5073, both) == doctest::Approx(0.95).epsilon(1e-4));

    ChiSquareMixture single{{{3, 0.0, 1.0}}};
    for (double x : {0.5, 3.0, 9.0}) CHECK(mixture_cdf(x, single) == chi2_cdf(x, 3));

    // all-central sums equal the chi-square at the pooled dof
    ChiSquareMixture pooled{{{1, 0.0, 1.0}, {2, 0.0, 1.0}, {4, 0.0, 1.0}}};
    for (double x : {1.0, 6.0, 14.0, 25.0})
        CHECK(mixture_cdf(x, pooled) == doctest::Approx(chi2_cdf(x, 7)).epsilon(1e-9));

    // noncentralities pool as well
    ChiSquareMixture shifted{{{3, 1.5, 1.0}, {5, 2.5, 1.0}}};
    for (double x : {4.0, 12.0, 20.0})
        CHECK(mixture_cdf(x, shifted) == doctest::Approx(noncentral_chi2_cdf(x, 8, 4.0)).epsilon(1e-12));

    CHECK_THROWS_AS(mixture_cdf(1.0, ChiSquareMixture{}), std::invalid_argument);
}

TEST_CASE("mixture CDF: Imhof path against the scaling identity") {
    // sum of chi-squares all scaled by c has CDF F_chi2(x / c)
    for (double c : {0.5, 2.0}) {
        ChiSquareMixture law{{{3, 0.0, c}, {5, 0.0, c}}};
        for (double x : {2.0, 8.0, 16.0, 30.0})
            CHECK(mixture_cdf(x, law) == doctest::Approx(chi2_cdf(x / c, 8)).epsilon(1e-6).scale(1.0));
    }
    // noncentral scaling
    ChiSquareMixture law{{{3, 2.0, 1.5}, {5, 1.0, 1.5}}};
    for (double x : {5.0, 15.0, 30.0})
        CHECK(mixture_cdf(x, law) == doctest::Approx(noncentral_chi2_cdf(x / 1.5, 8, 3.0)).epsilon(1e-6).scale(1.0));
}
