#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "glpp/asymptotics.hpp"
#include "test_oracles.hpp"

using namespace glpp;

TEST_CASE("fluctuation constants reproduce the stated decimals") {
    const auto fc = fluctuation_constants();
    CHECK(std::round(fc.centering * 1000.0) / 1000.0 == 3.927);
    CHECK(std::round(fc.scale * 1000.0) / 1000.0 == 2.563);
    CHECK(fc.centering == Catch::Approx(3.9270200520428470).margin(1e-12));
    CHECK(fc.scale == Catch::Approx(2.5626208431855407).margin(1e-12));
}

TEST_CASE("closed-form constants agree with the digamma route") {
    const auto fc = fluctuation_constants();
    CHECK(std::abs(-2.0 * digamma(0.5) - fc.centering) < 1e-12);
    CHECK(std::abs(std::cbrt(-polygamma2(0.5)) - fc.scale) < 1e-12);
    // and with the independent series oracle
    CHECK(std::abs(-2.0 * oracle::digamma_by_series(0.5) - fc.centering) < 1e-8);
    CHECK(std::abs(std::cbrt(-oracle::polygamma2_by_partial_sums(0.5)) - fc.scale) < 1e-9);
}

TEST_CASE("gumbel normalizers") {
    const auto n10 = gumbel_normalizers(DistributionSpec::exponential(), 10);
    CHECK(n10.c_n == Catch::Approx(2.302585092994046).margin(1e-15));
    CHECK(n10.sigma_n == 1.0);
    const auto n1 = gumbel_normalizers(DistributionSpec::exponential(), 1);
    CHECK(n1.c_n == 0.0);
    CHECK(n1.sigma_n == 1.0);
    CHECK_THROWS_AS(gumbel_normalizers(DistributionSpec::gumbel(), 5), feature_error);
    CHECK_THROWS_AS(gumbel_normalizers(DistributionSpec::exponential(), 0), std::invalid_argument);
    try {
        gumbel_normalizers(DistributionSpec::gumbel(), 5);
    } catch (const feature_error& e) {
        CHECK(std::string(e.what()).find("domain of attraction") != std::string::npos);
    }
}

TEST_CASE("tracy-widom cdf tails") {
    const TracyWidomEvaluator tw;
    CHECK(tw.cdf(-10.0) < 1e-4);
    CHECK(tw.cdf(6.0) > 1.0 - 1e-6);
}

TEST_CASE("tracy-widom cdf is monotone and stable under order doubling") {
    const TracyWidomEvaluator tw;
    double prev = -1.0;
    for (double r = -6.0; r <= 4.0 + 1e-9; r += 0.1) {
        const double f40 = tw.cdf_at_order(r, 40);
        const double f80 = tw.cdf_at_order(r, 80);
        REQUIRE(std::abs(f40 - f80) < 1e-8);
        REQUIRE(f80 >= prev - 1e-12);
        REQUIRE(f80 >= 0.0);
        REQUIRE(f80 <= 1.0);
        prev = f80;
    }
}

TEST_CASE("tracy-widom regression anchors") {
    const TracyWidomEvaluator tw;
    // frozen from a doubled-order evaluation of this determinant, accurate
    // to well below the asserted margins
    CHECK(tw.cdf(0.0) == Catch::Approx(0.9693728).margin(1e-6));
    CHECK(tw.cdf(-2.0) == Catch::Approx(0.4132241).margin(1e-6));
    CHECK(tw.cdf(-4.0) == Catch::Approx(0.0032955).margin(1e-6));
}

TEST_CASE("tracy-widom mean by numerical integration") {
    const TracyWidomEvaluator tw;
    const double mean = tw.mean();
    CHECK(mean == Catch::Approx(-1.771).margin(0.001));
    // published value of the GUE Tracy-Widom mean
    CHECK(mean == Catch::Approx(-1.7710868074).margin(5e-4));
}

TEST_CASE("tracy-widom convergence error surfaces") {
    const TracyWidomEvaluator strict(8, 1e-30, 16);
    CHECK_THROWS_AS(strict.cdf(-2.0), convergence_error);
}
