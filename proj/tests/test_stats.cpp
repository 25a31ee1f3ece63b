#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "glpp/random.hpp"
#include "glpp/sample_set.hpp"
#include "glpp/stats.hpp"
#include "test_oracles.hpp"

using namespace glpp;

namespace {

SampleSet exp_samples(std::size_t count, std::uint64_t seed, double rate = 1.0) {
    Stream s = derive_stream(seed, 0);
    std::vector<double> v(count);
    for (auto& x : v) x = sample_exponential(s) / rate;
    return SampleSet(std::move(v));
}

SampleSet gumbel_samples(std::size_t count, std::uint64_t seed, double shift = 0.0) {
    Stream s = derive_stream(seed, 0);
    std::vector<double> v(count);
    for (auto& x : v) x = sample_gumbel(s) + shift;
    return SampleSet(std::move(v));
}

} // namespace

TEST_CASE("sample sets validate their contents") {
    CHECK_THROWS_AS(SampleSet(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(SampleSet({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(SampleSet({1.0, INFINITY}), std::invalid_argument);
    const SampleSet s({3.0, 1.0, 2.0});
    CHECK(s.sorted() == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("empirical cdf step values") {
    const SampleSet s({1.0, 2.0, 3.0});
    const auto cdf = empirical_cdf(s);
    CHECK(cdf(2.0) == Catch::Approx(2.0 / 3.0));
    CHECK(cdf(0.5) == 0.0);
    CHECK(cdf(100.0) == 1.0);
    const SampleSet atoms({1.0, 1.0, 1.0});
    CHECK(empirical_cdf(atoms)(1.0) == 1.0);
}

TEST_CASE("one-sample KS on a single median sample") {
    const SampleSet s({0.0});
    const auto ks = ks_one_sample(s, [](double) { return 0.5; });
    CHECK(ks.statistic == Catch::Approx(0.5));
}

TEST_CASE("one-sample KS self-consistency and mismatch detection") {
    const auto set = exp_samples(100000, 555);
    const auto good = ks_one_sample(set, [](double x) { return x > 0 ? 1.0 - std::exp(-x) : 0.0; });
    CHECK(good.p_value > 0.01);

    const auto small = exp_samples(10000, 556);
    const auto bad = ks_one_sample(small, [](double x) { return x > 0 ? 1.0 - std::exp(-2.0 * x) : 0.0; });
    CHECK(bad.p_value < 1e-6);
}

TEST_CASE("one-sample KS rejects a non-monotone cdf") {
    const auto set = exp_samples(100, 557);
    CHECK_THROWS_AS(ks_one_sample(set, [](double x) { return 0.5 - 0.4 * std::sin(10.0 * x); }),
                    std::invalid_argument);
}

TEST_CASE("two-sample KS basics") {
    const auto a = gumbel_samples(5000, 558);
    const auto same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    const auto b = gumbel_samples(10000, 559);
    const auto c = gumbel_samples(10000, 560, 1.0);
    CHECK(ks_two_sample(b, c).p_value < 1e-6);
}

TEST_CASE("KS distance is invariant under a strictly increasing transform") {
    const auto a = gumbel_samples(2000, 561);
    const auto b = gumbel_samples(2000, 562);
    const auto d0 = ks_two_sample(a, b).statistic;
    const auto ea = a.transformed([](double x) { return std::exp(x); });
    const auto eb = b.transformed([](double x) { return std::exp(x); });
    CHECK(ks_two_sample(ea, eb).statistic == d0);
}

TEST_CASE("kolmogorov critical values against an independent inversion") {
    CHECK(kolmogorov_critical(0.001) == Catch::Approx(1.95).margin(0.01));
    for (double alpha : {0.05, 0.01, 0.001}) {
        CHECK(kolmogorov_critical(alpha) ==
              Catch::Approx(oracle::kolmogorov_critical_reference(alpha)).margin(1e-6));
    }
    // classical table anchors
    CHECK(kolmogorov_critical(0.05) == Catch::Approx(1.358).margin(0.001));
    CHECK(kolmogorov_critical(0.01) == Catch::Approx(1.628).margin(0.001));
    // D_crit for the acceptance-scale two-sample test
    CHECK(ks_two_sample_critical(50000, 50000, 0.001) == Catch::Approx(0.0123).margin(0.0002));
}

TEST_CASE("kolmogorov distribution sanity") {
    CHECK(kolmogorov_sf(0.0) == 1.0);
    CHECK(kolmogorov_cdf(0.3) + kolmogorov_sf(0.3) == Catch::Approx(1.0).epsilon(1e-14));
    for (double x : {0.2, 0.5, 0.9, 1.4, 2.2}) {
        CHECK(kolmogorov_sf(x) == Catch::Approx(oracle::kolmogorov_sf_reference(x)).margin(1e-10));
    }
    // monotone decreasing in D
    double prev = 1.0;
    for (double x = 0.05; x < 3.0; x += 0.05) {
        const double q = kolmogorov_sf(x);
        CHECK(q <= prev + 1e-15);
        prev = q;
    }
}

TEST_CASE("moments of degenerate and known sets") {
    const SampleSet zeros({0.0, 0.0, 0.0, 0.0});
    const auto mz = moments(zeros);
    CHECK(mz.mean == 0.0);
    CHECK(mz.variance == 0.0);
    CHECK_THROWS_AS(moments(SampleSet({1.0})), std::invalid_argument);

    const auto exp_set = exp_samples(1000000, 563);
    CHECK(moments(exp_set).mean == Catch::Approx(1.0).margin(0.005));

    const auto gum = gumbel_samples(1000000, 564);
    const double oracle_var = oracle::gumbel_variance_by_quadrature();
    CHECK(oracle_var == Catch::Approx(1.6449340668482264).margin(1e-8));
    CHECK(moments(gum).variance == Catch::Approx(oracle_var).margin(0.01));
}

TEST_CASE("histograms") {
    CHECK_THROWS_AS(histogram(SampleSet({1.0}), BinSpec::by_count(0)), std::invalid_argument);
    CHECK_THROWS_AS(histogram(SampleSet({1.0}), BinSpec::by_width(0.0)), std::invalid_argument);

    const auto single = histogram(SampleSet({2.0}), BinSpec::by_width(0.25));
    REQUIRE(single.bins.size() == 1);
    CHECK(single.bins[0].density == Catch::Approx(4.0));

    // uniform lattice of samples -> flat density
    std::vector<double> grid(10000);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    const auto flat = histogram(SampleSet(std::move(grid)), BinSpec::by_count(10));
    for (const auto& bin : flat.bins) CHECK(bin.density == Catch::Approx(1.0).margin(0.02));

    // densities integrate to one
    const auto gum = gumbel_samples(100000, 565);
    const auto h = histogram(gum, BinSpec::by_count(100));
    double mass = 0.0;
    double peak_density = -1.0;
    double peak_center = 0.0;
    for (const auto& bin : h.bins) {
        mass += bin.density * h.bin_width;
        if (bin.density > peak_density) {
            peak_density = bin.density;
            peak_center = bin.center;
        }
    }
    CHECK(mass == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(peak_center) < 0.1); // Gumbel density mode sits at 0
}
