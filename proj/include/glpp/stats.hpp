#pragma once

// Empirical-distribution machinery: CDFs, one- and two-sample
// Kolmogorov-Smirnov tests with asymptotic p-values, moments and histograms.
// Everything here is pure over immutable SampleSets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "glpp/sample_set.hpp"

namespace glpp {

// Survival function of the Kolmogorov distribution,
//   Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2),
// truncated once a term falls below 1e-12. Valid for the n >= 50 regime the
// tests here are used in.
inline double kolmogorov_sf(double x) {
    if (!(x > 0.0)) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 100000; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * k * x * x);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline double kolmogorov_cdf(double x) { return 1.0 - kolmogorov_sf(x); }

// c(alpha) with Q(c) = alpha, by bisection (Q is strictly decreasing).
inline double kolmogorov_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("kolmogorov_critical: alpha must be in (0,1)");
    double lo = 1e-8, hi = 8.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_sf(mid) > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct RejectDecision {
    double alpha = 0.0;
    bool reject = false;
};

struct KsResult {
    double statistic = 0.0; // sup-distance D in [0,1]
    double p_value = 1.0;   // asymptotic Kolmogorov p-value
    std::size_t n1 = 0;
    std::optional<std::size_t> n2; // absent for one-sample tests
    std::optional<RejectDecision> reject_at;
};

namespace detail {

inline std::optional<RejectDecision> decide(double p, std::optional<double> alpha) {
    if (!alpha) return std::nullopt;
    return RejectDecision{*alpha, p < *alpha};
}

} // namespace detail

// Right-continuous empirical CDF, queryable at any real.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::shared_ptr<const std::vector<double>> sorted)
        : sorted_(std::move(sorted)) {}

    double operator()(double x) const {
        const auto& v = *sorted_;
        const auto it = std::upper_bound(v.begin(), v.end(), x);
        return static_cast<double>(it - v.begin()) / static_cast<double>(v.size());
    }

    std::size_t size() const { return sorted_->size(); }

private:
    std::shared_ptr<const std::vector<double>> sorted_;
};

inline EmpiricalCdf empirical_cdf(const SampleSet& set) {
    return EmpiricalCdf(std::make_shared<const std::vector<double>>(set.sorted()));
}

// One-sample KS against an analytic CDF. The CDF is checked for range and
// monotonicity on the sample points as it is evaluated.
template <class Cdf>
KsResult ks_one_sample(const SampleSet& set, Cdf&& cdf, std::optional<double> alpha = std::nullopt) {
    const auto& x = set.sorted();
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        if (!(f >= -1e-12 && f <= 1.0 + 1e-12))
            throw std::invalid_argument("ks_one_sample: cdf value outside [0,1]");
        if (f < prev - 1e-12)
            throw std::invalid_argument("ks_one_sample: cdf not non-decreasing on sample points");
        prev = std::max(prev, f);
        const double i1 = static_cast<double>(i + 1);
        d = std::max({d, i1 / n - f, f - static_cast<double>(i) / n});
    }
    KsResult r;
    r.statistic = d;
    r.n1 = x.size();
    r.p_value = kolmogorov_sf(std::sqrt(n) * d);
    r.reject_at = detail::decide(r.p_value, alpha);
    return r;
}

// Two-sample KS: D = sup |F_a - F_b| over the pooled points, ties handled by
// advancing both sides through equal values before comparing.
inline KsResult ks_two_sample(const SampleSet& a, const SampleSet& b,
                              std::optional<double> alpha = std::nullopt) {
    const auto& xa = a.sorted();
    const auto& xb = b.sorted();
    const double na = static_cast<double>(xa.size());
    const double nb = static_cast<double>(xb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xa.size() || j < xb.size()) {
        const double v = (i < xa.size() && (j >= xb.size() || xa[i] <= xb[j])) ? xa[i] : xb[j];
        while (i < xa.size() && xa[i] == v) ++i;
        while (j < xb.size() && xb[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult r;
    r.statistic = d;
    r.n1 = xa.size();
    r.n2 = xb.size();
    r.p_value = kolmogorov_sf(std::sqrt(na * nb / (na + nb)) * d);
    r.reject_at = detail::decide(r.p_value, alpha);
    return r;
}

// Critical sup-distance for the two-sample test at level alpha.
inline double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha) {
    const double c = kolmogorov_critical(alpha);
    return c * std::sqrt((static_cast<double>(n1) + static_cast<double>(n2)) /
                         (static_cast<double>(n1) * static_cast<double>(n2)));
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0; // unbiased (n-1 denominator)
    double skewness = 0.0; // g1 = m3 / m2^{3/2}
    double se_mean = 0.0;
    double se_variance = 0.0; // delta method, sqrt((m4 - m2^2)/n)
    double se_skewness = 0.0; // normal-theory approximation sqrt(6/n)
};

inline Moments moments(const SampleSet& set) {
    const auto& x = set.values();
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) throw std::invalid_argument("moments: need at least two samples");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    Moments out;
    out.mean = mean;
    out.variance = m2 * n / (n - 1.0);
    out.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    out.se_mean = std::sqrt(m2 / n);
    out.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    out.se_skewness = std::sqrt(6.0 / n);
    return out;
}

struct BinSpec {
    enum class Mode { count, width };
    Mode mode = Mode::count;
    std::size_t bins = 0;
    double width = 0.0;

    static BinSpec by_count(std::size_t k) { return {Mode::count, k, 0.0}; }
    static BinSpec by_width(double w) { return {Mode::width, 0, w}; }
};

struct HistogramBin {
    double center = 0.0;
    std::size_t count = 0;
    double density = 0.0;
};

struct Histogram {
    double lo = 0.0;
    double bin_width = 0.0;
    std::vector<HistogramBin> bins;
};

// Fixed-width histogram over [min, max]; densities integrate to one. A
// degenerate range (all samples equal) falls back to unit bin width.
inline Histogram histogram(const SampleSet& set, const BinSpec& spec) {
    const double lo = set.min();
    const double range = set.max() - set.min();
    std::size_t nbins = 0;
    double width = 0.0;
    switch (spec.mode) {
        case BinSpec::Mode::count:
            if (spec.bins == 0) throw std::invalid_argument("histogram: zero bins");
            nbins = spec.bins;
            width = range > 0.0 ? range / static_cast<double>(nbins) : 1.0;
            break;
        case BinSpec::Mode::width:
            if (!(spec.width > 0.0)) throw std::invalid_argument("histogram: non-positive bin width");
            width = spec.width;
            nbins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / width)));
            break;
    }
    Histogram h;
    h.lo = lo;
    h.bin_width = width;
    h.bins.resize(nbins);
    for (std::size_t b = 0; b < nbins; ++b)
        h.bins[b].center = lo + (static_cast<double>(b) + 0.5) * width;
    for (double v : set.values()) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= nbins) b = nbins - 1; // value at the upper edge
        ++h.bins[b].count;
    }
    const double n = static_cast<double>(set.size());
    for (auto& bin : h.bins)
        bin.density = static_cast<double>(bin.count) / (n * width);
    return h;
}

} // namespace glpp
