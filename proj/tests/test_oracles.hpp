#pragma once

// Test-only oracles: plain numerical routines written against <cmath> alone,
// independent of the library implementations they are used to check.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// Composite Simpson rule; panels is halved-interval count (must be even).
template <class F>
double integrate(F&& f, double a, double b, int panels = 20000) {
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

inline double gumbel_pdf(double y) { return std::exp(-y - std::exp(-y)); }
inline double gumbel_cdf(double y) { return std::exp(-std::exp(-y)); }

// mean and variance of the standard Gumbel by quadrature (tails beyond
// [-10, 40] carry < 1e-14 of the mass)
inline double gumbel_mean_by_quadrature() {
    return integrate([](double y) { return y * gumbel_pdf(y); }, -10.0, 40.0, 100000);
}
inline double gumbel_variance_by_quadrature() {
    const double m = gumbel_mean_by_quadrature();
    return integrate([](double y) { return y * y * gumbel_pdf(y); }, -10.0, 40.0, 100000) - m * m;
}

// mean of the inverse-gamma law with shape 3: int (1/x) x^2 e^{-x}/Gamma(3) dx
inline double inverse_gamma3_mean_by_quadrature() {
    return integrate([](double x) { return x * std::exp(-x) / 2.0; }, 0.0, 60.0, 100000);
}

// digamma via the classical series psi(x) = -euler_gamma +
// sum_{k>=0} (1/(k+1) - 1/(k+x)), with an integral tail correction.
inline double digamma_by_series(double x, long terms = 2000000) {
    const double euler_gamma_50 = 0.57721566490153286061;
    double s = 0.0;
    for (long k = terms - 1; k >= 0; --k) s += 1.0 / (k + 1.0) - 1.0 / (k + x);
    const double tail = std::log((terms + x) / (terms + 1.0)); // ~ (x-1)/K with O(K^-2) error
    return -euler_gamma_50 + s + tail;
}

// psi'' via plain partial sums of -2 sum (x+k)^{-3}; error ~ K^{-2}.
inline double polygamma2_by_partial_sums(double x, long terms = 2000000) {
    double s = 0.0;
    for (long k = terms - 1; k >= 0; --k) {
        const double t = x + k;
        s += 1.0 / (t * t * t);
    }
    return -2.0 * s;
}

// Kolmogorov survival series, coded independently of the library version.
inline double kolmogorov_sf_reference(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 300; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 ? term : -term);
        if (term < 1e-14) break;
    }
    double q = 2.0 * sum;
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return q;
}

inline double kolmogorov_critical_reference(double alpha) {
    double lo = 1e-6, hi = 6.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_sf_reference(mid) > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle
