#pragma once

// Digamma, second polygamma and the Airy function Ai with its derivative.
// All routines are plain double-precision series/asymptotics; accuracy
// targets and the cross-validation of the two Airy branches live in the
// test suite.

#include <cmath>
#include <stdexcept>

namespace glpp {

namespace consts {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double ln2 = 0.69314718055994530942;
inline constexpr double zeta3 = 1.20205690315959428540;
} // namespace consts

// Psi(x) = Gamma'(x)/Gamma(x) for x > 0, by recurrence shift to x >= 10 and
// the Bernoulli asymptotic series; absolute error below 1e-12 on [0.1, 100].
inline double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: x must be positive");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/(12x^2) - 1/(120x^4) + 1/(252x^6) - 1/(240x^8) + 1/(132x^10) - 691/(32760x^12)
    const double tail =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
    return shift + std::log(x) - 0.5 * inv - tail;
}

// Psi''(x) = -2 sum_{k>=0} (x+k)^{-3} for x > 0: direct sum until the
// argument passes 32, then an Euler-Maclaurin tail.
inline double polygamma2(double x) {
    if (!(x > 0.0)) throw std::domain_error("polygamma2: x must be positive");
    double direct = 0.0;
    while (x < 32.0) {
        direct += 1.0 / (x * x * x);
        x += 1.0;
    }
    const double iy = 1.0 / x;
    const double iy2 = iy * iy;
    const double iy3 = iy2 * iy;
    const double tail = 0.5 * iy2 + 0.5 * iy3 + 0.25 * iy2 * iy2 - (1.0 / 12.0) * iy3 * iy3;
    return -2.0 * (direct + tail);
}

struct AiryValue {
    double ai = 0.0;
    double ai_prime = 0.0;
};

namespace detail {

inline constexpr double airy_ai_zero = 0.35502805388781723926;   // 3^{-2/3}/Gamma(2/3)
inline constexpr double airy_aip_zero = -0.25881940379280679840; // -3^{-1/3}/Gamma(1/3)

// Maclaurin solution of y'' = x y: Ai = Ai(0) f + Ai'(0) g with
// f = sum c_k x^{3k},  c_k = c_{k-1}/((3k)(3k-1)),
// g = sum d_k x^{3k+1}, d_k = d_{k-1}/((3k+1)(3k)).
inline AiryValue airy_maclaurin(double x) {
    if (x == 0.0) return {airy_ai_zero, airy_aip_zero};
    const double x3 = x * x * x;
    double term_f = 1.0, term_g = x;
    double f = term_f, g = term_g;
    double fp = 0.0, gp = 1.0;
    for (int k = 1; k < 240; ++k) {
        term_f *= x3 / ((3.0 * k) * (3.0 * k - 1.0));
        term_g *= x3 / ((3.0 * k + 1.0) * (3.0 * k));
        f += term_f;
        g += term_g;
        fp += term_f * (3.0 * k) / x;
        gp += term_g * (3.0 * k + 1.0) / x;
        if (std::abs(term_f) + std::abs(term_g) < 1e-18 * (std::abs(f) + std::abs(g)) && k > 3) break;
    }
    return {airy_ai_zero * f + airy_aip_zero * g, airy_ai_zero * fp + airy_aip_zero * gp};
}

// Poincare coefficients u_k (and v_k = (6k+1)/(1-6k) u_k) of the large-|x|
// expansions; the recurrence below is u_{k+1}/u_k.
inline double airy_u_ratio(int k) {
    return ((6.0 * k + 1.0) * (6.0 * k + 3.0) * (6.0 * k + 5.0)) / (216.0 * (k + 1.0) * (2.0 * k + 1.0));
}

inline AiryValue airy_asymptotic_pos(double x) {
    const double sx = std::sqrt(x);
    const double zeta = (2.0 / 3.0) * x * sx;
    double term = 1.0;       // u_k / zeta^k
    double sum_u = 1.0, sum_v = 1.0;
    double prev = 1e300;
    for (int k = 0; k < 80; ++k) {
        term *= airy_u_ratio(k) / zeta;
        if (std::abs(term) >= prev) break; // smallest-term truncation
        prev = std::abs(term);
        const double sign = (k % 2 == 0) ? -1.0 : 1.0; // (-1)^{k+1}
        sum_u += sign * term;
        sum_v += sign * term * (6.0 * (k + 1.0) + 1.0) / (1.0 - 6.0 * (k + 1.0));
        if (std::abs(term) < 1e-18) break;
    }
    const double pref = std::exp(-zeta) / (2.0 * consts::sqrt_pi);
    const double x4 = std::sqrt(sx);
    return {pref * sum_u / x4, -pref * x4 * sum_v};
}

inline AiryValue airy_asymptotic_neg(double x) {
    const double z = -x;
    const double sz = std::sqrt(z);
    const double zeta = (2.0 / 3.0) * z * sz;
    // split sum_k (-1)^k u_k zeta^{-k} into even/odd parts (pair index p,
    // sign (-1)^p), same for v_k
    double ue = 1.0, uo = 0.0, ve = 1.0, vo = 0.0;
    double term = 1.0;
    double prev = 1e300;
    for (int k = 1; k < 80; ++k) {
        term *= airy_u_ratio(k - 1) / zeta;
        if (std::abs(term) >= prev) break;
        prev = std::abs(term);
        const double vterm = term * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            ue += sign * term;
            ve += sign * vterm;
        } else {
            uo += sign * term;
            vo += sign * vterm;
        }
        if (std::abs(term) < 1e-18) break;
    }
    const double ang = zeta - 0.25 * consts::pi;
    const double c = std::cos(ang);
    const double s = std::sin(ang);
    const double z4 = std::sqrt(sz);
    return {(c * ue + s * uo) / (consts::sqrt_pi * z4), (s * ve - c * vo) * z4 / consts::sqrt_pi};
}

// Branch switch points. The positive seam at 4.5 keeps both branches within
// ~5e-11 of each other (the function there is ~3e-4, so the absolute error
// is far smaller); on the negative axis the series stays the more accurate
// branch until the oscillatory expansion catches up near -6.8.
inline constexpr double airy_switch_pos = 4.5;
inline constexpr double airy_switch_neg = -6.8;

} // namespace detail

// Ai(x) and Ai'(x). Values underflow to zero for large positive x (the
// exponential factor saturates); arguments are expected in |x| <= 50.
inline AiryValue airy(double x) {
    if (x > detail::airy_switch_pos) return detail::airy_asymptotic_pos(x);
    if (x < detail::airy_switch_neg) return detail::airy_asymptotic_neg(x);
    return detail::airy_maclaurin(x);
}

inline double airy_ai(double x) { return airy(x).ai; }
inline double airy_ai_prime(double x) { return airy(x).ai_prime; }

} // namespace glpp
