#pragma once

// Closed-form constants of the diagonal passage-time limit and a numerical
// evaluator for the Tracy-Widom GUE distribution F_GUE.
//
// F_GUE(r) is computed as the Fredholm determinant det(I - K_Airy) on
// L^2(r, inf) by the Nystrom method: Gauss-Legendre nodes t in (0,1) are
// mapped to x = r + t/(1-t), the Airy kernel is symmetrized with the mapped
// weights, and the determinant of the resulting matrix is taken. Order
// doubling gives a built-in error estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "glpp/errors.hpp"
#include "glpp/random.hpp"
#include "glpp/special_functions.hpp"

namespace glpp {

// Law-of-large-numbers centering (per diagonal step) and the n^{1/3}
// fluctuation scale of the diagonal Gumbel LPP passage time:
//   centering = -2 Psi(1/2) = 2*euler_gamma + 4*ln 2
//   scale     = (-Psi''(1/2))^{1/3} = (14 zeta(3))^{1/3}
struct FluctuationConstants {
    double centering = 0.0;
    double scale = 0.0;
};

inline FluctuationConstants fluctuation_constants() {
    return {2.0 * consts::euler_gamma + 4.0 * consts::ln2, std::cbrt(14.0 * consts::zeta3)};
}

// Extreme-value normalizers C_N, sigma_N with (max_i X_i - C_N)/sigma_N
// converging to the standard Gumbel. Implemented for Exp(1) only, where
// C_N = log N and sigma_N = 1 exactly.
struct GumbelNormalizers {
    double c_n = 0.0;
    double sigma_n = 1.0;
    DistributionSpec dist;
    std::uint32_t copies = 1;
};

inline GumbelNormalizers gumbel_normalizers(const DistributionSpec& dist, std::uint32_t copies) {
    if (copies == 0) throw std::invalid_argument("gumbel_normalizers: N must be >= 1");
    if (dist.kind != DistKind::exponential)
        throw feature_error(
            "gumbel_normalizers: only the exponential law is tabulated; other distributions in the "
            "Gumbel domain of attraction are an extension point");
    return {std::log(static_cast<double>(copies)), 1.0, dist, copies};
}

namespace detail {

struct QuadratureRule {
    std::vector<double> node;   // in (0,1)
    std::vector<double> weight; // positive, sums to 1
};

// Gauss-Legendre nodes/weights on (-1,1) by Newton iteration on P_n, then
// mapped to (0,1).
inline QuadratureRule gauss_legendre_01(unsigned order) {
    QuadratureRule rule;
    rule.node.resize(order);
    rule.weight.resize(order);
    const unsigned half = (order + 1) / 2;
    for (unsigned i = 0; i < half; ++i) {
        double x = std::cos(consts::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (unsigned k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.node[i] = 0.5 * (1.0 - x); // descending x -> ascending node
        rule.weight[i] = 0.5 * w;
        rule.node[order - 1 - i] = 0.5 * (1.0 + x);
        rule.weight[order - 1 - i] = 0.5 * w;
    }
    return rule;
}

// Airy kernel (Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y) with the diagonal limit
// Ai'(x)^2 - x Ai(x)^2 for |x - y| < 1e-6.
inline double airy_kernel(double x, const AiryValue& ax, double y, const AiryValue& ay) {
    if (std::abs(x - y) < 1e-6) {
        const double mid = 0.5 * (x + y);
        const AiryValue a = airy(mid);
        return a.ai_prime * a.ai_prime - mid * a.ai * a.ai;
    }
    return (ax.ai * ay.ai_prime - ax.ai_prime * ay.ai) / (x - y);
}

} // namespace detail

// Immutable F_GUE evaluator. Construction precomputes the quadrature rules
// for the base order and its doublings up to max_order; queries are pure and
// safe to run concurrently.
class TracyWidomEvaluator {
public:
    explicit TracyWidomEvaluator(unsigned order = 40, double tolerance = 1e-8, unsigned max_order = 320)
        : base_order_(order), tolerance_(tolerance) {
        if (order == 0) throw std::invalid_argument("TracyWidomEvaluator: order must be >= 1");
        if (!(tolerance > 0.0)) throw std::invalid_argument("TracyWidomEvaluator: tolerance must be positive");
        for (unsigned q = order; q <= max_order; q *= 2) rules_.push_back(detail::gauss_legendre_01(q));
        if (rules_.size() < 2)
            throw std::invalid_argument("TracyWidomEvaluator: max_order must allow at least one doubling");
    }

    unsigned base_order() const noexcept { return base_order_; }
    double tolerance() const noexcept { return tolerance_; }

    // Determinant at a fixed quadrature order (no error control).
    double cdf_at_order(double r, unsigned order) const {
        for (const auto& rule : rules_)
            if (rule.node.size() == order) return determinant(r, rule);
        return determinant(r, detail::gauss_legendre_01(order));
    }

    // F_GUE(r): doubles the order until two successive evaluations agree to
    // the configured tolerance; throws convergence_error past the cap.
    double cdf(double r) const {
        double prev = determinant(r, rules_.front());
        for (std::size_t level = 1; level < rules_.size(); ++level) {
            const double next = determinant(r, rules_[level]);
            if (std::abs(next - prev) < tolerance_) return next;
            prev = next;
        }
        throw convergence_error("TracyWidomEvaluator: order doubling exhausted without reaching tolerance");
    }

    double operator()(double r) const { return cdf(r); }

    // mean of F_GUE via the tail-integral identity
    //   E[X] = -int_{-inf}^0 F + int_0^{inf} (1 - F),
    // integrated over [-10, 8] (the truncated tails are ~1e-13) at twice the
    // base order.
    double mean() const {
        const unsigned order = base_order_ * 2;
        const detail::QuadratureRule panel = detail::gauss_legendre_01(24);
        double total = 0.0;
        auto integrate = [&](double a, double b, bool upper_tail) {
            double acc = 0.0;
            for (std::size_t i = 0; i < panel.node.size(); ++i) {
                const double r = a + (b - a) * panel.node[i];
                const double f = cdf_at_order(r, order);
                acc += panel.weight[i] * (upper_tail ? 1.0 - f : -f);
            }
            return acc * (b - a);
        };
        for (double a = -10.0; a < 0.0; a += 2.0) total += integrate(a, a + 2.0, false);
        for (double a = 0.0; a < 8.0; a += 2.0) total += integrate(a, a + 2.0, true);
        return total;
    }

private:
    double determinant(double r, const detail::QuadratureRule& rule) const {
        const auto n = static_cast<Eigen::Index>(rule.node.size());
        std::vector<double> x(n), sw(n);
        std::vector<AiryValue> a(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double t = rule.node[i];
            const double u = 1.0 - t;
            x[i] = r + t / u;
            sw[i] = std::sqrt(rule.weight[i] / (u * u)); // sqrt of mapped weight
            a[i] = airy(x[i]);
        }
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) -= sw[i] * sw[j] * detail::airy_kernel(x[i], a[i], x[j], a[j]);
        const double det = m.partialPivLu().determinant();
        return std::clamp(det, 0.0, 1.0);
    }

    unsigned base_order_;
    double tolerance_;
    std::vector<detail::QuadratureRule> rules_;
};

// One-off evaluation with the default evaluator settings.
inline double tracy_widom_gue_cdf(double r) {
    static const TracyWidomEvaluator evaluator;
    return evaluator.cdf(r);
}

} // namespace glpp
