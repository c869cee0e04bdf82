#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "workform/errors.hpp"

namespace workform {

/// Gauss-Legendre rule on [0, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Nodes via Newton iteration on P_n; standard construction, double precision.
inline GaussLegendreRule make_gauss_legendre(std::size_t order) {
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const std::size_t m = (order + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Chebyshev-like initial guess on [-1, 1].
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(order) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] -> [0, 1].
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[order - 1 - i] = 0.5 * w;
    }
    return rule;
}

}  // namespace detail

inline const GaussLegendreRule& gauss_legendre_32() {
    static const GaussLegendreRule rule = detail::make_gauss_legendre(32);
    return rule;
}

inline const GaussLegendreRule& gauss_legendre_64() {
    static const GaussLegendreRule rule = detail::make_gauss_legendre(64);
    return rule;
}

/// Relative disagreement between the order-32 and order-64 estimates above
/// which a quadrature-backed coefficient is considered broken.
inline constexpr double kQuadratureRelTol = 1e-10;

/// Integrates f over [0, 1] with the order-32 rule; the order-64 rule
/// serves as the error estimate. Throws QuadratureError when the two
/// disagree beyond kQuadratureRelTol (relative).
inline double integrate_unit_interval(const std::function<double(double)>& f) {
    const auto& r32 = gauss_legendre_32();
    const auto& r64 = gauss_legendre_64();
    double s32 = 0.0;
    for (std::size_t i = 0; i < r32.nodes.size(); ++i) s32 += r32.weights[i] * f(r32.nodes[i]);
    double s64 = 0.0;
    for (std::size_t i = 0; i < r64.nodes.size(); ++i) s64 += r64.weights[i] * f(r64.nodes[i]);
    double err = std::abs(s32 - s64);
    if (!std::isfinite(s32) || !std::isfinite(s64) ||
        err > kQuadratureRelTol * (1.0 + std::abs(s64))) {
        throw QuadratureError("quadrature error estimate " + std::to_string(err) +
                              " exceeds tolerance; integrand is likely singular on [0,1]");
    }
    return s64;
}

}  // namespace workform
