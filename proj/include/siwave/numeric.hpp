#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace siwave::numeric {

inline double rel_err(double got, double want) {
    double scale = std::max(std::fabs(got), std::fabs(want));
    if (scale == 0.0) return 0.0;
    return std::fabs(got - want) / scale;
}

/// log(cosh(x)) without overflow for large |x|.
inline double log_cosh(double x) {
    x = std::fabs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

/// Surface measure of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) {
    if (n < 1) throw std::domain_error("unit_sphere_area: n must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Volume of the unit ball B_1 in R^n.
inline double unit_ball_volume(int n) {
    return unit_sphere_area(n) / static_cast<double>(n);
}

// 16-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
inline constexpr std::array<double, 8> kGL16Nodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGL16Weights = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

/// 16-point Gauss-Legendre on [a,b].
template <class F>
double gauss16(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double dx = hw * kGL16Nodes[i];
        s += kGL16Weights[i] * (f(mid - dx) + f(mid + dx));
    }
    return s * hw;
}

/// Composite 16-point Gauss-Legendre with `panels` uniform panels.
template <class F>
double gauss16_composite(F&& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("gauss16_composite: panels >= 1");
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int k = 0; k < panels; ++k) s += gauss16(f, a + k * h, a + (k + 1) * h);
    return s;
}

/// Panel-doubling Gauss-Legendre until two consecutive agreements at rel_tol.
template <class F>
double gauss16_adaptive(F&& f, double a, double b, double rel_tol = 1e-12, int max_panels = 4096) {
    double prev = gauss16_composite(f, a, b, 1);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        double cur = gauss16_composite(f, a, b, panels);
        if (rel_err(cur, prev) <= rel_tol) return cur;
        prev = cur;
    }
    return prev;
}

/// Composite Simpson on uniformly sampled values (trapezoid fallback on the
/// last cell when the sample count is even).
inline double simpson_uniform(std::span<const double> y, double h) {
    const std::size_t m = y.size();
    if (m < 2) return 0.0;
    if (m == 2) return 0.5 * h * (y[0] + y[1]);
    double s = 0.0;
    std::size_t last = (m % 2 == 1) ? m - 1 : m - 2;
    for (std::size_t i = 0; i + 2 <= last; i += 2) s += (h / 3.0) * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    if (m % 2 == 0) s += 0.5 * h * (y[m - 2] + y[m - 1]);
    return s;
}

inline double trapezoid_uniform(std::span<const double> y, double h) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * h;
}

/// Central first derivative of a callable.
template <class F>
double diff_central(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Central second derivative of a callable.
template <class F>
double diff2_central(F&& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace siwave::numeric
