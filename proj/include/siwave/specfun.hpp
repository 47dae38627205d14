#pragma once

// Modified Bessel function of the second kind K_s(t) with real order, and the
// Gauss hypergeometric function 2F1 on [0,1). Both are evaluated from their
// defining representations: K_s by quadrature of the integral
//   K_s(t) = int_0^inf exp(-t cosh z) cosh(s z) dz,
// 2F1 by its power series. No recurrences in the order, no linear
// transformations in z.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "siwave/numeric.hpp"

namespace siwave::specfun {

struct BesselOrder {
    double varsigma = 0.0;

    BesselOrder() = default;
    // K_{-s} = K_s: the integrand depends on the order only through cosh(s z).
    explicit BesselOrder(double s) : varsigma(std::fabs(s)) {
        if (!std::isfinite(varsigma)) throw std::domain_error("BesselOrder: order must be finite");
    }
};

namespace detail {

// Integrand of the defining integral after the node stretch z = sinh(u):
//   f(u) = exp(-t cosh(sinh u)) * cosh(s sinh u) * cosh(u).
// Evaluated through logs so cosh(s z) cannot overflow on its own.
inline double k_integrand(double s, double t, double u) {
    const double z = std::sinh(u);
    const double ell = -t * std::cosh(z) + numeric::log_cosh(s * z);
    if (ell < -745.0) return 0.0;
    return std::exp(ell) * std::cosh(u);
}

// Trapezoidal sum over u = h, 2h, ... truncated once the integrand has fallen
// below 1e-18 of the running peak past the saddle at z = asinh(s/t).
inline double k_trapezoid(double s, double t, double h) {
    const double u_peak = std::asinh(std::asinh(std::max(s, 1.0) / t));
    double sum = 0.5 * k_integrand(s, t, 0.0);
    double peak = sum;
    for (long k = 1;; ++k) {
        const double u = k * h;
        const double f = k_integrand(s, t, u);
        sum += f;
        peak = std::max(peak, f);
        if (f < 1e-18 * peak && u > u_peak) break;
        if (k > 2000000) break;  // unreachable for admissible inputs
    }
    return sum * h;
}

}  // namespace detail

/// K_s(t) for t > 0. Relative error <= 1e-10 for t in [0.05, 100], s in [0, 10]
/// (observed ~1e-14); accuracy degrades smoothly outside that box.
inline double bessel_k(BesselOrder order, double t) {
    if (!std::isfinite(t) || t <= 0.0)
        throw std::domain_error("bessel_k: t must be positive and finite, got " + std::to_string(t));
    const double s = order.varsigma;
    // Halve the step until two successive grids agree; convergence in h is
    // geometric for this integrand, so agreement certifies the finer value.
    double h = 0.5 / std::sqrt(std::max(1.0, t));
    double prev = detail::k_trapezoid(s, t, h);
    for (int iter = 0; iter < 14; ++iter) {
        h *= 0.5;
        const double cur = detail::k_trapezoid(s, t, h);
        if (numeric::rel_err(cur, prev) <= 5e-15) return cur;
        prev = cur;
    }
    return prev;
}

/// dK_s/dt via the derivative identity  K_s'(t) = -K_{s+1}(t) + (s/t) K_s(t).
inline double bessel_k_derivative(BesselOrder order, double t) {
    const double s = order.varsigma;
    return -bessel_k(BesselOrder{s + 1.0}, t) + (s / t) * bessel_k(order, t);
}

/// Pochhammer symbol (m)_k = m (m+1) ... (m+k-1), with (m)_0 = 1.
inline double pochhammer(double m, int k) {
    if (k < 0) throw std::domain_error("pochhammer: k must be nonnegative");
    double prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= m + j;
    return prod;
}

struct HypergeometricParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;

    HypergeometricParams() = default;
    HypergeometricParams(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
        const double cr = std::round(c);
        if (c <= 0.0 && std::fabs(c - cr) < 1e-12)
            throw std::domain_error("HypergeometricParams: c is a nonpositive integer (series pole)");
    }
};

struct Hyp2F1Result {
    double value = 0.0;
    // Set when the series was cut off by the term cap instead of the term-ratio
    // criterion; happens only for z near 1 with c - a - b small or negative.
    bool degraded = false;
};

/// 2F1(a,b;c;z) for z in [0, 1 - 1e-9] by direct series summation. Stops once
/// |term| <= 1e-16 |partial sum| for three consecutive terms; hard cap 100000
/// terms, after which the result is flagged degraded.
inline Hyp2F1Result hyp2f1(const HypergeometricParams& p, double z) {
    if (!std::isfinite(z) || z < 0.0 || z > 1.0 - 1e-9)
        throw std::domain_error("hyp2f1: z must lie in [0, 1 - 1e-9]");
    double term = 1.0;
    double sum = 1.0;
    int consecutive = 0;
    for (long k = 0; k < 100000; ++k) {
        term *= (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::fabs(term) <= 1e-16 * std::fabs(sum)) {
            if (++consecutive >= 3) return {sum, false};
        } else {
            consecutive = 0;
        }
    }
    return {sum, true};
}

inline Hyp2F1Result hyp2f1(double a, double b, double c, double z) {
    return hyp2f1(HypergeometricParams{a, b, c}, z);
}

/// Derivative in z via the parameter shift  F' = (ab/c) F(a+1,b+1;c+1;z).
inline Hyp2F1Result hyp2f1_derivative(const HypergeometricParams& p, double z) {
    auto shifted = hyp2f1(HypergeometricParams{p.a + 1.0, p.b + 1.0, p.c + 1.0}, z);
    return {p.a * p.b / p.c * shifted.value, shifted.degraded};
}

}  // namespace siwave::specfun
