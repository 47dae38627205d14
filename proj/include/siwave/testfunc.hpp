#pragma once

// Analytic test functions used by the blow-up machinery: the exponential
// eigenfunction phi of the Laplacian (Delta phi = phi), the separated time
// factors lambda(t) = (1+t)^{(mu+1)/2} K_s(1+t), the positive weight V on the
// light cone, the self-similar family Phi_beta built from 2F1, and the smooth
// cutoff psi_R with its support-tracking companion psi*_R.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "siwave/numeric.hpp"
#include "siwave/specfun.hpp"

namespace siwave::testfunc {

/// Eigenfunction of the Laplacian with Delta phi = phi:
/// phi(x) = e^x + e^{-x} for n = 1, the sphere integral of e^{x . w} for
/// n >= 2, reduced to a polar-angle quadrature. Radial: depends on |x| only.
inline double phi_yz(int n, double x_norm) {
    if (n < 1) throw std::domain_error("phi_yz: n must be >= 1");
    const double r = std::fabs(x_norm);
    if (n == 1) return std::exp(r) + std::exp(-r);
    const double ring = numeric::unit_sphere_area(n - 1);  // measure of S^{n-2}
    auto integrand = [&](double theta) {
        return std::exp(r * std::cos(theta)) * std::pow(std::sin(theta), n - 2.0);
    };
    return ring * numeric::gauss16_adaptive(integrand, 0.0, std::numbers::pi, 1e-13);
}

/// Time factor of the separated adjoint solution for one equation.
struct TimeFactor {
    double mu = 0.0;
    double nusq = 0.0;

    TimeFactor() = default;
    TimeFactor(double mu_, double nusq_) : mu(mu_), nusq(nusq_) {
        if (mu < 0.0 || nusq < 0.0) throw std::domain_error("TimeFactor: coefficients must be nonnegative");
        if (delta() < 0.0) throw std::domain_error("TimeFactor: requires (mu-1)^2 - 4 nu^2 >= 0");
    }

    double delta() const { return (mu - 1.0) * (mu - 1.0) - 4.0 * nusq; }
    double varsigma() const { return 0.5 * std::sqrt(delta()); }
};

struct LambdaValue {
    double value = 0.0;
    double derivative = 0.0;
};

/// lambda(t) = (1+t)^{(mu+1)/2} K_s(1+t) with s = sqrt(delta)/2, and its
/// derivative via the Bessel identity:
/// lambda'(t) = (mu+1+sqrt(delta))/2 (1+t)^{(mu-1)/2} K_s(1+t)
///              - (1+t)^{(mu+1)/2} K_{s+1}(1+t).
inline LambdaValue lambda_factor(const TimeFactor& tf, double t) {
    if (t < 0.0) throw std::domain_error("lambda_factor: t must be >= 0");
    const double s = tf.varsigma();
    const double w = 1.0 + t;
    const double ks = specfun::bessel_k(specfun::BesselOrder{s}, w);
    const double ks1 = specfun::bessel_k(specfun::BesselOrder{s + 1.0}, w);
    LambdaValue lv;
    lv.value = std::pow(w, 0.5 * (tf.mu + 1.0)) * ks;
    lv.derivative = 0.5 * (tf.mu + 1.0 + std::sqrt(tf.delta())) * std::pow(w, 0.5 * (tf.mu - 1.0)) * ks -
                    std::pow(w, 0.5 * (tf.mu + 1.0)) * ks1;
    return lv;
}

/// Separated solution lambda(t) phi(x) of the adjoint equation
/// Phi_tt - Lap Phi - d/dt(mu/(1+t) Phi) + nu^2/(1+t)^2 Phi = 0.
inline double adjoint_product_solution(const TimeFactor& tf, int n, double t, double x_norm) {
    return lambda_factor(tf, t).value * phi_yz(n, x_norm);
}

/// Positive solution of the adjoint equation on the interior of the cone
/// |x| < 1+t:  V = (1+t)^{(mu+1+sqrt(delta))/2} ((1+t)^2 - |x|^2)^{-(n+sqrt(delta))/2}.
inline double V_weight(double mu, double nusq, int n, double t, double x_norm) {
    const TimeFactor tf{mu, nusq};
    const double sd = std::sqrt(tf.delta());
    const double w = 1.0 + t;
    if (std::fabs(x_norm) >= w) throw std::domain_error("V_weight: requires |x| < 1 + t");
    return std::pow(w, 0.5 * (mu + 1.0 + sd)) * std::pow(w * w - x_norm * x_norm, -0.5 * (n + sd));
}

/// d/dt V at t = 0 (used in the data functional I_{mu,nu^2}).
inline double V_weight_dt0(double mu, double nusq, int n, double x_norm) {
    const TimeFactor tf{mu, nusq};
    const double sd = std::sqrt(tf.delta());
    const double x2 = x_norm * x_norm;
    if (x2 >= 1.0) throw std::domain_error("V_weight_dt0: requires |x| < 1");
    return -std::pow(1.0 - x2, -0.5 * (n + sd) - 1.0) *
           (n + 0.5 * (sd - mu - 1.0) + 0.5 * (mu + 1.0 + sd) * x2);
}

/// Parameters of the self-similar family Phi_{beta,mu,nu^2}.
struct SelfSimilarParams {
    double beta = 1.0;
    double mu = 0.0;
    double nusq = 0.0;

    SelfSimilarParams() = default;
    SelfSimilarParams(double beta_, double mu_, double nusq_) : beta(beta_), mu(mu_), nusq(nusq_) {
        const TimeFactor tf{mu, nusq};  // validates delta >= 0
        if (!(beta > 0.5 * (std::sqrt(tf.delta()) + 1.0 - mu)))
            throw std::domain_error("SelfSimilarParams: requires beta > (sqrt(delta)+1-mu)/2");
    }

    double delta() const { return (mu - 1.0) * (mu - 1.0) - 4.0 * nusq; }
    double a_beta() const { return 0.5 * beta + 0.25 * (mu - 1.0) + 0.25 * std::sqrt(delta()); }
    double b_beta() const { return 0.5 * beta + 0.25 * (mu - 1.0) - 0.25 * std::sqrt(delta()); }
};

/// Phi_beta(t,x) = (1+t)^{-beta+1} 2F1(a_beta, b_beta; n/2; |x|^2/(1+t)^2).
inline double phi_beta(const SelfSimilarParams& ss, int n, double t, double x_norm) {
    const double w = 1.0 + t;
    const double z = x_norm * x_norm / (w * w);
    if (z >= 1.0) throw std::domain_error("phi_beta: requires |x| < 1 + t");
    auto f = specfun::hyp2f1(ss.a_beta(), ss.b_beta(), 0.5 * n, z);
    return std::pow(w, 1.0 - ss.beta) * f.value;
}

/// Analytic time derivative of Phi_beta:
/// (1+t)^{-beta} [ (1-beta) F(a,b;n/2;z) - (4ab/n) z F(a+1,b+1;n/2+1;z) ].
inline double phi_beta_dt(const SelfSimilarParams& ss, int n, double t, double x_norm) {
    const double w = 1.0 + t;
    const double z = x_norm * x_norm / (w * w);
    if (z >= 1.0) throw std::domain_error("phi_beta_dt: requires |x| < 1 + t");
    const double a = ss.a_beta();
    const double b = ss.b_beta();
    const double f0 = specfun::hyp2f1(a, b, 0.5 * n, z).value;
    const double f1 = specfun::hyp2f1(a + 1.0, b + 1.0, 0.5 * n + 1.0, z).value;
    return std::pow(w, -ss.beta) * ((1.0 - ss.beta) * f0 - 4.0 * a * b / n * z * f1);
}

// Cutoff profile: psi(s) = 1 on [0,1/2], the C^3 descent P(2s-1) on [1/2,1],
// 0 beyond; P is the unique degree-7 polynomial with P(0)=1, P(1)=0 and three
// vanishing derivatives at both ends (the reversed smoothstep S3).
namespace detail {

inline double bump_p(double x) { return 1.0 - x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x); }
inline double bump_dp(double x) {
    const double y = x * (1.0 - x);
    return -140.0 * y * y * y;
}
inline double bump_d2p(double x) {
    const double y = x * (1.0 - x);
    return -420.0 * y * y * (1.0 - 2.0 * x);
}

}  // namespace detail

struct CutoffSpec {
    double R = 1.0;

    CutoffSpec() = default;
    explicit CutoffSpec(double R_) : R(R_) {
        if (!(R > 0.0)) throw std::domain_error("CutoffSpec: R must be positive");
    }
};

struct CutoffValue {
    double psi = 0.0;       // psi_R(t)
    double psi_star = 0.0;  // 0 on [0, R/2), psi_R on [R/2, inf)
    double dpsi = 0.0;      // d/dt psi_R(t)
    double d2psi = 0.0;     // d^2/dt^2 psi_R(t)
};

inline CutoffValue cutoff(const CutoffSpec& spec, double t) {
    if (t < 0.0) throw std::domain_error("cutoff: t must be >= 0");
    const double s = t / spec.R;
    CutoffValue cv;
    if (s < 0.5) {
        cv.psi = 1.0;
        return cv;
    }
    if (s >= 1.0) return cv;
    const double x = 2.0 * s - 1.0;
    cv.psi = detail::bump_p(x);
    cv.psi_star = cv.psi;
    cv.dpsi = 2.0 * detail::bump_dp(x) / spec.R;
    cv.d2psi = 4.0 * detail::bump_d2p(x) / (spec.R * spec.R);
    return cv;
}

/// Data functional I[u0,u1] = int u1 V(0,x) + u0 (mu V(0,x) - V_t(0,x)) dx
/// over radial profiles supported in B_{r0}, r0 < 1. Positive for nonnegative
/// nontrivial data.
template <class F0, class F1>
double data_functional_I(double mu, double nusq, int n, F0&& u0, F1&& u1, double r0) {
    if (!(r0 > 0.0) || r0 >= 1.0) throw std::domain_error("data_functional_I: requires r0 in (0,1)");
    auto integrand = [&](double r) {
        const double v0 = V_weight(mu, nusq, n, 0.0, r);
        const double vt0 = V_weight_dt0(mu, nusq, n, r);
        return (u1(r) * v0 + u0(r) * (mu * v0 - vt0)) * std::pow(r, n - 1.0);
    };
    return numeric::unit_sphere_area(n) * numeric::gauss16_adaptive(integrand, 0.0, r0, 1e-11);
}

/// Data functional J[u0,u1] with the self-similar weight Phi_beta in place of V.
template <class F0, class F1>
double data_functional_J(const SelfSimilarParams& ss, int n, F0&& u0, F1&& u1, double r0) {
    if (!(r0 > 0.0) || r0 >= 1.0) throw std::domain_error("data_functional_J: requires r0 in (0,1)");
    auto integrand = [&](double r) {
        const double f0 = phi_beta(ss, n, 0.0, r);
        const double ft0 = phi_beta_dt(ss, n, 0.0, r);
        return (u1(r) * f0 + u0(r) * (ss.mu * f0 - ft0)) * std::pow(r, n - 1.0);
    };
    return numeric::unit_sphere_area(n) * numeric::gauss16_adaptive(integrand, 0.0, r0, 1e-11);
}

enum class GrowthClass { Power, PowerLog };

struct Lemma38Result {
    double value = 0.0;                     // integral at the base scale R
    std::array<double, 3> ladder{};         // values at R, 2R, 4R
    double fitted_exponent = 0.0;           // least-squares slope of log I vs log R
    double exponent_drift = 0.0;            // difference of consecutive dyadic slopes
    GrowthClass growth = GrowthClass::Power;
};

namespace detail {

// Inner spatial integral of Phi_beta^{p'} r^{n-1} over the ball r <= r0 + t,
// in the boundary-layer variable w = 1 - r/(1+t) with log-graded nodes toward
// the light cone, where the integrand behaves like a power of w.
inline double lemma38_inner(const SelfSimilarParams& ss, int n, double pprime, double r0, double t) {
    const double w1 = 1.0 + t;
    const double w0 = (1.0 - r0) / w1;
    auto g = [&](double logw) {
        const double w = std::exp(logw);
        const double r = w1 * (1.0 - w);
        const double phi = phi_beta(ss, n, t, r);
        return std::pow(phi, pprime) * std::pow(r, n - 1.0) * w1 * w;  // dr = w1 dw, dw = w dlogw
    };
    return numeric::gauss16_composite(g, std::log(w0), 0.0, 24);
}

inline double lemma38_value(const SelfSimilarParams& ss, int n, double p, double r0, double R) {
    const double pprime = p / (p - 1.0);
    auto outer = [&](double t) { return lemma38_inner(ss, n, pprime, r0, t) * numeric::unit_sphere_area(n); };
    return numeric::gauss16_composite(outer, 0.5 * R, R, 12);
}

}  // namespace detail

/// Space-time integral of Phi_beta^{p'} over [R/2,R] x B_{r0+t} together with
/// a growth fit over the doubling ladder R, 2R, 4R. A sustained positive drift
/// of the dyadic slopes marks the logarithmic boundary case.
inline Lemma38Result lemma38_integral(const SelfSimilarParams& ss, int n, double p, double r0, double R) {
    if (!(R > 2.0)) throw std::domain_error("lemma38_integral: requires R > 2");
    if (!(r0 > 0.0) || r0 >= 1.0) throw std::domain_error("lemma38_integral: requires r0 in (0,1)");
    const double boundary = 0.5 * (n - ss.mu + 1.0);
    if (std::fabs(ss.beta - boundary) < 1e-9)
        throw std::domain_error("lemma38_integral: beta = (n-mu+1)/2 is excluded");
    Lemma38Result res;
    for (int k = 0; k < 3; ++k) {
        res.ladder[k] = detail::lemma38_value(ss, n, p, r0, R * std::pow(2.0, k));
        if (!std::isfinite(res.ladder[k]) || res.ladder[k] <= 0.0)
            throw std::runtime_error("lemma38_integral: quadrature failure near the light cone");
    }
    res.value = res.ladder[0];
    const double s1 = std::log2(res.ladder[1] / res.ladder[0]);
    const double s2 = std::log2(res.ladder[2] / res.ladder[1]);
    res.fitted_exponent = 0.5 * (s1 + s2);
    res.exponent_drift = s2 - s1;
    // Pure powers give equal dyadic slopes. An R^e log R law inflates each
    // slope by log2(log 2R / log R), which decays in R, so its slopes drift
    // down by a predictable amount; classify against half that drift.
    const double log_drift = std::log2(std::log(4.0 * R) / std::log(2.0 * R)) -
                             std::log2(std::log(2.0 * R) / std::log(R));  // negative
    res.growth = (res.exponent_drift < 0.5 * log_drift) ? GrowthClass::PowerLog : GrowthClass::Power;
    return res;
}

}  // namespace siwave::testfunc
