#pragma once

// Parameter bookkeeping and regime classification for the weakly coupled
// system
//   u_tt - Lap u + mu1/(1+t) u_t + nu1^2/(1+t)^2 u = |v|^p
//   v_tt - Lap v + mu2/(1+t) v_t + nu2^2/(1+t)^2 v = |u|^q
// in the wave-like range delta_j = (mu_j-1)^2 - 4 nu_j^2 >= 0, together with
// the predicted lifespan law for small data of size eps.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace siwave::model {

/// delta = (mu - 1)^2 - 4 nu^2, the discriminant separating wave-like
/// (small delta) from parabolic-like (large delta) behavior.
inline double delta(double mu, double nusq) {
    return (mu - 1.0) * (mu - 1.0) - 4.0 * nusq;
}

/// F(d,p,q) = (p + 2 + 1/q)/(pq - 1) - (d - 1)/2. The subcritical region is
/// max{F(n+mu1,p,q), F(n+mu2,q,p)} > 0 and the critical curve is max = 0.
inline double F(double d, double p, double q) {
    return (p + 2.0 + 1.0 / q) / (p * q - 1.0) - 0.5 * (d - 1.0);
}

struct SystemParams {
    int n = 3;           // space dimension
    double mu1 = 0.0;    // damping coefficients
    double mu2 = 0.0;
    double nu1sq = 0.0;  // mass coefficients (nu_j^2)
    double nu2sq = 0.0;
    double p = 2.0;      // nonlinearity exponents, > 1
    double q = 2.0;
    double r0 = 1.0;     // support radius of the data, in (0,1]
    double eps = 1.0;    // data size

    double delta1() const { return delta(mu1, nu1sq); }
    double delta2() const { return delta(mu2, nu2sq); }

    void validate() const {
        if (n < 1) throw std::invalid_argument("SystemParams: n must be a positive integer");
        if (mu1 < 0.0 || mu2 < 0.0 || nu1sq < 0.0 || nu2sq < 0.0)
            throw std::invalid_argument("SystemParams: mu_j and nu_j^2 must be nonnegative");
        if (delta1() < 0.0 || delta2() < 0.0)
            throw std::invalid_argument("SystemParams: delta_j = (mu_j-1)^2 - 4 nu_j^2 must be >= 0");
        if (!(p > 1.0) || !(q > 1.0)) throw std::invalid_argument("SystemParams: p, q must exceed 1");
        if (!(r0 > 0.0) || r0 > 1.0) throw std::invalid_argument("SystemParams: r0 must lie in (0,1]");
        if (!(eps > 0.0)) throw std::invalid_argument("SystemParams: eps must be positive");
    }
};

/// Roots of r^2 - (mu1-1) r + nu1^2 = 0 and rho^2 - (mu2-1) rho + nu2^2 = 0,
/// ordered r1 <= r2 and rho1 <= rho2.
struct RootPairs {
    double r1 = 0.0, r2 = 0.0;
    double rho1 = 0.0, rho2 = 0.0;
};

inline RootPairs roots(const SystemParams& sp) {
    const double d1 = sp.delta1();
    const double d2 = sp.delta2();
    if (d1 < 0.0 || d2 < 0.0) throw std::invalid_argument("roots: requires delta_1, delta_2 >= 0");
    RootPairs rp;
    rp.r1 = 0.5 * (sp.mu1 - 1.0 - std::sqrt(d1));
    rp.r2 = 0.5 * (sp.mu1 - 1.0 + std::sqrt(d1));
    rp.rho1 = 0.5 * (sp.mu2 - 1.0 - std::sqrt(d2));
    rp.rho2 = 0.5 * (sp.mu2 - 1.0 + std::sqrt(d2));
    // r1+1 = (mu1+1-sqrt(delta1))/2 >= 0 for admissible coefficients, with
    // equality exactly at mu1 = nu1 = 0 (the undamped massless case).
    if (rp.r1 + 1.0 < -1e-12 || rp.rho1 + 1.0 < -1e-12 || rp.r2 + 1.0 <= 0.0 || rp.rho2 + 1.0 <= 0.0)
        throw std::logic_error("roots: root shift positivity violated");
    return rp;
}

enum class Regime { Subcritical, Critical, Supercritical };

enum class CriticalSubcase {
    FirstBranch,       // 0 = F1 > F2, lifespan exp(C eps^{-q(pq-1)})
    SecondBranch,      // 0 = F2 > F1, lifespan exp(C eps^{-p(pq-1)})
    BothBranches,      // 0 = F1 = F2, lifespan exp(C eps^{-(pq-1)})
    SymmetricSamePDO,  // p = q at the Strauss point with identical coefficients
};

enum class LifespanKind { Polynomial, Exponential, NoPrediction };

struct LifespanLaw {
    LifespanKind kind = LifespanKind::NoPrediction;
    // Polynomial: T <= C eps^{-exponent}; Exponential: T <= exp(C eps^{-exponent}).
    double exponent = 0.0;
};

struct RegimeReport {
    double F1 = 0.0;  // F(n+mu1, p, q)
    double F2 = 0.0;  // F(n+mu2, q, p)
    Regime regime = Regime::Supercritical;
    std::optional<CriticalSubcase> critical_subcase;
    bool technical_ok = false;  // 1/p < (n-sqrt(delta2))/2 and 1/q < (n-sqrt(delta1))/2
    std::optional<double> parabolic_curve_value;  // only when delta_j >= (n+1)^2
    LifespanLaw lifespan_law;
};

/// Regime classification with a float tolerance band around the critical
/// curve: |max(F1,F2)| <= tol counts as critical.
inline RegimeReport classify(const SystemParams& sp, double tol = 1e-12) {
    sp.validate();
    RegimeReport rep;
    rep.F1 = F(sp.n + sp.mu1, sp.p, sp.q);
    rep.F2 = F(sp.n + sp.mu2, sp.q, sp.p);
    const double fmax = std::max(rep.F1, rep.F2);

    const double sd1 = std::sqrt(sp.delta1());
    const double sd2 = std::sqrt(sp.delta2());
    rep.technical_ok = (1.0 / sp.p < 0.5 * (sp.n - sd2)) && (1.0 / sp.q < 0.5 * (sp.n - sd1));

    const double lim = (sp.n + 1.0) * (sp.n + 1.0);
    if (sp.delta1() >= lim && sp.delta2() >= lim) {
        // Parabolic-like critical quantity; reported, never drives the law.
        const double lhs1 = (sp.p + 1.0) / (sp.p * sp.q - 1.0) - 0.5 * (0.5 * (sp.mu1 - 1.0) - 0.5 * sd1);
        const double lhs2 = (sp.q + 1.0) / (sp.p * sp.q - 1.0) - 0.5 * (0.5 * (sp.mu2 - 1.0) - 0.5 * sd2);
        rep.parabolic_curve_value = std::max(lhs1, lhs2);
    }

    if (fmax > tol) {
        rep.regime = Regime::Subcritical;
        rep.lifespan_law = {LifespanKind::Polynomial, 1.0 / fmax};
        return rep;
    }
    if (std::fabs(fmax) <= tol) {
        rep.regime = Regime::Critical;
        const double pq1 = sp.p * sp.q - 1.0;
        const bool f1_on = std::fabs(rep.F1) <= tol;
        const bool f2_on = std::fabs(rep.F2) <= tol;
        if (f1_on && f2_on) {
            const bool same_pdo = sp.mu1 == sp.mu2 && sp.nu1sq == sp.nu2sq && sp.p == sp.q;
            if (same_pdo) {
                rep.critical_subcase = CriticalSubcase::SymmetricSamePDO;
                rep.lifespan_law = {LifespanKind::Exponential, sp.p * (sp.p - 1.0)};
            } else {
                rep.critical_subcase = CriticalSubcase::BothBranches;
                rep.lifespan_law = {LifespanKind::Exponential, pq1};
            }
        } else if (f1_on) {
            rep.critical_subcase = CriticalSubcase::FirstBranch;
            rep.lifespan_law = {LifespanKind::Exponential, sp.q * pq1};
        } else {
            rep.critical_subcase = CriticalSubcase::SecondBranch;
            rep.lifespan_law = {LifespanKind::Exponential, sp.p * pq1};
        }
        return rep;
    }
    rep.regime = Regime::Supercritical;
    rep.lifespan_law = {LifespanKind::NoPrediction, 0.0};
    return rep;
}

/// Strauss exponent p_0(d): positive root of (d-1) p^2 - (d+1) p - 2 = 0.
inline double strauss_exponent(double d) {
    if (!(d > 1.0)) throw std::domain_error("strauss_exponent: requires d > 1");
    return ((d + 1.0) + std::sqrt((d + 1.0) * (d + 1.0) + 8.0 * (d - 1.0))) / (2.0 * (d - 1.0));
}

struct GridPoint {
    double p = 0.0;
    double q = 0.0;
    RegimeReport report;
};

struct PqGrid {
    std::vector<double> p_values;
    std::vector<double> q_values;
    std::vector<GridPoint> points;  // row-major: index = ip * q_values.size() + iq

    const GridPoint& at(std::size_t ip, std::size_t iq) const { return points[ip * q_values.size() + iq]; }
};

/// Pointwise classification over a rectangle of (p,q) values, row-major in p.
inline PqGrid pq_grid(const SystemParams& tmpl, double p_min, double p_max, double q_min, double q_max,
                      int steps_p, int steps_q, double tol = 1e-12) {
    if (steps_p < 2 && p_min != p_max) throw std::invalid_argument("pq_grid: steps_p must be >= 2");
    if (steps_q < 2 && q_min != q_max) throw std::invalid_argument("pq_grid: steps_q must be >= 2");
    if (!(p_min > 1.0) || !(q_min > 1.0)) throw std::invalid_argument("pq_grid: ranges must lie in (1, inf)");
    steps_p = std::max(steps_p, 1);
    steps_q = std::max(steps_q, 1);
    PqGrid grid;
    for (int i = 0; i < steps_p; ++i)
        grid.p_values.push_back(steps_p == 1 ? p_min : p_min + (p_max - p_min) * i / (steps_p - 1.0));
    for (int j = 0; j < steps_q; ++j)
        grid.q_values.push_back(steps_q == 1 ? q_min : q_min + (q_max - q_min) * j / (steps_q - 1.0));
    grid.points.reserve(static_cast<std::size_t>(steps_p) * steps_q);
    for (double pv : grid.p_values) {
        for (double qv : grid.q_values) {
            SystemParams sp = tmpl;
            sp.p = pv;
            sp.q = qv;
            grid.points.push_back({pv, qv, classify(sp, tol)});
        }
    }
    return grid;
}

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Critical: return "critical";
        case Regime::Supercritical: return "supercritical";
    }
    return "?";
}

inline const char* to_string(CriticalSubcase c) {
    switch (c) {
        case CriticalSubcase::FirstBranch: return "first_branch";
        case CriticalSubcase::SecondBranch: return "second_branch";
        case CriticalSubcase::BothBranches: return "both_branches";
        case CriticalSubcase::SymmetricSamePDO: return "symmetric_same_pdo";
    }
    return "?";
}

inline const char* to_string(LifespanKind k) {
    switch (k) {
        case LifespanKind::Polynomial: return "polynomial";
        case LifespanKind::Exponential: return "exponential";
        case LifespanKind::NoPrediction: return "no_prediction";
    }
    return "?";
}

}  // namespace siwave::model
