#pragma once

// Iteration machinery behind the subcritical blow-up argument: the coupled
// sequences a_j, b_j, alpha_j, beta_j with their closed forms, the derived
// constants, log-space tracking of the doubly exponential amplitudes D_j,
// Delta_j, the per-j lower-bound envelopes for the spatial averages
// U(t) = int u dx, V(t) = int v dx, and the blow-up time thresholds.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "siwave/model.hpp"
#include "siwave/rational.hpp"

namespace siwave::iterkit {

struct IterationConstants {
    double A = 0.0;        // r2+1-n+(rho2+1)p+npq
    double A_tilde = 0.0;  // rho2+1-n+(r2+1)q+npq
    double B = 0.0;        // r2+3+(rho2+3)p
    double B_tilde = 0.0;  // rho2+3+(r2+3)q
    double B0 = 0.0;       // B/(pq-1)+b1 > 0
    double B0_tilde = 0.0; // Btilde/(pq-1)+beta1 > 0
    double C0 = 0.0;       // (meas B_1)^{1-p} r0^{-n(p-1)}
    double K0 = 0.0;       // (meas B_1)^{1-q} r0^{-n(q-1)}
    double C_tilde = 0.0;  // C0 K0^p / B0^{2(p+1)}
    double K_tilde = 0.0;  // K0 C0^q / B0_tilde^{2(q+1)}
    double Spq_inf = 0.0;        // 2pq(p+1)/(pq-1)^2 log(pq) - log(C_tilde)/(pq-1)
    double Spq_inf_tilde = 0.0;  // 2pq(q+1)/(pq-1)^2 log(pq) - log(K_tilde)/(pq-1)
    long j0 = 1;  // envelope assertions are meaningful for odd j > j0
    // Seeds of the sequences.
    double a1 = 0.0, b1 = 0.0, alpha1 = 0.0, beta1 = 0.0;
};

inline IterationConstants constants(const model::SystemParams& sp, const model::RootPairs& rp) {
    sp.validate();
    const double p = sp.p, q = sp.q, n = sp.n;
    const double pq = p * q;
    if (!(pq > 1.0)) throw std::invalid_argument("constants: requires pq > 1");
    IterationConstants c;
    c.A = rp.r2 + 1.0 - n + (rp.rho2 + 1.0) * p + n * pq;
    c.A_tilde = rp.rho2 + 1.0 - n + (rp.r2 + 1.0) * q + n * pq;
    c.B = rp.r2 + 3.0 + (rp.rho2 + 3.0) * p;
    c.B_tilde = rp.rho2 + 3.0 + (rp.r2 + 3.0) * q;
    c.a1 = rp.r2 + 1.0 + 0.5 * (n + sp.mu2 - 1.0) * p;
    c.b1 = rp.r2 + n + 2.0;
    c.alpha1 = rp.rho2 + 1.0 + 0.5 * (n + sp.mu1 - 1.0) * q;
    c.beta1 = rp.rho2 + n + 2.0;
    c.B0 = c.B / (pq - 1.0) + c.b1;
    c.B0_tilde = c.B_tilde / (pq - 1.0) + c.beta1;
    if (!(c.B0 > 0.0) || !(c.B0_tilde > 0.0))
        throw std::logic_error("constants: B0, B0_tilde must be positive for admissible parameters");
    const double ball = std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
    c.C0 = std::pow(ball, 1.0 - p) * std::pow(sp.r0, -n * (p - 1.0));
    c.K0 = std::pow(ball, 1.0 - q) * std::pow(sp.r0, -n * (q - 1.0));
    c.C_tilde = c.C0 * std::pow(c.K0, p) / std::pow(c.B0, 2.0 * (p + 1.0));
    c.K_tilde = c.K0 * std::pow(c.C0, q) / std::pow(c.B0_tilde, 2.0 * (q + 1.0));
    const double lpq = std::log(pq);
    c.Spq_inf = 2.0 * pq * (p + 1.0) / ((pq - 1.0) * (pq - 1.0)) * lpq - std::log(c.C_tilde) / (pq - 1.0);
    c.Spq_inf_tilde = 2.0 * pq * (q + 1.0) / ((pq - 1.0) * (pq - 1.0)) * lpq - std::log(c.K_tilde) / (pq - 1.0);
    const double j0_raw = std::max(c.C_tilde / (p + 1.0), c.K_tilde / (q + 1.0)) / lpq - 2.0 * pq / (pq - 1.0) + 1.0;
    c.j0 = std::max(1L, static_cast<long>(std::ceil(j0_raw)));
    return c;
}

/// Unpinned data-dependent constants of the a-priori lower bounds
///   int |u|^q dx >= C1 eps^q (1+t)^{n-1-(n+mu1-1)q/2},
///   int |v|^p dx >= K1 eps^p (1+t)^{n-1-(n+mu2-1)p/2}   for t > T0.
/// They depend on quantities no displayed formula fixes, so they are inputs.
struct DataConstants {
    double C1 = 1.0;
    double K1 = 1.0;
    double T0 = 1.0;
};

struct IterationRow {
    long j = 1;  // odd
    double a = 0.0, b = 0.0, alpha = 0.0, beta = 0.0;
    double log_D = 0.0, log_Delta = 0.0;
};

struct IterationTable {
    std::vector<IterationRow> rows;  // odd j = 1, 3, 5, ...
    IterationConstants consts;
    double eps = 0.0;
    double T0 = 0.0;
};

/// Literal iteration of the one-step recurrences from the j = 1 seeds,
/// keeping the amplitudes in log space. Stores the odd rows.
inline IterationTable sequences_recurrence(const IterationConstants& c, const model::SystemParams& sp,
                                           const model::RootPairs& rp, const DataConstants& data, long j_max) {
    if (j_max < 1 || j_max % 2 == 0) throw std::invalid_argument("sequences_recurrence: j_max must be odd and >= 1");
    IterationTable table;
    table.consts = c;
    table.eps = sp.eps;
    table.T0 = data.T0;
    const double n = sp.n, p = sp.p, q = sp.q;
    double a = c.a1, b = c.b1, alpha = c.alpha1, beta = c.beta1;
    double logD = std::log(data.K1) + p * std::log(sp.eps) - std::log((rp.r2 + n + 1.0) * (rp.r2 + n + 2.0));
    double logDelta = std::log(data.C1) + q * std::log(sp.eps) - std::log((rp.rho2 + n + 1.0) * (rp.rho2 + n + 2.0));
    table.rows.push_back({1, a, b, alpha, beta, logD, logDelta});
    for (long j = 1; j < j_max; ++j) {
        const double a_next = rp.r2 + 1.0 + n * (p - 1.0) + alpha * p;
        const double b_next = rp.r2 + 3.0 + beta * p;
        const double alpha_next = rp.rho2 + 1.0 + n * (q - 1.0) + a * q;
        const double beta_next = rp.rho2 + 3.0 + b * q;
        const double logD_next =
            std::log(c.C0) + p * logDelta - std::log(rp.r2 + 2.0 + beta * p) - std::log(rp.r2 + 3.0 + beta * p);
        const double logDelta_next =
            std::log(c.K0) + q * logD - std::log(rp.rho2 + 2.0 + b * q) - std::log(rp.rho2 + 3.0 + b * q);
        a = a_next; b = b_next; alpha = alpha_next; beta = beta_next;
        logD = logD_next; logDelta = logDelta_next;
        if ((j + 1) % 2 == 1) table.rows.push_back({j + 1, a, b, alpha, beta, logD, logDelta});
    }
    return table;
}

struct SequenceValues {
    double a = 0.0, alpha = 0.0, b = 0.0, beta = 0.0;
};

/// Closed forms, odd j:
///   a_j = (A/(pq-1)+a1)(pq)^{(j-1)/2} - A/(pq-1),   alpha_j likewise with
///   A~, alpha1;  b_j and beta_j likewise with B, b1 and B~, beta1.
inline SequenceValues sequences_closed_form(const IterationConstants& c, const model::SystemParams& sp, long j) {
    if (j < 1 || j % 2 == 0) throw std::invalid_argument("sequences_closed_form: j must be odd and >= 1");
    const double pq = sp.p * sp.q;
    const double g = std::pow(pq, 0.5 * (j - 1.0));
    SequenceValues v;
    v.a = (c.A / (pq - 1.0) + c.a1) * g - c.A / (pq - 1.0);
    v.alpha = (c.A_tilde / (pq - 1.0) + c.alpha1) * g - c.A_tilde / (pq - 1.0);
    v.b = (c.B / (pq - 1.0) + c.b1) * g - c.B / (pq - 1.0);
    v.beta = (c.B_tilde / (pq - 1.0) + c.beta1) * g - c.B_tilde / (pq - 1.0);
    return v;
}

// ---------------------------------------------------------------------------
// Exact-rational mirror of the sequence algebra. The sequences depend on the
// parameters only through (n, r2, rho2, p, q); when those are rational the
// recurrence and the closed forms are exact and must agree identically.

struct RationalSequences {
    std::vector<long> j;  // odd
    std::vector<BigRational> a, b, alpha, beta;
    bool budget_exceeded = false;  // a value outgrew the bit budget; floats from there on
};

struct RationalSeedConstants {
    BigRational A, A_tilde, B, B_tilde, a1, b1, alpha1, beta1;
};

inline RationalSeedConstants rational_constants(long n, const BigRational& r2, const BigRational& rho2,
                                                const BigRational& p, const BigRational& q,
                                                const BigRational& mu1, const BigRational& mu2) {
    const BigRational N(n), one(1), two(2), three(3);
    RationalSeedConstants s;
    s.A = r2 + one - N + (rho2 + one) * p + N * p * q;
    s.A_tilde = rho2 + one - N + (r2 + one) * q + N * p * q;
    s.B = r2 + three + (rho2 + three) * p;
    s.B_tilde = rho2 + three + (r2 + three) * q;
    s.a1 = r2 + one + (N + mu2 - one) * p / two;
    s.b1 = r2 + N + two;
    s.alpha1 = rho2 + one + (N + mu1 - one) * q / two;
    s.beta1 = rho2 + N + two;
    return s;
}

inline RationalSequences sequences_recurrence_exact(long n, const BigRational& r2, const BigRational& rho2,
                                                    const BigRational& p, const BigRational& q,
                                                    const BigRational& mu1, const BigRational& mu2, long j_max,
                                                    std::size_t bit_budget = 4096) {
    if (j_max < 1 || j_max % 2 == 0) throw std::invalid_argument("sequences_recurrence_exact: j_max must be odd");
    const auto s = rational_constants(n, r2, rho2, p, q, mu1, mu2);
    const BigRational N(n), one(1), two(2), three(3);
    RationalSequences out;
    BigRational a = s.a1, b = s.b1, alpha = s.alpha1, beta = s.beta1;
    out.j.push_back(1);
    out.a.push_back(a); out.b.push_back(b); out.alpha.push_back(alpha); out.beta.push_back(beta);
    for (long j = 1; j + 2 <= j_max; j += 2) {
        for (int step = 0; step < 2; ++step) {
            BigRational a_next = r2 + one + N * (p - one) + alpha * p;
            BigRational b_next = r2 + three + beta * p;
            BigRational alpha_next = rho2 + one + N * (q - one) + a * q;
            BigRational beta_next = rho2 + three + b * q;
            a = a_next; b = b_next; alpha = alpha_next; beta = beta_next;
        }
        if (!a.within_budget(bit_budget) || !b.within_budget(bit_budget) || !alpha.within_budget(bit_budget) ||
            !beta.within_budget(bit_budget)) {
            out.budget_exceeded = true;
            break;
        }
        out.j.push_back(j + 2);
        out.a.push_back(a); out.b.push_back(b); out.alpha.push_back(alpha); out.beta.push_back(beta);
    }
    return out;
}

struct RationalClosedForm {
    BigRational a, alpha, b, beta;
};

inline RationalClosedForm sequences_closed_form_exact(long n, const BigRational& r2, const BigRational& rho2,
                                                      const BigRational& p, const BigRational& q,
                                                      const BigRational& mu1, const BigRational& mu2, long j) {
    if (j < 1 || j % 2 == 0) throw std::invalid_argument("sequences_closed_form_exact: j must be odd");
    const auto s = rational_constants(n, r2, rho2, p, q, mu1, mu2);
    const BigRational one(1);
    const BigRational pq1 = p * q - one;
    const BigRational g = (p * q).pow(static_cast<unsigned>((j - 1) / 2));
    RationalClosedForm cf;
    cf.a = (s.A / pq1 + s.a1) * g - s.A / pq1;
    cf.alpha = (s.A_tilde / pq1 + s.alpha1) * g - s.A_tilde / pq1;
    cf.b = (s.B / pq1 + s.b1) * g - s.B / pq1;
    cf.beta = (s.B_tilde / pq1 + s.beta1) * g - s.B_tilde / pq1;
    return cf;
}

// ---------------------------------------------------------------------------

struct SummationIdentities {
    double geometric_sum = 0.0;  // sum_{k=0}^{(j-3)/2} (pq)^k
    double weighted_sum = 0.0;   // sum_{k=1}^{(j-1)/2} (j+1-2k)(pq)^{k-1}
};

/// Closed forms of the two partial sums appearing in the log D_j expansion:
///   geometric = ((pq)^{(j-1)/2} - 1)/(pq - 1)
///   weighted  = (2pq ((pq)^{(j-1)/2}-1)/(pq-1) - j + 1)/(pq - 1).
inline SummationIdentities summation_identities(double pq, long j) {
    if (!(pq > 1.0)) throw std::invalid_argument("summation_identities: requires pq > 1");
    if (j < 3 || j % 2 == 0) throw std::invalid_argument("summation_identities: j must be odd and >= 3");
    const double g = std::pow(pq, 0.5 * (j - 1.0));
    SummationIdentities si;
    si.geometric_sum = (g - 1.0) / (pq - 1.0);
    si.weighted_sum = (2.0 * pq * (g - 1.0) / (pq - 1.0) - j + 1.0) / (pq - 1.0);
    return si;
}

struct EnvelopePoint {
    long j = 1;
    double log_U = 0.0;  // log of D_j (1+t)^{-a_j} (t-T0)^{b_j}
    double log_V = 0.0;  // log of Delta_j (1+t)^{-alpha_j} (t-T0)^{beta_j}
};

/// Running lower-bound envelopes at time t for every stored odd j.
inline std::vector<EnvelopePoint> lower_bound_envelope(const IterationTable& table, double t, double T0) {
    if (!(t > T0)) throw std::invalid_argument("lower_bound_envelope: requires t > T0");
    std::vector<EnvelopePoint> env;
    env.reserve(table.rows.size());
    const double lt = std::log(1.0 + t);
    const double ls = std::log(t - T0);
    for (const auto& row : table.rows)
        env.push_back({row.j, row.log_D - row.a * lt + row.b * ls,
                       row.log_Delta - row.alpha * lt + row.beta * ls});
    return env;
}

struct Thresholds {
    double E = std::numeric_limits<double>::quiet_NaN();        // active iff F(n+mu2,q,p) > 0
    double E_tilde = std::numeric_limits<double>::quiet_NaN();  // active iff F(n+mu1,p,q) > 0
    double T_pred = std::numeric_limits<double>::quiet_NaN();   // 2 E eps^{-1/F} on the max-F branch
    bool branch_is_tilde = false;  // whether T_pred came from the E~ / F1 branch
    bool eps0_feasible = false;    // T_pred > 2 T0 + 1, the smallness condition on eps
};

/// Blow-up thresholds
///   E  = (exp((A/(pq-1)+a1) log2 + S_pq(inf)) / K2)^{1/(p F(n+mu2,q,p))},
///   E~ = (exp((A~/(pq-1)+alpha1) log2 + S~_pq(inf)) / C2)^{1/(q F(n+mu1,p,q))},
/// with K2 = K1/((r2+n+1)(r2+n+2)), C2 = C1/((rho2+n+1)(rho2+n+2)), and the
/// lifespan prediction T <= 2 E eps^{-1/F} on the dominant (max-F) branch.
inline Thresholds blowup_thresholds(const IterationConstants& c, const model::SystemParams& sp,
                                    const model::RootPairs& rp, const DataConstants& data) {
    const double F1 = model::F(sp.n + sp.mu1, sp.p, sp.q);
    const double F2 = model::F(sp.n + sp.mu2, sp.q, sp.p);
    if (!(F1 > 0.0) && !(F2 > 0.0))
        throw std::domain_error("blowup_thresholds: requires a subcritical branch (some F > 0)");
    const double pq = sp.p * sp.q;
    const double n = sp.n;
    Thresholds th;
    if (F2 > 0.0) {
        const double K2 = data.K1 / ((rp.r2 + n + 1.0) * (rp.r2 + n + 2.0));
        th.E = std::exp(((c.A / (pq - 1.0) + c.a1) * std::numbers::ln2 + c.Spq_inf - std::log(K2)) /
                        (sp.p * F2));
    }
    if (F1 > 0.0) {
        const double C2 = data.C1 / ((rp.rho2 + n + 1.0) * (rp.rho2 + n + 2.0));
        th.E_tilde =
            std::exp(((c.A_tilde / (pq - 1.0) + c.alpha1) * std::numbers::ln2 + c.Spq_inf_tilde - std::log(C2)) /
                     (sp.q * F1));
    }
    th.branch_is_tilde = F1 > F2;
    th.T_pred = th.branch_is_tilde ? 2.0 * th.E_tilde * std::pow(sp.eps, -1.0 / F1)
                                   : 2.0 * th.E * std::pow(sp.eps, -1.0 / F2);
    th.eps0_feasible = th.T_pred > 2.0 * data.T0 + 1.0;
    return th;
}

}  // namespace siwave::iterkit
