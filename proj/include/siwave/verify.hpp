#pragma once

// Named runtime verification checks, grouped in suites mirroring the library
// modules. Each check reports a worst-case metric against its bound; the CLI
// prints them one per line and the acceptance harness aggregates them.

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "siwave/iterkit.hpp"
#include "siwave/model.hpp"
#include "siwave/numeric.hpp"
#include "siwave/solver.hpp"
#include "siwave/specfun.hpp"
#include "siwave/testfunc.hpp"

namespace siwave::verify {

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    double metric = 0.0;     // worst observed value
    double bound = 0.0;      // pass iff metric <= bound
    double seconds = 0.0;
    std::string note;
};

namespace detail {

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline CheckResult bounded(const std::string& suite, const std::string& name, double metric, double bound,
                           double seconds, std::string note = {}) {
    return {suite, name, metric <= bound, metric, bound, seconds, std::move(note)};
}

inline std::vector<double> log_grid(double lo, double hi, int m) {
    std::vector<double> g(m);
    for (int i = 0; i < m; ++i) g[i] = lo * std::pow(hi / lo, i / (m - 1.0));
    return g;
}

inline std::vector<double> lin_grid(double lo, double hi, int m) {
    std::vector<double> g(m);
    for (int i = 0; i < m; ++i) g[i] = lo + (hi - lo) * i / (m - 1.0);
    return g;
}

inline model::SystemParams zero_coeff(int n, double p, double q) {
    model::SystemParams sp;
    sp.n = n;
    sp.mu1 = sp.mu2 = sp.nu1sq = sp.nu2sq = 0.0;
    sp.p = p;
    sp.q = q;
    return sp;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> specfun_suite() {
    using specfun::BesselOrder;
    std::vector<CheckResult> out;
    const auto orders = {0.0, 0.3, 1.0, 2.5, 5.0};
    const auto tgrid = detail::log_grid(0.1, 50.0, 12);

    {
        detail::Timer tm;
        double worst = 0.0;
        for (double s : orders) {
            for (double t : tgrid) {
                const double h = 1e-5 * t;
                const double fd = (specfun::bessel_k(BesselOrder{s}, t + h) -
                                   specfun::bessel_k(BesselOrder{s}, t - h)) /
                                  (2.0 * h);
                const double an = specfun::bessel_k_derivative(BesselOrder{s}, t);
                worst = std::max(worst, std::fabs(an - fd) / std::fabs(an));
            }
        }
        out.push_back(detail::bounded("specfun", "k4_derivative_identity", worst, 1e-7, tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        for (double s : orders) {
            for (double t : tgrid) {
                const double k0 = specfun::bessel_k(BesselOrder{s}, t);
                const double k1 = specfun::bessel_k(BesselOrder{s + 1.0}, t);
                const double k2 = specfun::bessel_k(BesselOrder{s + 2.0}, t);
                const double d1 = -k1 + (s / t) * k0;
                const double d2 = (k2 - ((s + 1.0) / t) * k1) + (s / t) * d1 - (s / (t * t)) * k0;
                const double resid = t * t * d2 + t * d1 - (t * t + s * s) * k0;
                worst = std::max(worst, std::fabs(resid) / (t * t * std::fabs(d2)));
            }
        }
        out.push_back(detail::bounded("specfun", "bessel_ode_residual", worst, 1e-7, tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        for (double s : {0.0, 0.3, 0.5, 1.0}) {
            for (double t : {40.0, 60.0, 100.0}) {
                const double ratio = specfun::bessel_k(BesselOrder{s}, t) /
                                     (std::sqrt(std::numbers::pi / (2.0 * t)) * std::exp(-t));
                worst = std::max(worst, std::fabs(ratio - 1.0));
            }
        }
        out.push_back(detail::bounded("specfun", "k1_asymptotic_band", worst, 0.01, tm.seconds(),
                                      "orders <= 1; larger orders carry the O(1/t) term"));
    }
    {
        detail::Timer tm;
        double worst = 0.0;  // |ratio - 1| against the O(1/t) envelope C/t, C = 6
        for (double s : {1.5, 2.0, 2.5, 3.0}) {
            for (double t : {40.0, 60.0, 100.0}) {
                const double ratio = specfun::bessel_k(BesselOrder{s}, t) /
                                     (std::sqrt(std::numbers::pi / (2.0 * t)) * std::exp(-t));
                worst = std::max(worst, std::fabs(ratio - 1.0) * t / 6.0);
            }
        }
        out.push_back(detail::bounded("specfun", "k1_asymptotic_order", worst, 1.0, tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        for (double a : {0.5, 1.7, 3.2}) {
            for (double c : {0.7, 2.5, 4.0}) {
                for (double z : detail::lin_grid(0.0, 0.9, 10)) {
                    const double got = specfun::hyp2f1(a, c, c, z).value;
                    worst = std::max(worst, numeric::rel_err(got, std::pow(1.0 - z, -a)));
                }
            }
        }
        out.push_back(detail::bounded("specfun", "hyp2f1_euler_identity", worst, 1e-10, tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        const double cases[][3] = {{0.8, 1.4, 2.6}, {1.5, 0.5, 1.2}, {2.25, 1.1, 3.75}};
        for (auto& abc : cases) {
            const double a = abc[0], b = abc[1], c = abc[2];
            for (double z : detail::lin_grid(0.05, 0.8, 12)) {
                const double f = specfun::hyp2f1(a, b, c, z).value;
                const double f1 = a * b / c * specfun::hyp2f1(a + 1, b + 1, c + 1, z).value;
                const double f2 =
                    a * b / c * (a + 1) * (b + 1) / (c + 1) * specfun::hyp2f1(a + 2, b + 2, c + 2, z).value;
                const double resid = z * (1.0 - z) * f2 + (c - (a + b + 1.0) * z) * f1 - a * b * f;
                const double scale = std::max({std::fabs(z * (1.0 - z) * f2),
                                               std::fabs((c - (a + b + 1.0) * z) * f1), std::fabs(a * b * f)});
                worst = std::max(worst, std::fabs(resid) / scale);
            }
        }
        out.push_back(detail::bounded("specfun", "hyp2f1_ode_residual", worst, 1e-6, tm.seconds()));
    }
    {
        detail::Timer tm;
        bool ok = true;
        struct Case {
            double a, b, c, lo, hi;
        };
        for (const Case& cs : {Case{0.6, 0.6, 2.5, 0.5, 2.0}, Case{1.0, 1.0, 2.0, 0.5, 1.5},
                               Case{1.2, 1.1, 1.3, 0.05, 1.5}}) {
            for (int k = 2; k <= 6; ++k) {
                const double z = 1.0 - std::pow(10.0, -k);
                const double v = specfun::hyp2f1(cs.a, cs.b, cs.c, z).value;
                const double cab = cs.c - cs.a - cs.b;
                const double model =
                    std::fabs(cab) < 1e-14 ? -std::log(1.0 - z) : (cab < 0.0 ? std::pow(1.0 - z, cab) : 1.0);
                const double ratio = v / model;
                if (ratio < cs.lo || ratio > cs.hi) ok = false;
            }
        }
        out.push_back({"specfun", "hyp2f1_growth_class", ok, ok ? 0.0 : 1.0, 0.5, tm.seconds(),
                       "ratio to the limit model within fixed bounds"});
    }
    return out;
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> testfunc_suite() {
    using testfunc::SelfSimilarParams;
    using testfunc::TimeFactor;
    std::vector<CheckResult> out;

    {
        detail::Timer tm;
        double worst = 0.0;
        struct Case {
            double mu, nusq;
        };
        for (const Case& c : {Case{0.0, 0.0}, Case{1.0, 0.0}, Case{2.0, 0.25}, Case{3.0, 1.0}}) {
            const TimeFactor tf{c.mu, c.nusq};
            for (double t : detail::lin_grid(0.2, 8.0, 8)) {
                const double h = 1e-4 * (1.0 + t);
                const double l = testfunc::lambda_factor(tf, t).value;
                const double l1 = testfunc::lambda_factor(tf, t).derivative;
                const double l2 = (testfunc::lambda_factor(tf, t + h).derivative -
                                   testfunc::lambda_factor(tf, t - h).derivative) /
                                  (2.0 * h);
                const double w = 1.0 + t;
                const double resid = l2 - c.mu / w * l1 + ((c.mu + c.nusq) / (w * w) - 1.0) * l;
                worst = std::max(worst, std::fabs(resid) / std::fabs(l2));
            }
        }
        out.push_back(detail::bounded("testfunc", "lambda_ode_residual", worst, 1e-6, tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        for (int n : {1, 2, 3}) {
            for (double r : detail::lin_grid(0.1, 5.0, 12)) {
                const double h = 5e-4 * (1.0 + r);
                auto f = [&](double x) { return testfunc::phi_yz(n, x); };
                const double lap =
                    numeric::diff2_central(f, r, h) + (n - 1.0) / r * numeric::diff_central(f, r, h);
                worst = std::max(worst, numeric::rel_err(lap, f(r)));
            }
        }
        out.push_back(detail::bounded("testfunc", "phi_eigenfunction_residual", worst, 1e-5, tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        for (int n : {1, 2, 3}) {
            auto scaled = [&](double r) {
                return testfunc::phi_yz(n, r) * std::pow(r, 0.5 * (n - 1.0)) * std::exp(-r);
            };
            worst = std::max(worst, std::fabs(scaled(20.0) / scaled(40.0) - 1.0));
        }
        out.push_back(detail::bounded("testfunc", "phi_growth_asymptotics", worst, 0.02, tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        struct Case {
            double beta, mu, nusq;
            int n;
            double t, zfrac;
        };
        const Case cases[] = {
            {2.0, 1.0, 0.0, 3, 1.0, 0.3},  {1.5, 0.0, 0.0, 2, 0.7, 0.5},  {3.2, 2.0, 0.25, 3, 2.0, 0.6},
            {2.6, 3.0, 1.0, 1, 1.4, 0.25}, {1.8, 0.5, 0.0, 2, 3.0, 0.45},
        };
        for (const auto& c : cases) {
            const SelfSimilarParams sp{c.beta, c.mu, c.nusq};
            const double x = std::sqrt(c.zfrac) * (1.0 + c.t);
            const double ht = 1e-4 * (1.0 + c.t);
            const double Phi_tt = (testfunc::phi_beta_dt(sp, c.n, c.t + ht, x) -
                                   testfunc::phi_beta_dt(sp, c.n, c.t - ht, x)) /
                                  (2.0 * ht);
            const double Phi_t = testfunc::phi_beta_dt(sp, c.n, c.t, x);
            const double Phi_v = testfunc::phi_beta(sp, c.n, c.t, x);
            const double w = 1.0 + c.t;
            const double z = c.zfrac;
            const double a = sp.a_beta(), b = sp.b_beta(), cc = 0.5 * c.n;
            const double f1 = a * b / cc * specfun::hyp2f1(a + 1, b + 1, cc + 1, z).value;
            const double f2 =
                a * b / cc * (a + 1) * (b + 1) / (cc + 1) * specfun::hyp2f1(a + 2, b + 2, cc + 2, z).value;
            const double lap = std::pow(w, 1.0 - c.beta) * (4.0 * z * f2 + 2.0 * c.n * f1) / (w * w);
            const double resid = Phi_tt - lap - c.mu * (Phi_t / w - Phi_v / (w * w)) + c.nusq / (w * w) * Phi_v;
            const double scale = std::max({std::fabs(Phi_tt), std::fabs(lap), std::fabs(Phi_v)});
            worst = std::max(worst, std::fabs(resid) / scale);
        }
        out.push_back(detail::bounded("testfunc", "phi_beta_adjoint_residual", worst, 1e-5, tm.seconds()));
    }
    {
        detail::Timer tm;
        // (ii) per-decade ratio of |dPhi/dt| to Phi_{beta+1}, stability across scales
        const SelfSimilarParams ss{2.0, 1.0, 0.0};
        const SelfSimilarParams ss1{3.0, 1.0, 0.0};
        double dec_max[3] = {0.0, 0.0, 0.0};
        const double t_dec[4] = {0.0, 10.0, 100.0, 1000.0};
        for (int d = 0; d < 3; ++d)
            for (double t : detail::lin_grid(t_dec[d], t_dec[d + 1], 6))
                for (double zf : detail::lin_grid(0.0, 0.97, 10)) {
                    const double x = std::sqrt(zf) * (1.0 + t);
                    dec_max[d] = std::max(dec_max[d], std::fabs(testfunc::phi_beta_dt(ss, 3, t, x)) /
                                                          testfunc::phi_beta(ss1, 3, t, x));
                }
        const double overall = std::max({dec_max[0], dec_max[1], dec_max[2]});
        const double drift = std::fabs(dec_max[2] - dec_max[1]) / std::max(1e-300, dec_max[1]);
        out.push_back(detail::bounded("testfunc", "lemma36_ii_ratio_bound", overall, 20.0, tm.seconds()));
        out.push_back(detail::bounded("testfunc", "lemma36_ii_scale_stability", drift, 0.5, tm.seconds()));
    }
    {
        detail::Timer tm;
        const SelfSimilarParams ss{1.2, 1.0, 0.0};
        double lo = 1e300, hi = 0.0;
        for (double t : {0.0, 1.0, 10.0, 100.0, 1000.0})
            for (double zf : detail::lin_grid(0.0, 0.9999, 20)) {
                const double x = std::sqrt(zf) * (1.0 + t);
                const double ratio = testfunc::phi_beta(ss, 3, t, x) / std::pow(1.0 + t, 1.0 - ss.beta);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        const bool ok = lo >= 0.99 && hi <= 100.0;
        out.push_back({"testfunc", "lemma36_iii_two_sided_band", ok, hi, 100.0, tm.seconds(),
                       "lower edge " + std::to_string(lo)});
    }
    {
        detail::Timer tm;
        const SelfSimilarParams ss{2.4, 1.0, 0.0};
        double lo = 1e300, hi = 0.0;
        for (double t : {0.0, 1.0, 10.0, 100.0})
            for (double zf : detail::lin_grid(0.0, 0.999, 20)) {
                const double x = std::sqrt(zf) * (1.0 + t);
                const double model = std::pow(1.0 + t, 1.0 - ss.beta) * std::pow(1.0 - zf, 1.5 - ss.beta);
                const double ratio = testfunc::phi_beta(ss, 3, t, x) / model;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        const bool ok = lo >= 0.5 && hi <= 100.0;
        out.push_back({"testfunc", "lemma36_iv_two_sided_band", ok, hi, 100.0, tm.seconds(),
                       "lower edge " + std::to_string(lo)});
    }
    {
        detail::Timer tm;
        double worst = 0.0;
        struct Case {
            double mu, nusq;
            int n;
        };
        for (const Case& c : {Case{0.0, 0.0, 1}, Case{2.0, 0.25, 3}, Case{3.0, 1.0, 2}}) {
            const double sd = std::sqrt((c.mu - 1.0) * (c.mu - 1.0) - 4.0 * c.nusq);
            const SelfSimilarParams ss{c.n + 0.5 * (sd + 1.0 - c.mu), c.mu, c.nusq};
            for (double t : {0.0, 0.5, 2.0, 7.0})
                for (double zf : {0.0, 0.3, 0.6, 0.85}) {
                    const double x = std::sqrt(zf) * (1.0 + t);
                    worst = std::max(worst, numeric::rel_err(testfunc::V_weight(c.mu, c.nusq, c.n, t, x),
                                                             testfunc::phi_beta(ss, c.n, t, x)));
                }
        }
        out.push_back(detail::bounded("testfunc", "v_equals_phi_beta", worst, 1e-9, tm.seconds()));
    }
    {
        detail::Timer tm;
        std::mt19937_64 gen{20240901u};
        std::uniform_real_distribution<double> mu_d(0.0, 3.0), frac(0.0, 1.0), beta_d(0.0, 4.0);
        double worst = 0.0;
        for (int it = 0; it < 60; ++it) {
            const double mu = mu_d(gen);
            const double nusq = frac(gen) * 0.25 * (mu - 1.0) * (mu - 1.0);
            const double sd = std::sqrt((mu - 1.0) * (mu - 1.0) - 4.0 * nusq);
            const double beta = 0.5 * (sd + 1.0 - mu) + 0.1 + beta_d(gen);
            const SelfSimilarParams ss{beta, mu, nusq};
            worst = std::max(worst, std::fabs(ss.a_beta() + ss.b_beta() + 1.0 - (beta + 0.5 * (mu + 1.0))));
            worst = std::max(worst,
                             std::fabs(ss.a_beta() * ss.b_beta() - 0.25 * (beta * (beta + mu - 1.0) + nusq)));
            const SelfSimilarParams up{beta + 1.0, mu, nusq};
            worst = std::max(worst, std::fabs(up.a_beta() - ss.a_beta() - 0.5));
        }
        out.push_back(detail::bounded("testfunc", "selfsimilar_parameter_identities", worst, 1e-13,
                                      tm.seconds()));
    }
    {
        detail::Timer tm;
        double worst_c1 = 0.0, worst_c2 = 0.0;
        for (double R : {4.0, 16.0, 64.0}) {
            const testfunc::CutoffSpec spec{R};
            for (double s : detail::lin_grid(0.5, 0.999999, 1000)) {
                const auto cv = testfunc::cutoff(spec, s * R);
                if (cv.psi_star <= 0.0) continue;
                worst_c1 = std::max(worst_c1, std::fabs(cv.dpsi) * R / std::pow(cv.psi_star, 0.5));
                worst_c2 = std::max(worst_c2, std::fabs(cv.d2psi) * R * R / std::pow(cv.psi_star, 0.5));
            }
        }
        out.push_back(detail::bounded("testfunc", "cutoff_first_derivative_bound", worst_c1, 25.0, tm.seconds()));
        out.push_back(detail::bounded("testfunc", "cutoff_second_derivative_bound", worst_c2, 400.0, tm.seconds()));
    }
    {
        detail::Timer tm;
        bool ok = true;
        std::string note;
        const int n = 3;
        const double mu = 1.0, p = 2.0, r0 = 0.5;
        struct Case {
            double beta, want;
            bool log_case;
        };
        for (const Case& c : {Case{1.0, 4.0, false}, Case{2.6, 2.0, false}, Case{2.0, 0.0, true}}) {
            const SelfSimilarParams ss{c.beta, mu, 0.0};
            auto res = testfunc::lemma38_integral(ss, n, p, r0, 16.0);
            if (c.log_case) {
                if (res.growth != testfunc::GrowthClass::PowerLog) ok = false;
            } else {
                if (std::fabs(res.fitted_exponent - c.want) > 0.05 * c.want) ok = false;
                if (res.growth != testfunc::GrowthClass::Power) ok = false;
            }
            note += std::to_string(res.fitted_exponent) + " ";
        }
        out.push_back({"testfunc", "lemma38_growth_ladder", ok, ok ? 0.0 : 1.0, 0.5, tm.seconds(), note});
    }
    return out;
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> model_suite() {
    std::vector<CheckResult> out;
    {
        detail::Timer tm;
        double worst = 0.0;
        for (int n = 2; n <= 6; ++n) {
            const double p0 = model::strauss_exponent(n);
            worst = std::max(worst, std::fabs((n - 1.0) * p0 * p0 - (n + 1.0) * p0 - 2.0));
            worst = std::max(worst, std::fabs(model::F(n, p0, p0)));
            // independent route: bisect F(n, p, p) = 0 on p (F decreasing in p)
            double lo = 1.0 + 1e-9, hi = 12.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (model::F(n, mid, mid) > 0.0 ? lo : hi) = mid;
            }
            worst = std::max(worst, std::fabs(0.5 * (lo + hi) - p0));
        }
        out.push_back(detail::bounded("model", "strauss_reduction", worst, 1e-12, tm.seconds(),
                                      "quadratic root vs bisected F(n,p,p) = 0"));
    }
    {
        detail::Timer tm;
        std::mt19937_64 gen{17};
        std::uniform_real_distribution<double> pq_d(1.1, 5.0);
        double worst = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double p = pq_d(gen), q = pq_d(gen);
            for (int n : {1, 2, 3, 4}) {
                auto rep = model::classify(detail::zero_coeff(n, p, q));
                worst = std::max(worst,
                                 std::fabs(rep.F1 - ((p + 2.0 + 1.0 / q) / (p * q - 1.0) - 0.5 * (n - 1.0))));
                worst = std::max(worst,
                                 std::fabs(rep.F2 - ((q + 2.0 + 1.0 / p) / (p * q - 1.0) - 0.5 * (n - 1.0))));
            }
        }
        out.push_back(detail::bounded("model", "mu_zero_reduction", worst, 1e-14, tm.seconds()));
    }
    {
        detail::Timer tm;
        model::SystemParams sp = detail::zero_coeff(2, 2, 2);
        sp.mu1 = 1.5;
        sp.mu2 = 0.5;
        model::SystemParams sw = sp;
        std::swap(sw.mu1, sw.mu2);
        std::swap(sw.nu1sq, sw.nu2sq);
        auto g1 = model::pq_grid(sp, 1.5, 4.0, 1.5, 4.0, 50, 50);
        auto g2 = model::pq_grid(sw, 1.5, 4.0, 1.5, 4.0, 50, 50);
        bool ok = true;
        for (std::size_t ip = 0; ip < 50; ++ip)
            for (std::size_t iq = 0; iq < 50; ++iq) {
                if (g1.at(ip, iq).report.regime != g2.at(iq, ip).report.regime) ok = false;
                if (g1.at(ip, iq).report.F1 != g2.at(iq, ip).report.F2) ok = false;
            }
        out.push_back({"model", "swap_symmetry_50x50", ok, ok ? 0.0 : 1.0, 0.5, tm.seconds(), ""});
    }
    {
        detail::Timer tm;
        bool ok = true;
        for (double q : {1.5, 2.0, 3.0})
            for (double p : {1.5, 2.5, 4.0}) {
                double prev = model::F(1.0, p, q);
                for (double d : {1.5, 2.0, 3.0, 4.5, 6.0}) {
                    const double cur = model::F(d, p, q);
                    if (cur >= prev) ok = false;
                    prev = cur;
                }
            }
        out.push_back({"model", "f_monotone_in_d", ok, ok ? 0.0 : 1.0, 0.5, tm.seconds(), ""});
    }
    {
        detail::Timer tm;
        std::mt19937_64 gen{19};
        std::uniform_real_distribution<double> mu_d(0.0, 4.0), frac(0.0, 1.0);
        double worst = 0.0;
        for (int it = 0; it < 200; ++it) {
            model::SystemParams sp = detail::zero_coeff(3, 2.0, 2.0);
            sp.mu1 = mu_d(gen);
            sp.mu2 = mu_d(gen);
            sp.nu1sq = frac(gen) * 0.25 * (sp.mu1 - 1.0) * (sp.mu1 - 1.0);
            sp.nu2sq = frac(gen) * 0.25 * (sp.mu2 - 1.0) * (sp.mu2 - 1.0);
            auto rp = model::roots(sp);
            worst = std::max(worst, std::fabs(rp.r1 + rp.r2 - (sp.mu1 - 1.0)));
            worst = std::max(worst, std::fabs(rp.r1 * rp.r2 - sp.nu1sq));
            worst = std::max(worst, std::fabs(rp.rho1 + rp.rho2 - (sp.mu2 - 1.0)));
            worst = std::max(worst, std::fabs(rp.rho1 * rp.rho2 - sp.nu2sq));
        }
        out.push_back(detail::bounded("model", "root_identities", worst, 1e-13, tm.seconds()));
    }
    return out;
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> iterkit_suite() {
    using iterkit::BigRational;
    std::vector<CheckResult> out;
    {
        detail::Timer tm;
        std::mt19937_64 gen{101};
        auto rand_rational = [&](double lo, double hi) {
            std::uniform_int_distribution<long> den_d(2, 12);
            const long den = den_d(gen);
            std::uniform_int_distribution<long> num_d(static_cast<long>(std::ceil(lo * den)) + 1,
                                                      static_cast<long>(std::floor(hi * den)) - 1);
            return BigRational(num_d(gen), den);
        };
        bool ok = true;
        for (int draw = 0; draw < 5; ++draw) {
            const BigRational mu1 = rand_rational(0.0, 3.0);
            const BigRational mu2 = rand_rational(0.0, 3.0);
            const BigRational r2 = (mu1 - BigRational(1)) / BigRational(2);
            const BigRational rho2 = (mu2 - BigRational(1)) / BigRational(2);
            const BigRational p = rand_rational(1.05, 4.0);
            const BigRational q = rand_rational(1.05, 4.0);
            const long n = 1 + draw % 4;
            auto seq = iterkit::sequences_recurrence_exact(n, r2, rho2, p, q, mu1, mu2, 25);
            if (seq.budget_exceeded || seq.j.size() != 13) ok = false;
            for (std::size_t row = 0; row < seq.j.size() && ok; ++row) {
                auto cf = iterkit::sequences_closed_form_exact(n, r2, rho2, p, q, mu1, mu2, seq.j[row]);
                if (!(seq.a[row] == cf.a && seq.b[row] == cf.b && seq.alpha[row] == cf.alpha &&
                      seq.beta[row] == cf.beta))
                    ok = false;
            }
        }
        out.push_back({"iterkit", "closed_form_equals_recurrence_exact", ok, ok ? 0.0 : 1.0, 0.5,
                       tm.seconds(), "odd j <= 25, 5 rational draws, exact equality"});
    }
    {
        detail::Timer tm;
        std::mt19937_64 gen{103};
        std::uniform_real_distribution<double> pq_d(1.1, 9.0);
        double worst = 0.0;
        for (int it = 0; it < 60; ++it) {
            const double pq = pq_d(gen);
            const long j = 3 + 2 * (it % 12);
            double geo = 0.0, wtd = 0.0;
            for (long k = 0; k <= (j - 3) / 2; ++k) geo += std::pow(pq, static_cast<double>(k));
            for (long k = 1; k <= (j - 1) / 2; ++k) wtd += (j + 1.0 - 2.0 * k) * std::pow(pq, k - 1.0);
            auto s = iterkit::summation_identities(pq, j);
            worst = std::max(worst, numeric::rel_err(s.geometric_sum, geo));
            worst = std::max(worst, numeric::rel_err(s.weighted_sum, wtd));
        }
        out.push_back(detail::bounded("iterkit", "summation_identities", worst, 1e-12, tm.seconds()));
    }
    {
        detail::Timer tm;
        std::mt19937_64 gen{107};
        std::uniform_real_distribution<double> pq_d(1.1, 4.5), mu_d(0.0, 4.0), frac(0.0, 1.0);
        double worst = 0.0;
        bool signs_ok = true;
        for (int it = 0; it < 100; ++it) {
            model::SystemParams sp = detail::zero_coeff(1 + it % 4, pq_d(gen), pq_d(gen));
            sp.mu1 = mu_d(gen);
            sp.mu2 = mu_d(gen);
            sp.nu1sq = frac(gen) * 0.25 * (sp.mu1 - 1.0) * (sp.mu1 - 1.0);
            sp.nu2sq = frac(gen) * 0.25 * (sp.mu2 - 1.0) * (sp.mu2 - 1.0);
            auto rp = model::roots(sp);
            auto c = iterkit::constants(sp, rp);
            const double lhs = (c.B - c.A) / (sp.p * sp.q - 1.0) + c.b1 - c.a1;
            const double F2 = model::F(sp.n + sp.mu2, sp.q, sp.p);
            const double lhs_t = (c.B_tilde - c.A_tilde) / (sp.p * sp.q - 1.0) + c.beta1 - c.alpha1;
            const double F1 = model::F(sp.n + sp.mu1, sp.p, sp.q);
            worst = std::max(worst, numeric::rel_err(lhs, sp.p * F2));
            worst = std::max(worst, numeric::rel_err(lhs_t, sp.q * F1));
            if (std::signbit(lhs) != std::signbit(F2) || std::signbit(lhs_t) != std::signbit(F1))
                signs_ok = false;
        }
        out.push_back(detail::bounded("iterkit", "exponent_sign_identity", worst, 1e-12, tm.seconds(),
                                      signs_ok ? "signs agree on 100 draws" : "SIGN MISMATCH"));
        if (!signs_ok) out.back().pass = false;
    }
    {
        detail::Timer tm;
        std::mt19937_64 gen{109};
        std::uniform_real_distribution<double> pq_d(1.3, 3.0);
        double worst = 0.0;
        int checked = 0;
        while (checked < 50) {
            const double p = pq_d(gen), q = pq_d(gen);
            for (int n : {1, 2}) {
                const double mu1 = 2.0 * (p + 2.0 + 1.0 / q) / (p * q - 1.0) - n + 1.0;
                const double mu2 = 2.0 * (q + 2.0 + 1.0 / p) / (p * q - 1.0) - n + 1.0;
                if (mu1 < 0.0 || mu2 < 0.0) continue;
                const double beta_q = 0.5 * (n - mu1 + 1.0) - 1.0 / q;
                const double beta_p = 0.5 * (n - mu2 + 1.0) - 1.0 / p;
                worst = std::max(worst, std::fabs(beta_q - 1.0 - (n - 0.5 * (n + mu2 - 1.0) * p)));
                worst = std::max(worst, std::fabs(beta_p - 1.0 - (n - 0.5 * (n + mu1 - 1.0) * q)));
                ++checked;
            }
        }
        out.push_back(detail::bounded("iterkit", "double_critical_identities", worst, 1e-10, tm.seconds()));
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        sp.eps = 0.5;
        auto rp = model::roots(sp);
        auto c = iterkit::constants(sp, rp);
        iterkit::DataConstants data;
        auto table = iterkit::sequences_recurrence(c, sp, rp, data, 25);
        auto th = iterkit::blowup_thresholds(c, sp, rp, data);
        bool ok = std::isfinite(th.T_pred) && th.T_pred > 0.0;
        auto env_hi = iterkit::lower_bound_envelope(table, std::max(2.0 * th.T_pred, 2.0 * data.T0 + 1.5),
                                                    data.T0);
        for (std::size_t i = 1; i < env_hi.size(); ++i)
            if (env_hi[i].j > c.j0 && env_hi[i].log_U <= env_hi[i - 1].log_U) ok = false;
        auto env_lo = iterkit::lower_bound_envelope(table, data.T0 + 1e-3, data.T0);
        if (env_lo.back().log_U >= env_lo.front().log_U) ok = false;
        auto growth_rate = [&](double t) {
            auto env = iterkit::lower_bound_envelope(table, t, data.T0);
            return env.back().log_U / std::pow(sp.p * sp.q, 0.5 * (env.back().j - 1.0));
        };
        if (!(growth_rate(th.T_pred) > 0.0)) ok = false;  // blow-up point t* <= T_pred
        out.push_back({"iterkit", "envelope_dichotomy", ok, ok ? 0.0 : 1.0, 0.5, tm.seconds(),
                       "divergence above the threshold, decay near T0"});
    }
    {
        detail::Timer tm;
        double worst = -1e300;  // max of (bound - log D_j), must stay <= 0
        struct Case {
            int n;
            double p, q, mu1, mu2, eps;
        };
        for (const auto& cs : {Case{1, 2.0, 2.0, 0.0, 0.0, 0.5}, Case{3, 2.5, 2.0, 1.0, 0.5, 0.25},
                               Case{2, 3.0, 1.5, 2.0, 0.0, 1.0}}) {
            model::SystemParams sp = detail::zero_coeff(cs.n, cs.p, cs.q);
            sp.mu1 = cs.mu1;
            sp.mu2 = cs.mu2;
            sp.eps = cs.eps;
            auto rp = model::roots(sp);
            auto c = iterkit::constants(sp, rp);
            auto table = iterkit::sequences_recurrence(c, sp, rp, {}, 25);
            for (const auto& row : table.rows) {
                if (row.j <= c.j0 || row.j == 1) continue;
                const double g = std::pow(sp.p * sp.q, 0.5 * (row.j - 1.0));
                const double slack = 1e-9 * std::fabs(row.log_D);
                worst = std::max(worst, (g * (table.rows[0].log_D - c.Spq_inf) - row.log_D) / (1.0 + slack));
                worst = std::max(worst, g * (table.rows[0].log_Delta - c.Spq_inf_tilde) - row.log_Delta);
            }
        }
        out.push_back(detail::bounded("iterkit", "log_amplitude_lower_bound", worst, 0.0, tm.seconds(),
                                      "log D_j >= (pq)^{(j-1)/2}(log D_1 - S) beyond j0"));
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        sp.eps = 0.25;
        auto rp = model::roots(sp);
        auto c = iterkit::constants(sp, rp);
        auto th1 = iterkit::blowup_thresholds(c, sp, rp, {});
        auto sp2 = sp;
        sp2.eps = 0.125;
        auto th2 = iterkit::blowup_thresholds(c, sp2, rp, {});
        const double Fmax = std::max(model::F(sp.n + sp.mu1, sp.p, sp.q), model::F(sp.n + sp.mu2, sp.q, sp.p));
        const double worst = numeric::rel_err(th2.T_pred / th1.T_pred, std::pow(2.0, 1.0 / Fmax));
        out.push_back(detail::bounded("iterkit", "threshold_eps_scaling", worst, 1e-12, tm.seconds()));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

struct MmsProblem {
    double a = 1.0;
    double omega = 3.0;

    double rho(double r) const {
        if (r >= a) return 0.0;
        const double s = 1.0 - (r / a) * (r / a);
        return s * s * s * s;
    }
    double lap_rho(double r, int n) const {
        if (r >= a) return 0.0;
        const double a2 = a * a;
        const double s = 1.0 - r * r / a2;
        return -8.0 / a2 * s * s * s + 48.0 * r * r / (a2 * a2) * s * s + (n - 1.0) * (-8.0 / a2 * s * s * s);
    }
    double exact(double t, double r) const { return std::cos(omega * t) * rho(r); }
    double force(double t, double r, double mu, double nusq, int n) const {
        const double c = std::cos(omega * t), s = std::sin(omega * t);
        return -omega * omega * c * rho(r) - c * lap_rho(r, n) - mu * omega * s * rho(r) / (1.0 + t) +
               nusq * c * rho(r) / ((1.0 + t) * (1.0 + t));
    }
};

inline double mms_error(int nr) {
    model::SystemParams sp;
    sp.n = 3;
    sp.mu1 = 2.0;
    sp.nu1sq = 0.25;
    sp.mu2 = 1.0;
    sp.nu2sq = 0.0;
    sp.p = sp.q = 2.0;
    MmsProblem m;
    solver::GridSpec grid;
    grid.r_max = 2.2;
    grid.nr = nr;
    grid.t_max = 1.0;
    grid.cfl = 0.5;
    solver::InitialData data;
    data.r0 = m.a;
    data.cu1 = 0.0;
    data.cv1 = 0.0;
    solver::SolverOptions opts;
    opts.nonlinearity = false;
    opts.force_u = [&, m](double t, double r) { return m.force(t, r, 2.0, 0.25, 3); };
    opts.force_v = [&, m](double t, double r) { return m.force(t, r, 1.0, 0.0, 3); };
    solver::RadialIntegrator integ(sp, data, grid, 1.0, opts);
    const long steps = static_cast<long>(std::floor(grid.t_max / integ.dt()));
    for (long s = 0; s < steps; ++s) integ.step();
    double err = 0.0;
    for (int i = 0; i <= nr; ++i) {
        const double r = i * integ.dr();
        err = std::max(err, std::fabs(integ.u()[i] - m.exact(integ.t(), r)));
        err = std::max(err, std::fabs(integ.v()[i] - m.exact(integ.t(), r)));
    }
    return err;
}

}  // namespace detail

inline std::vector<CheckResult> solver_suite() {
    std::vector<CheckResult> out;
    {
        detail::Timer tm;
        double err[4];
        int idx = 0;
        for (int nr : {64, 128, 256, 512}) err[idx++] = detail::mms_error(nr);
        double omin = 10.0, omax = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double order = std::log2(err[k] / err[k + 1]);
            omin = std::min(omin, order);
            omax = std::max(omax, order);
        }
        const bool ok = omin >= 1.8 && omax <= 2.2;
        out.push_back({"solver", "mms_convergence_order", ok, omin, 2.2, tm.seconds(),
                       "orders in [" + std::to_string(omin) + ", " + std::to_string(omax) + "]"});
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        solver::GridSpec grid;
        grid.r_max = 12.0;
        grid.nr = 1000;
        grid.t_max = 10.0;
        solver::RadialIntegrator integ(sp, solver::InitialData{}, grid, 0.5);
        double worst = 0.0;
        for (int s = 1; s <= 100; ++s) {
            integ.step();
            const double edge = 1.0 + integ.t() + 2.0 * integ.dr();
            double inside = 0.0, outside = 0.0;
            for (int i = 0; i <= grid.nr; ++i) {
                const double r = i * integ.dr();
                const double a = std::max(std::fabs(integ.u()[i]), std::fabs(integ.v()[i]));
                (r > edge ? outside : inside) = std::max(r > edge ? outside : inside, a);
            }
            worst = std::max(worst, outside / inside);
        }
        out.push_back(detail::bounded("solver", "finite_speed_support", worst, 1e-10, tm.seconds()));
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        solver::GridSpec grid;
        grid.r_max = 8.0;
        grid.nr = 600;
        grid.t_max = 4.0;
        grid.refine_levels = 1;
        solver::SolverOptions opts;
        opts.series_stride = 1;
        auto res = solver::run_lifespan(sp, solver::InitialData{}, grid, 0.5, 1e8, opts);
        const auto& s = res.series;
        const double dt = s.t[1] - s.t[0];
        double worst = 0.0;
        bool f_nonneg = true;
        for (std::size_t m = 2; m + 2 < s.t.size(); ++m) {
            const double u2 = (s.U[m + 1] - 2.0 * s.U[m] + s.U[m - 1]) / (dt * dt);
            worst = std::max(worst,
                             std::fabs(u2 - s.int_vp[m]) / std::max(std::fabs(s.int_vp[m]), std::fabs(u2)));
            if (s.Fw[m] < -1e-12) f_nonneg = false;
        }
        out.push_back(detail::bounded("solver", "u_ode_residual", worst, 5e-2, tm.seconds(),
                                      f_nonneg ? "F(t) >= 0 along the run" : "F(t) NEGATIVE"));
        if (!f_nonneg) out.back().pass = false;
    }
    {
        detail::Timer tm;
        // Y on a synthetic constant weight: Y(R) = |B_1| c_psi R = R/2 (n = 1)
        solver::FieldHistory h;
        h.n = 1;
        h.dr = 0.01;
        for (double t = 0.0; t <= 4.0 + 1e-12; t += 0.002) {
            h.t.push_back(t);
            h.u.push_back(std::vector<double>(101, 0.0));
            h.v.push_back(std::vector<double>(101, 0.0));
        }
        auto one = [](double, double, double, double) { return 1.0; };
        const double Rs[] = {1.0, 2.0, 3.5};
        auto res = solver::y_functional(h, one, Rs);
        double worst = 0.0;
        for (const auto& pt : res.points) worst = std::max(worst, numeric::rel_err(pt.Y, 0.5 * pt.R));
        out.push_back(detail::bounded("solver", "y_constant_weight_analytic", worst, 1e-6, tm.seconds()));
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        solver::GridSpec grid;
        grid.r_max = 8.0;
        grid.nr = 400;
        grid.t_max = 4.0;
        grid.refine_levels = 1;
        solver::SolverOptions opts;
        opts.history_snapshots = 800;
        auto res = solver::run_lifespan(sp, solver::InitialData{}, grid, 0.5, 1e8, opts);
        auto w = [](double, double, double u, double) { return u * u; };
        const double Rs[] = {1.5, 2.5, 3.5};
        auto y = solver::y_functional(res.history, w, Rs);
        double worst_deriv = 0.0;
        bool majorant_ok = true;
        for (const auto& pt : y.points) {
            const double hr = 1e-3 * pt.R;
            const double R2[] = {pt.R - hr, pt.R + hr};
            auto yy = solver::y_functional(res.history, w, R2);
            const double dy = (yy.points[1].Y - yy.points[0].Y) / (2.0 * hr);
            worst_deriv = std::max(worst_deriv, numeric::rel_err(dy, pt.inner_at_R / pt.R));
            if (pt.Y > pt.inner_psi_at_R * (1.0 + 1e-12)) majorant_ok = false;
        }
        out.push_back(detail::bounded("solver", "y_derivative_identity", worst_deriv, 1e-4, tm.seconds()));
        out.push_back({"solver", "y_majorant_inequality", majorant_ok, majorant_ok ? 0.0 : 1.0, 0.5,
                       tm.seconds(), "Y(R) <= intint w psi_R at every sampled R"});
    }
    {
        detail::Timer tm;
        model::SystemParams sp = detail::zero_coeff(1, 2, 2);
        sp.mu1 = 1.0;
        solver::GridSpec grid;
        grid.r_max = 6.0;
        grid.nr = 300;
        grid.t_max = 4.0;
        solver::SolverOptions lin;
        lin.nonlinearity = false;
        solver::RadialIntegrator A(sp, solver::InitialData{}, grid, 0.4, lin);
        solver::RadialIntegrator B(sp, solver::InitialData{}, grid, 0.8, lin);
        for (int s = 0; s < 120; ++s) {
            A.step();
            B.step();
        }
        double worst = 0.0;
        for (int i = 0; i <= grid.nr; ++i)
            worst = std::max(worst, std::fabs(B.u()[i] - 2.0 * A.u()[i]) /
                                        std::max(1e-300, std::fabs(B.u()[i])));
        out.push_back(detail::bounded("solver", "eps_linearity", worst, 1e-10, tm.seconds()));
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        solver::GridSpec grid;
        grid.r_max = 2.0;
        grid.nr = 2000;
        grid.t_max = 0.5;
        auto st = solver::init(solver::InitialData{}, grid, 0.7, sp);
        auto fn = solver::functionals(st, {0.0, 0.0}, {0.0, 0.0});
        const double worst = numeric::rel_err(fn.U, 2.0 * 0.7 * 128.0 / 315.0);
        out.push_back(detail::bounded("solver", "u0_closed_form", worst, 1e-6, tm.seconds()));
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        solver::GridSpec grid;
        grid.r_max = 12.0;
        grid.nr = 400;
        grid.t_max = 10.0;
        auto r8 = solver::run_lifespan(sp, solver::InitialData{}, grid, 2.0, 1e8);
        auto r6 = solver::run_lifespan(sp, solver::InitialData{}, grid, 2.0, 1e6);
        const double worst = std::fabs(r6.record.T_num - r8.record.T_num) / r8.record.T_num;
        out.push_back(detail::bounded("solver", "threshold_robustness", worst, 0.02, tm.seconds(),
                                      "T at 1e6 vs 1e8 detection"));
    }
    {
        detail::Timer tm;
        auto sp = detail::zero_coeff(1, 2, 2);
        solver::GridSpec grid;
        grid.r_max = 14.0;
        grid.nr = 350;
        grid.t_max = 12.0;
        bool ok = true;
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : {0.45, 0.65, 0.9, 1.3, 1.9}) {
            auto res = solver::run_lifespan(sp, solver::InitialData{}, grid, eps, 1e8);
            if (!res.record.blow_up || res.record.T_num > prev + 1e-12 || !res.record.converged) ok = false;
            prev = res.record.T_num;
        }
        out.push_back({"solver", "lifespan_monotonicity", ok, ok ? 0.0 : 1.0, 0.5, tm.seconds(),
                       "T nonincreasing over a 5-point eps grid, all converged"});
    }
    return out;
}

// ---------------------------------------------------------------------------

template <class Json>
Json to_json(const std::vector<CheckResult>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks)
        arr.push_back(Json{{"suite", c.suite},
                           {"name", c.name},
                           {"pass", c.pass},
                           {"metric", c.metric},
                           {"bound", c.bound},
                           {"seconds", c.seconds},
                           {"note", c.note}});
    return arr;
}

inline std::vector<CheckResult> suite(const std::string& name) {
    if (name == "specfun") return specfun_suite();
    if (name == "testfunc") return testfunc_suite();
    if (name == "model") return model_suite();
    if (name == "iterkit") return iterkit_suite();
    if (name == "solver") return solver_suite();
    if (name == "all") {
        std::vector<CheckResult> all;
        for (const char* s : {"specfun", "testfunc", "model", "iterkit", "solver"}) {
            auto part = suite(s);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown verification suite '" + name +
                                "' (expected specfun|testfunc|model|iterkit|solver|all)");
}

}  // namespace siwave::verify
