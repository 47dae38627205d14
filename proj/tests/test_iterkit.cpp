#include "siwave/iterkit.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "testutil.hpp"

using namespace siwave;
using iterkit::BigRational;
using testutil::rel;

namespace {

model::SystemParams zero_coeff(int n, double p, double q) {
    model::SystemParams sp;
    sp.n = n;
    sp.mu1 = sp.mu2 = sp.nu1sq = sp.nu2sq = 0.0;
    sp.p = p;
    sp.q = q;
    return sp;
}

// random rational in (lo_num/den, hi_num/den) with denominator <= max_den
BigRational rand_rational(std::mt19937_64& gen, double lo, double hi, long max_den = 12) {
    std::uniform_int_distribution<long> den_d(2, max_den);
    const long den = den_d(gen);
    const long nlo = static_cast<long>(std::ceil(lo * den)) + 1;
    const long nhi = static_cast<long>(std::floor(hi * den)) - 1;
    std::uniform_int_distribution<long> num_d(nlo, nhi);
    return BigRational(num_d(gen), den);
}

}  // namespace

TEST_CASE("constants on the reference configuration", "[iterkit]") {
    // n = 3, all coefficients zero, p = q = 2: r2 = rho2 = 0.
    auto sp = zero_coeff(3, 2, 2);
    auto rp = model::roots(sp);
    CHECK(rp.r2 == Catch::Approx(0.0).margin(1e-15));
    auto c = iterkit::constants(sp, rp);
    // A = r2+1-n+(rho2+1)p+npq = 1-3+2+12 = 12
    CHECK(c.A == Catch::Approx(12.0));
    CHECK(c.A_tilde == Catch::Approx(12.0));
    // B = r2+3+(rho2+3)p = 3+6 = 9, and B0 = B/(pq-1)+b1 = 3+5 = 8
    CHECK(c.B == Catch::Approx(9.0));
    CHECK(c.B_tilde == Catch::Approx(9.0));
    CHECK(c.a1 == Catch::Approx(3.0));
    CHECK(c.b1 == Catch::Approx(5.0));
    CHECK(c.B0 == Catch::Approx(8.0));
    CHECK(c.B0_tilde == Catch::Approx(8.0));
    // B0 identity: n - 1 + ((r2+3)pq + (rho2+3)p)/(pq-1)
    CHECK(c.B0 == Catch::Approx(3.0 - 1.0 + (3.0 * 4.0 + 3.0 * 2.0) / 3.0));
}

TEST_CASE("constants swap symmetry", "[iterkit]") {
    model::SystemParams sp = zero_coeff(2, 2.5, 3.5);
    sp.mu1 = 1.5;
    sp.mu2 = 0.5;
    model::SystemParams sw = sp;
    std::swap(sw.p, sw.q);
    std::swap(sw.mu1, sw.mu2);
    std::swap(sw.nu1sq, sw.nu2sq);
    auto c1 = iterkit::constants(sp, model::roots(sp));
    auto c2 = iterkit::constants(sw, model::roots(sw));
    CHECK(c1.A == Catch::Approx(c2.A_tilde));
    CHECK(c1.B == Catch::Approx(c2.B_tilde));
    CHECK(c1.B0 == Catch::Approx(c2.B0_tilde));
    CHECK(c1.Spq_inf == Catch::Approx(c2.Spq_inf_tilde));
}

TEST_CASE("recurrence reproduces the worked example", "[iterkit]") {
    auto sp = zero_coeff(3, 2, 2);
    auto rp = model::roots(sp);
    auto c = iterkit::constants(sp, rp);
    auto table = iterkit::sequences_recurrence(c, sp, rp, {}, 5);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].j == 1);
    CHECK(table.rows[0].a == Catch::Approx(3.0));   // a1 = r2+1+(n+mu2-1)p/2
    CHECK(table.rows[0].b == Catch::Approx(5.0));   // b1 = r2+n+2
    CHECK(table.rows[1].j == 3);
    CHECK(table.rows[1].a == Catch::Approx(24.0));  // a3 = A + pq a1 = 12 + 12
    CHECK(table.rows[1].b == Catch::Approx(29.0));  // b3 = B + pq b1 = 9 + 20
    // closed forms agree
    auto cf3 = iterkit::sequences_closed_form(c, sp, 3);
    CHECK(cf3.a == Catch::Approx(24.0));
    CHECK(cf3.b == Catch::Approx(29.0));
    auto cf1 = iterkit::sequences_closed_form(c, sp, 1);
    CHECK(cf1.a == Catch::Approx(c.a1));
    CHECK(cf1.beta == Catch::Approx(c.beta1));
    // j_max = 1 returns only the seeds
    auto seeds = iterkit::sequences_recurrence(c, sp, rp, {}, 1);
    CHECK(seeds.rows.size() == 1);
}

TEST_CASE("two-step bookkeeping: a3 - pq a1 = A and b3 - pq b1 = B", "[iterkit]") {
    auto gen = testutil::rng(41);
    std::uniform_real_distribution<double> pq_d(1.2, 3.8), mu_d(0.0, 3.0);
    for (int it = 0; it < 50; ++it) {
        model::SystemParams sp = zero_coeff(2, pq_d(gen), pq_d(gen));
        sp.mu1 = mu_d(gen);
        sp.mu2 = mu_d(gen);
        auto rp = model::roots(sp);
        auto c = iterkit::constants(sp, rp);
        auto t = iterkit::sequences_recurrence(c, sp, rp, {}, 3);
        CHECK(t.rows[1].a - sp.p * sp.q * t.rows[0].a == Catch::Approx(c.A).margin(1e-10));
        CHECK(t.rows[1].b - sp.p * sp.q * t.rows[0].b == Catch::Approx(c.B).margin(1e-10));
        CHECK(t.rows[1].alpha - sp.p * sp.q * t.rows[0].alpha == Catch::Approx(c.A_tilde).margin(1e-10));
        CHECK(t.rows[1].beta - sp.p * sp.q * t.rows[0].beta == Catch::Approx(c.B_tilde).margin(1e-10));
    }
}

TEST_CASE("exact rationals: closed form equals recurrence for odd j <= 25", "[iterkit]") {
    auto gen = testutil::rng(43);
    for (int draw = 0; draw < 6; ++draw) {
        // delta = 0 draws: r2 = (mu1-1)/2, rho2 = (mu2-1)/2 with rational mu
        const BigRational mu1 = rand_rational(gen, 0.0, 3.0);
        const BigRational mu2 = rand_rational(gen, 0.0, 3.0);
        const BigRational r2 = (mu1 - BigRational(1)) / BigRational(2);
        const BigRational rho2 = (mu2 - BigRational(1)) / BigRational(2);
        const BigRational p = rand_rational(gen, 1.05, 4.0);
        const BigRational q = rand_rational(gen, 1.05, 4.0);
        const long n = 1 + static_cast<long>(draw % 4);
        auto seq = iterkit::sequences_recurrence_exact(n, r2, rho2, p, q, mu1, mu2, 25);
        REQUIRE_FALSE(seq.budget_exceeded);
        REQUIRE(seq.j.size() == 13);
        for (std::size_t row = 0; row < seq.j.size(); ++row) {
            auto cf = iterkit::sequences_closed_form_exact(n, r2, rho2, p, q, mu1, mu2, seq.j[row]);
            INFO("draw " << draw << " j=" << seq.j[row] << " a rec " << seq.a[row].str() << " cf " << cf.a.str());
            CHECK(seq.a[row] == cf.a);
            CHECK(seq.b[row] == cf.b);
            CHECK(seq.alpha[row] == cf.alpha);
            CHECK(seq.beta[row] == cf.beta);
        }
    }
    // one draw with positive perfect-square delta: sqrt(delta) = s rational
    const BigRational mu1(7, 2), mu2(5, 2);  // delta1 = 25/4 - 4 nu1^2 etc.
    const BigRational s1(3, 2), s2(1, 2);    // choose sqrt(delta) directly
    const BigRational r2 = (mu1 - BigRational(1) + s1) / BigRational(2);
    const BigRational rho2 = (mu2 - BigRational(1) + s2) / BigRational(2);
    const BigRational p(7, 3), q(9, 4);
    auto seq = iterkit::sequences_recurrence_exact(3, r2, rho2, p, q, mu1, mu2, 25);
    for (std::size_t row = 0; row < seq.j.size(); ++row) {
        auto cf = iterkit::sequences_closed_form_exact(3, r2, rho2, p, q, mu1, mu2, seq.j[row]);
        CHECK(seq.a[row] == cf.a);
        CHECK(seq.beta[row] == cf.beta);
    }
}

TEST_CASE("bit budget fallback flag", "[iterkit]") {
    const BigRational p(331, 100), q(577, 100);  // awkward denominators grow fast
    auto seq = iterkit::sequences_recurrence_exact(3, BigRational(0), BigRational(0), p, q, BigRational(1),
                                                   BigRational(1), 101, /*bit_budget=*/256);
    CHECK(seq.budget_exceeded);
    CHECK(seq.j.size() < 51);
}

TEST_CASE("summation identities against brute force", "[iterkit]") {
    // j=3, pq=4: geometric sum over k=0..0 is 1
    auto si = iterkit::summation_identities(4.0, 3);
    CHECK(si.geometric_sum == Catch::Approx(1.0));
    // j=5, pq=4: weighted sum = 4 + 2*4 = 12
    si = iterkit::summation_identities(4.0, 5);
    CHECK(si.weighted_sum == Catch::Approx(12.0));
    auto gen = testutil::rng(47);
    std::uniform_real_distribution<double> pq_d(1.1, 9.0);
    for (int it = 0; it < 60; ++it) {
        const double pq = pq_d(gen);
        const long j = 3 + 2 * (it % 12);
        double geo = 0.0, wtd = 0.0;
        for (long k = 0; k <= (j - 3) / 2; ++k) geo += std::pow(pq, static_cast<double>(k));
        for (long k = 1; k <= (j - 1) / 2; ++k) wtd += (j + 1.0 - 2.0 * k) * std::pow(pq, k - 1.0);
        auto s = iterkit::summation_identities(pq, j);
        INFO("pq=" << pq << " j=" << j);
        CHECK(rel(s.geometric_sum, geo) <= 1e-12);
        CHECK(rel(s.weighted_sum, wtd) <= 1e-12);
    }
}

TEST_CASE("exponent-sign identity over random draws", "[iterkit]") {
    // (B-A)/(pq-1) + b1 - a1 = p F(n+mu2, q, p), so the signs agree; the
    // tilde analogue carries F(n+mu1, p, q).
    auto gen = testutil::rng(53);
    std::uniform_real_distribution<double> pq_d(1.1, 4.5), mu_d(0.0, 4.0), frac(0.0, 1.0);
    int positive_seen = 0, negative_seen = 0;
    for (int it = 0; it < 100; ++it) {
        model::SystemParams sp = zero_coeff(1 + it % 4, pq_d(gen), pq_d(gen));
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
        INFO("n=" << sp.n << " p=" << sp.p << " q=" << sp.q << " mu2=" << sp.mu2);
        CHECK(rel(lhs, sp.p * F2) <= 1e-12);
        CHECK(rel(lhs_t, sp.q * F1) <= 1e-12);
        CHECK(std::signbit(lhs) == std::signbit(F2));
        CHECK(std::signbit(lhs_t) == std::signbit(F1));
        (F2 > 0 ? positive_seen : negative_seen)++;
    }
    // the draw actually exercises both signs
    CHECK(positive_seen > 10);
    CHECK(negative_seen > 10);
}

TEST_CASE("double-critical identities", "[iterkit]") {
    // Families constructed to sit on F1 = F2 = 0: pick (n,p,q), solve for mu1,
    // mu2; then beta_q - 1 = n - (n+mu2-1)p/2 and beta_p - 1 = n - (n+mu1-1)q/2
    // with beta_q = (n-mu1+1)/2 - 1/q, beta_p = (n-mu2+1)/2 - 1/p.
    auto gen = testutil::rng(59);
    std::uniform_real_distribution<double> pq_d(1.3, 3.0);
    int checked = 0;
    for (int it = 0; it < 200 && checked < 50; ++it) {
        const double p = pq_d(gen), q = pq_d(gen);
        for (int n : {1, 2}) {
            const double mu1 = 2.0 * (p + 2.0 + 1.0 / q) / (p * q - 1.0) - n + 1.0;
            const double mu2 = 2.0 * (q + 2.0 + 1.0 / p) / (p * q - 1.0) - n + 1.0;
            if (mu1 < 0.0 || mu2 < 0.0) continue;
            const double beta_q = 0.5 * (n - mu1 + 1.0) - 1.0 / q;
            const double beta_p = 0.5 * (n - mu2 + 1.0) - 1.0 / p;
            INFO("n=" << n << " p=" << p << " q=" << q);
            REQUIRE(std::fabs(model::F(n + mu1, p, q)) < 1e-12);
            REQUIRE(std::fabs(model::F(n + mu2, q, p)) < 1e-12);
            CHECK(std::fabs(beta_q - 1.0 - (n - 0.5 * (n + mu2 - 1.0) * p)) <= 1e-10);
            CHECK(std::fabs(beta_p - 1.0 - (n - 0.5 * (n + mu1 - 1.0) * q)) <= 1e-10);
            ++checked;
        }
    }
    CHECK(checked >= 50);
}

TEST_CASE("lower-bound envelope: divergence above threshold, decay below", "[iterkit]") {
    auto sp = zero_coeff(1, 2, 2);
    sp.eps = 0.5;
    auto rp = model::roots(sp);
    auto c = iterkit::constants(sp, rp);
    iterkit::DataConstants data;  // C1 = K1 = 1, T0 = 1
    auto table = iterkit::sequences_recurrence(c, sp, rp, data, 25);
    auto th = iterkit::blowup_thresholds(c, sp, rp, data);
    REQUIRE(std::isfinite(th.T_pred));
    REQUIRE(th.T_pred > 0.0);

    // above the predicted bound the envelope grows without bound in j
    const double t_hi = std::max(2.0 * th.T_pred, 2.0 * data.T0 + 1.5);
    auto env_hi = iterkit::lower_bound_envelope(table, t_hi, data.T0);
    bool grew = true;
    for (std::size_t i = 1; i < env_hi.size(); ++i) {
        if (env_hi[i].j <= c.j0) continue;
        if (env_hi[i].log_U <= env_hi[i - 1].log_U) grew = false;
    }
    CHECK(grew);
    CHECK(env_hi.back().log_U > env_hi.front().log_U);

    // just above T0 the envelope decays towards zero
    auto env_lo = iterkit::lower_bound_envelope(table, data.T0 + 1e-3, data.T0);
    CHECK(env_lo.back().log_U < env_lo.front().log_U);

    // the j -> infinity growth rate changes sign at some t* <= T_pred:
    // G(t) = lim log U_j / (pq)^{(j-1)/2}
    auto growth_rate = [&](double t) {
        auto env = iterkit::lower_bound_envelope(table, t, data.T0);
        const auto& last = env.back();
        return last.log_U / std::pow(sp.p * sp.q, 0.5 * (last.j - 1.0));
    };
    double lo = data.T0 + 1e-6, hi = th.T_pred;
    REQUIRE(growth_rate(lo) < 0.0);
    // dichotomy: either already positive at T_pred (then t* < T_pred) or the
    // prediction is conservative, which the theory guarantees for t — check
    // that the rate is positive at T_pred (i.e. t* <= T_pred).
    CHECK(growth_rate(hi) > 0.0);

    // base case: the j = 1 row carries D1 = K1 eps^p / ((r2+n+1)(r2+n+2))
    const double D1 = data.K1 * std::pow(sp.eps, sp.p) / ((rp.r2 + sp.n + 1.0) * (rp.r2 + sp.n + 2.0));
    CHECK(rel(std::exp(table.rows[0].log_D), D1) < 1e-12);
}

TEST_CASE("blow-up thresholds", "[iterkit]") {
    auto sp = zero_coeff(1, 2, 2);
    sp.eps = 0.25;
    auto rp = model::roots(sp);
    auto c = iterkit::constants(sp, rp);
    iterkit::DataConstants data;

    // eps-scaling: T_pred(eps/2)/T_pred(eps) = 2^{1/F} exactly
    auto th1 = iterkit::blowup_thresholds(c, sp, rp, data);
    model::SystemParams sp_half = sp;
    sp_half.eps = 0.125;
    auto th2 = iterkit::blowup_thresholds(c, sp_half, rp, data);
    const double Fmax = std::max(model::F(sp.n + sp.mu1, sp.p, sp.q), model::F(sp.n + sp.mu2, sp.q, sp.p));
    CHECK(rel(th2.T_pred / th1.T_pred, std::pow(2.0, 1.0 / Fmax)) <= 1e-12);

    // branch selection matches the max F
    model::SystemParams sp_asym = zero_coeff(1, 2.0, 3.0);
    sp_asym.mu2 = 2.0;  // depresses F2; F1 dominates
    auto rp_a = model::roots(sp_asym);
    auto c_a = iterkit::constants(sp_asym, rp_a);
    auto th_a = iterkit::blowup_thresholds(c_a, sp_asym, rp_a, data);
    const double F1 = model::F(sp_asym.n + sp_asym.mu1, sp_asym.p, sp_asym.q);
    const double F2 = model::F(sp_asym.n + sp_asym.mu2, sp_asym.q, sp_asym.p);
    REQUIRE(F1 > F2);
    CHECK(th_a.branch_is_tilde);

    // with K2 forced to 1, E reduces to exp(((A/(pq-1)+a1) log 2 + S)/(p F2))
    iterkit::DataConstants unit;
    unit.K1 = (rp.r2 + sp.n + 1.0) * (rp.r2 + sp.n + 2.0);
    auto th_u = iterkit::blowup_thresholds(c, sp, rp, unit);
    const double F2z = model::F(sp.n + sp.mu2, sp.q, sp.p);
    const double want =
        std::exp(((c.A / (sp.p * sp.q - 1.0) + c.a1) * std::numbers::ln2 + c.Spq_inf) / (sp.p * F2z));
    CHECK(rel(th_u.E, want) <= 1e-12);

    // supercritical configuration is a regime error
    auto sp_super = zero_coeff(3, 4, 4);
    auto rp_s = model::roots(sp_super);
    auto c_s = iterkit::constants(sp_super, rp_s);
    CHECK_THROWS_AS(iterkit::blowup_thresholds(c_s, sp_super, rp_s, data), std::domain_error);
}

TEST_CASE("log D_j respects the derived lower bound beyond j0", "[iterkit]") {
    // log D_j >= (pq)^{(j-1)/2} (log D_1 - S_pq(inf)) for odd j > j0 ties the
    // recurrence to the derived constants B0, C_tilde, S_pq(inf); same for
    // log Delta_j with the tilde quantities.
    struct Case {
        int n;
        double p, q, mu1, mu2, eps;
    };
    for (const auto& cs : {Case{1, 2.0, 2.0, 0.0, 0.0, 0.5}, Case{3, 2.5, 2.0, 1.0, 0.5, 0.25},
                           Case{2, 3.0, 1.5, 2.0, 0.0, 1.0}}) {
        model::SystemParams sp = zero_coeff(cs.n, cs.p, cs.q);
        sp.mu1 = cs.mu1;
        sp.mu2 = cs.mu2;
        sp.eps = cs.eps;
        auto rp = model::roots(sp);
        auto c = iterkit::constants(sp, rp);
        iterkit::DataConstants data;
        auto table = iterkit::sequences_recurrence(c, sp, rp, data, 25);
        const double logD1 = table.rows[0].log_D;
        const double logDelta1 = table.rows[0].log_Delta;
        for (const auto& row : table.rows) {
            if (row.j <= c.j0 || row.j == 1) continue;
            const double g = std::pow(sp.p * sp.q, 0.5 * (row.j - 1.0));
            INFO("n=" << cs.n << " p=" << cs.p << " q=" << cs.q << " j=" << row.j);
            CHECK(row.log_D >= g * (logD1 - c.Spq_inf) - 1e-9 * std::fabs(row.log_D));
            CHECK(row.log_Delta >= g * (logDelta1 - c.Spq_inf_tilde) - 1e-9 * std::fabs(row.log_Delta));
        }
    }
}

TEST_CASE("iteration table export fields stay finite", "[iterkit]") {
    auto sp = zero_coeff(3, 2.5, 2.0);
    sp.eps = 0.3;
    auto rp = model::roots(sp);
    auto c = iterkit::constants(sp, rp);
    auto table = iterkit::sequences_recurrence(c, sp, rp, {}, 25);
    for (const auto& row : table.rows) {
        CHECK(std::isfinite(row.a));
        CHECK(std::isfinite(row.log_D));
        CHECK(row.a > 0.0);
        CHECK(row.b > 0.0);
    }
}
