#include "siwave/model.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "testutil.hpp"

using namespace siwave;
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
}  // namespace

TEST_CASE("delta spot values", "[model]") {
    CHECK(model::delta(1.0, 0.0) == 0.0);
    CHECK(model::delta(2.0, 0.25) == 0.0);
    CHECK(model::delta(3.0, 0.0) == 4.0);
}

TEST_CASE("F spot values", "[model]") {
    CHECK(model::F(3, 2, 2) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(model::F(1, 2, 3) == Catch::Approx(13.0 / 15.0).epsilon(1e-14));
    CHECK(model::F(1, 2, 2) == Catch::Approx(1.5).epsilon(1e-14));
    // p = q on the Strauss curve: F(n, p0, p0) = 0
    for (int n = 2; n <= 6; ++n) {
        const double p0 = model::strauss_exponent(n);
        CHECK(std::fabs(model::F(n, p0, p0)) < 1e-13);
    }
    CHECK(model::strauss_exponent(3) == Catch::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(model::strauss_exponent(4) == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("roots of the characteristic quadratics", "[model]") {
    model::SystemParams sp = zero_coeff(3, 2, 2);
    auto rp = model::roots(sp);
    CHECK(rp.r1 == Catch::Approx(-1.0));
    CHECK(rp.r2 == Catch::Approx(0.0).margin(1e-15));

    sp.mu1 = 1.0;
    rp = model::roots(sp);
    CHECK(rp.r1 == 0.0);
    CHECK(rp.r2 == 0.0);

    sp.mu1 = 3.0;
    sp.nu1sq = 1.0;
    rp = model::roots(sp);
    CHECK(rp.r1 == Catch::Approx(1.0));
    CHECK(rp.r2 == Catch::Approx(1.0));
}

TEST_CASE("root identities on random admissible draws", "[model]") {
    auto gen = testutil::rng();
    std::uniform_real_distribution<double> mu_d(0.0, 4.0), frac(0.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        model::SystemParams sp = zero_coeff(3, 2.0, 2.0);
        sp.mu1 = mu_d(gen);
        sp.mu2 = mu_d(gen);
        sp.nu1sq = frac(gen) * 0.25 * (sp.mu1 - 1.0) * (sp.mu1 - 1.0);
        sp.nu2sq = frac(gen) * 0.25 * (sp.mu2 - 1.0) * (sp.mu2 - 1.0);
        auto rp = model::roots(sp);
        CHECK(std::fabs(rp.r1 + rp.r2 - (sp.mu1 - 1.0)) < 1e-13);
        CHECK(std::fabs(rp.r1 * rp.r2 - sp.nu1sq) < 1e-13);
        CHECK(std::fabs(rp.rho1 + rp.rho2 - (sp.mu2 - 1.0)) < 1e-13);
        CHECK(std::fabs(rp.rho1 * rp.rho2 - sp.nu2sq) < 1e-13);
        CHECK(rp.r1 + 1.0 > -1e-13);
        CHECK(rp.rho2 + 1.0 > 0.0);
    }
}

TEST_CASE("classify: subcritical example", "[model]") {
    auto rep = model::classify(zero_coeff(3, 2, 2));
    CHECK(rep.regime == model::Regime::Subcritical);
    CHECK(rep.F1 == Catch::Approx(0.5));
    CHECK(rep.F2 == Catch::Approx(0.5));
    CHECK(rep.lifespan_law.kind == model::LifespanKind::Polynomial);
    CHECK(rep.lifespan_law.exponent == Catch::Approx(2.0));
}

TEST_CASE("classify: symmetric critical (Strauss) point", "[model]") {
    const double p0 = 1.0 + std::sqrt(2.0);
    auto rep = model::classify(zero_coeff(3, p0, p0), 1e-10);
    CHECK(rep.regime == model::Regime::Critical);
    REQUIRE(rep.critical_subcase.has_value());
    CHECK(*rep.critical_subcase == model::CriticalSubcase::SymmetricSamePDO);
    CHECK(rep.lifespan_law.kind == model::LifespanKind::Exponential);
    CHECK(rep.lifespan_law.exponent == Catch::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("classify: supercritical has no prediction", "[model]") {
    auto rep = model::classify(zero_coeff(3, 4, 4));
    CHECK(rep.regime == model::Regime::Supercritical);
    CHECK(rep.lifespan_law.kind == model::LifespanKind::NoPrediction);
    CHECK(rep.F1 < 0.0);
}

TEST_CASE("classify: single-branch critical subcases", "[model]") {
    // Put F1 exactly on zero by shifting mu1; keep F2 below zero.
    // F(n+mu1,p,q) = 0  <=>  mu1 = 2(p+2+1/q)/(pq-1) - n + 1.
    const double n = 1, p = 2.2, q = 3.1;
    const double mu1 = 2.0 * (p + 2.0 + 1.0 / q) / (p * q - 1.0) - n + 1.0;
    model::SystemParams sp = zero_coeff(1, p, q);
    sp.mu1 = mu1;
    sp.mu2 = 6.0;  // pushes F2 negative
    auto rep = model::classify(sp, 1e-9);
    REQUIRE(rep.regime == model::Regime::Critical);
    REQUIRE(rep.critical_subcase.has_value());
    CHECK(*rep.critical_subcase == model::CriticalSubcase::FirstBranch);
    CHECK(rep.lifespan_law.exponent == Catch::Approx(q * (p * q - 1.0)));

    // Swap roles for the second branch.
    model::SystemParams sp2 = zero_coeff(1, q, p);
    sp2.mu2 = mu1;
    sp2.mu1 = 6.0;
    auto rep2 = model::classify(sp2, 1e-9);
    REQUIRE(rep2.regime == model::Regime::Critical);
    REQUIRE(rep2.critical_subcase.has_value());
    CHECK(*rep2.critical_subcase == model::CriticalSubcase::SecondBranch);
    CHECK(rep2.lifespan_law.exponent == Catch::Approx(q * (q * p - 1.0)));
}

TEST_CASE("classify: asymmetric double-critical maps to both branches", "[model]") {
    // F1 = 0 fixes mu1, F2 = 0 fixes mu2; p != q keeps the PDOs distinct.
    const double n = 1, p = 2.0, q = 3.0;
    model::SystemParams sp = zero_coeff(1, p, q);
    sp.mu1 = 2.0 * (p + 2.0 + 1.0 / q) / (p * q - 1.0) - n + 1.0;
    sp.mu2 = 2.0 * (q + 2.0 + 1.0 / p) / (p * q - 1.0) - n + 1.0;
    auto rep = model::classify(sp, 1e-9);
    REQUIRE(rep.regime == model::Regime::Critical);
    REQUIRE(rep.critical_subcase.has_value());
    CHECK(*rep.critical_subcase == model::CriticalSubcase::BothBranches);
    CHECK(rep.lifespan_law.exponent == Catch::Approx(p * q - 1.0));
}

TEST_CASE("technical restriction flag", "[model]") {
    // n = 3, zero coefficients: 1/p < (3-1)/2 = 1 holds for all p > 1.
    CHECK(model::classify(zero_coeff(3, 2, 2)).technical_ok);
    // n = 1: 1/p < (1-1)/2 = 0 never holds.
    CHECK_FALSE(model::classify(zero_coeff(1, 2, 2)).technical_ok);
}

TEST_CASE("parabolic-like curve value only for large delta", "[model]") {
    CHECK_FALSE(model::classify(zero_coeff(3, 2, 2)).parabolic_curve_value.has_value());
    model::SystemParams sp = zero_coeff(1, 2, 2);
    sp.mu1 = sp.mu2 = 6.0;  // delta = 25 >= (n+1)^2 = 4
    auto rep = model::classify(sp);
    REQUIRE(rep.parabolic_curve_value.has_value());
    // delta = 25, sqrt = 5: (p+1)/(pq-1) - ((mu-1)/2 - 5/2)/2 = 1 - 0 = 1.
    CHECK(*rep.parabolic_curve_value == Catch::Approx(1.0));
}

TEST_CASE("swap symmetry of the classification", "[model]") {
    auto gen = testutil::rng(7);
    std::uniform_real_distribution<double> mu_d(0.0, 3.0), pq_d(1.2, 4.0), frac(0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        model::SystemParams sp = zero_coeff(2, pq_d(gen), pq_d(gen));
        sp.mu1 = mu_d(gen);
        sp.mu2 = mu_d(gen);
        sp.nu1sq = frac(gen) * 0.25 * (sp.mu1 - 1.0) * (sp.mu1 - 1.0);
        sp.nu2sq = frac(gen) * 0.25 * (sp.mu2 - 1.0) * (sp.mu2 - 1.0);
        model::SystemParams swapped = sp;
        std::swap(swapped.p, swapped.q);
        std::swap(swapped.mu1, swapped.mu2);
        std::swap(swapped.nu1sq, swapped.nu2sq);
        auto a = model::classify(sp);
        auto b = model::classify(swapped);
        CHECK(a.F1 == b.F2);
        CHECK(a.F2 == b.F1);
        CHECK(a.regime == b.regime);
    }
}

TEST_CASE("F is strictly decreasing in d", "[model]") {
    for (double q : {1.5, 2.0, 3.0}) {
        for (double p : {1.5, 2.5, 4.0}) {
            double prev = model::F(1.0, p, q);
            for (double d : {1.5, 2.0, 3.0, 4.5, 6.0}) {
                const double cur = model::F(d, p, q);
                CHECK(cur < prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("mu = 0 reduction matches the classical wave-system curve", "[model]") {
    // With all coefficients zero the subcritical condition is the unshifted
    // max{(p+2+1/q)/(pq-1), (q+2+1/p)/(pq-1)} > (n-1)/2.
    auto gen = testutil::rng(11);
    std::uniform_real_distribution<double> pq_d(1.1, 5.0);
    for (int it = 0; it < 100; ++it) {
        const double p = pq_d(gen), q = pq_d(gen);
        for (int n : {1, 2, 3, 4}) {
            auto rep = model::classify(zero_coeff(n, p, q));
            const double lhs1 = (p + 2.0 + 1.0 / q) / (p * q - 1.0) - 0.5 * (n - 1.0);
            const double lhs2 = (q + 2.0 + 1.0 / p) / (p * q - 1.0) - 0.5 * (n - 1.0);
            CHECK(rep.F1 == Catch::Approx(lhs1).margin(1e-14));
            CHECK(rep.F2 == Catch::Approx(lhs2).margin(1e-14));
        }
    }
}

TEST_CASE("pq_grid consistency with pointwise classify", "[model]") {
    auto tmpl = zero_coeff(3, 2, 2);
    auto grid = model::pq_grid(tmpl, 2.0, 3.0, 2.0, 3.0, 2, 2);
    REQUIRE(grid.points.size() == 4);
    for (const auto& gp : grid.points) {
        model::SystemParams sp = tmpl;
        sp.p = gp.p;
        sp.q = gp.q;
        auto rep = model::classify(sp);
        CHECK(rep.regime == gp.report.regime);
        CHECK(rep.F1 == gp.report.F1);
        CHECK(rep.F2 == gp.report.F2);
    }
    // degenerate single-point grid reproduces classify
    auto single = model::pq_grid(tmpl, 2.5, 2.5, 2.5, 2.5, 1, 1);
    REQUIRE(single.points.size() == 1);
    auto sp = tmpl;
    sp.p = sp.q = 2.5;
    CHECK(single.points[0].report.regime == model::classify(sp).regime);
}

TEST_CASE("pq_grid swap-transpose symmetry", "[model]") {
    model::SystemParams sp = zero_coeff(2, 2, 2);
    sp.mu1 = 1.5;
    sp.mu2 = 0.5;
    model::SystemParams swapped = sp;
    std::swap(swapped.mu1, swapped.mu2);
    std::swap(swapped.nu1sq, swapped.nu2sq);
    auto g1 = model::pq_grid(sp, 1.5, 3.5, 1.5, 3.5, 9, 9);
    auto g2 = model::pq_grid(swapped, 1.5, 3.5, 1.5, 3.5, 9, 9);
    for (std::size_t ip = 0; ip < 9; ++ip)
        for (std::size_t iq = 0; iq < 9; ++iq)
            CHECK(g1.at(ip, iq).report.regime == g2.at(iq, ip).report.regime);
}

TEST_CASE("SystemParams validation", "[model]") {
    model::SystemParams sp = zero_coeff(3, 2, 2);
    sp.nu1sq = 5.0;  // delta1 < 0
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = zero_coeff(3, 1.0, 2.0);
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = zero_coeff(0, 2, 2);
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = zero_coeff(3, 2, 2);
    sp.r0 = 1.5;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
}
