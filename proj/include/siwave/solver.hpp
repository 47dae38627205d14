#pragma once

// Radially symmetric finite-difference integration of the coupled system and
// its blow-up diagnostics. Explicit leapfrog in time with the damping term
// taken semi-implicitly (a pointwise scalar solve), second order in space and
// time, homogeneous Dirichlet at r_max placed outside the light cone.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "siwave/model.hpp"
#include "siwave/numeric.hpp"
#include "siwave/testfunc.hpp"

namespace siwave::solver {

struct GridSpec {
    double r_max = 16.0;
    int nr = 800;          // radial cells; nodes 0..nr
    double cfl = 0.9;
    double t_max = 10.0;
    int refine_levels = 2; // lifespan runs repeat on nr, 2nr, ... grids

    double dr() const { return r_max / nr; }

    void validate(double r0) const {
        if (nr < 8) throw std::invalid_argument("GridSpec: nr too small");
        if (!(cfl > 0.0) || cfl > 0.95) throw std::invalid_argument("GridSpec: cfl must lie in (0, 0.95]");
        if (!(t_max > 0.0)) throw std::invalid_argument("GridSpec: t_max must be positive");
        if (refine_levels < 1) throw std::invalid_argument("GridSpec: refine_levels must be >= 1");
        if (r_max < r0 + t_max + 2.0 * dr())
            throw std::invalid_argument("GridSpec: r_max must cover the light cone r0 + t_max + 2 dr");
    }
};

struct InitialData {
    int k = 4;  // smoothness power of the bump, >= 4
    double cu0 = 1.0, cu1 = 1.0;  // amplitudes of u(0), u_t(0)
    double cv0 = 1.0, cv1 = 1.0;  // amplitudes of v(0), v_t(0)
    double r0 = 1.0;

    void validate() const {
        if (k < 4) throw std::invalid_argument("InitialData: k must be >= 4");
        if (cu0 < 0.0 || cu1 < 0.0 || cv0 < 0.0 || cv1 < 0.0)
            throw std::invalid_argument("InitialData: amplitudes must be nonnegative");
        if (!(r0 > 0.0)) throw std::invalid_argument("InitialData: r0 must be positive");
    }

    double bump(double r, double amplitude) const {
        if (r >= r0) return 0.0;
        const double s = 1.0 - (r / r0) * (r / r0);
        return amplitude * std::pow(s, k);
    }
};

struct FieldState {
    double t = 0.0;
    std::vector<double> u, ut, v, vt;
    double dr = 0.0;
    int n = 1;
};

/// Optional hooks for verification runs: source terms and a switch for the
/// power nonlinearities (manufactured-solution and linear-regime tests).
struct SolverOptions {
    bool nonlinearity = true;
    std::function<double(double t, double r)> force_u;  // added to the u equation
    std::function<double(double t, double r)> force_v;
    int series_stride = 1;      // record diagnostic series every this many steps
    int history_snapshots = 0;  // target count of stored field snapshots (0 = off)
};

struct LifespanRecord {
    double eps = 0.0;
    double T_num = std::numeric_limits<double>::infinity();
    bool blow_up = false;
    double threshold_used = 0.0;
    bool converged = false;  // agreement of the two finest refinement levels within 5%
    double runtime_s = 0.0;
    std::vector<double> level_T;  // T_num per refinement level (coarse -> fine)
};

struct DiagnosticSeries {
    std::vector<double> t;
    std::vector<double> U, V;        // spatial averages int u dx, int v dx
    std::vector<double> Fw, Gw;      // adjoint-weighted functionals int u Phi, int v Psi
    std::vector<double> max_u, max_v;
    std::vector<double> int_vp, int_uq;  // int |v|^p dx, int |u|^q dx
};

struct FieldHistory {
    std::vector<double> t;
    std::vector<std::vector<double>> u, v;
    double dr = 0.0;
    int n = 1;
};

namespace detail {

/// int_0^rmax f(r) sigma_{n-1} r^{n-1} dr on the uniform grid, Simpson.
inline double radial_integral(std::span<const double> f, double dr, int n) {
    std::vector<double> weighted(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = i * dr;
        weighted[i] = f[i] * std::pow(r, n - 1.0);
    }
    return numeric::unit_sphere_area(n) * numeric::simpson_uniform(weighted, dr);
}

}  // namespace detail

class RadialIntegrator {
public:
    RadialIntegrator(const model::SystemParams& sp, const InitialData& data, const GridSpec& grid, double eps,
                     SolverOptions opts = {})
        : sp_(sp), grid_(grid), opts_(std::move(opts)), eps_(eps), dr_(grid.dr()), dt_(grid.cfl * grid.dr()) {
        data.validate();
        grid.validate(data.r0);
        // The center stencil Lap u(0) ~ 2n (u_1 - u_0)/dr^2 tightens the
        // explicit stability bound to dt <= dr/sqrt(n).
        if (grid.cfl > 0.999 / std::sqrt(static_cast<double>(sp.n)))
            throw std::invalid_argument("RadialIntegrator: cfl must be below 1/sqrt(n)");
        const auto rp = model::roots(sp_);
        // Without external forcing the exact solution is supported in the
        // cone |x| <= r0 + t; cells strictly beyond it (one-cell halo) carry
        // only superluminal dispersion tails and are pinned to zero.
        clip_support_ = !opts_.force_u && !opts_.force_v;
        data_r0_ = data.r0;
        const bool enforce_signs =
            opts_.nonlinearity && model::classify(sp_).regime == model::Regime::Subcritical;
        const int m = grid_.nr + 1;
        u_.assign(m, 0.0); up_.assign(m, 0.0); ut0_.assign(m, 0.0);
        v_.assign(m, 0.0); vp_.assign(m, 0.0); vt0_.assign(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const double r = i * dr_;
            u_[i] = eps_ * data.bump(r, data.cu0);
            ut0_[i] = eps_ * data.bump(r, data.cu1);
            v_[i] = eps_ * data.bump(r, data.cv0);
            vt0_[i] = eps_ * data.bump(r, data.cv1);
            // Blow-up sign conditions: u1 + r1 u0 >= 0 and v1 + rho1 v0 >= 0.
            if (enforce_signs &&
                (ut0_[i] + rp.r1 * u_[i] < -1e-14 * eps_ || vt0_[i] + rp.rho1 * v_[i] < -1e-14 * eps_))
                throw std::invalid_argument("RadialIntegrator: data violate the blow-up sign conditions");
        }
        up_ = u_;
        vp_ = v_;
    }

    double t() const { return t_; }
    double dt() const { return dt_; }
    double dr() const { return dr_; }
    bool finite() const { return finite_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& v() const { return v_; }

    double max_abs() const {
        double m = 0.0;
        for (double x : u_) m = std::max(m, std::fabs(x));
        for (double x : v_) m = std::max(m, std::fabs(x));
        return m;
    }

    FieldState snapshot() const {
        FieldState st;
        st.t = t_;
        st.u = u_;
        st.v = v_;
        st.dr = dr_;
        st.n = sp_.n;
        st.ut.resize(u_.size());
        st.vt.resize(v_.size());
        if (first_step_pending_) {
            st.ut = ut0_;
            st.vt = vt0_;
        } else {
            for (std::size_t i = 0; i < u_.size(); ++i) {
                st.ut[i] = (u_[i] - up_[i]) / dt_;
                st.vt[i] = (v_[i] - vp_[i]) / dt_;
            }
        }
        return st;
    }

    /// One time step. NaN/Inf marks the state non-finite instead of throwing.
    void step() {
        const int m = grid_.nr + 1;
        un_.assign(m, 0.0);
        vn_.assign(m, 0.0);
        const double t = t_;
        const double dt2 = dt_ * dt_;
        if (first_step_pending_) {
            // Taylor start: w(dt) = w0 + dt w1 + dt^2/2 (Lap w0 - damping - mass + rhs).
            for (int i = 0; i < m - 1; ++i) {
                const double r = i * dr_;
                const double acc_u = laplacian(u_, i) - sp_.mu1 * ut0_[i] - sp_.nu1sq * u_[i] + rhs_u(i, t, r);
                const double acc_v = laplacian(v_, i) - sp_.mu2 * vt0_[i] - sp_.nu2sq * v_[i] + rhs_v(i, t, r);
                un_[i] = u_[i] + dt_ * ut0_[i] + 0.5 * dt2 * acc_u;
                vn_[i] = v_[i] + dt_ * vt0_[i] + 0.5 * dt2 * acc_v;
            }
            first_step_pending_ = false;
        } else {
            const double gu = 0.5 * dt_ * sp_.mu1 / (1.0 + t);
            const double gv = 0.5 * dt_ * sp_.mu2 / (1.0 + t);
            const double mass_u = sp_.nu1sq / ((1.0 + t) * (1.0 + t));
            const double mass_v = sp_.nu2sq / ((1.0 + t) * (1.0 + t));
            for (int i = 0; i < m - 1; ++i) {
                const double r = i * dr_;
                const double su = laplacian(u_, i) - mass_u * u_[i] + rhs_u(i, t, r);
                const double sv = laplacian(v_, i) - mass_v * v_[i] + rhs_v(i, t, r);
                un_[i] = (2.0 * u_[i] - (1.0 - gu) * up_[i] + dt2 * su) / (1.0 + gu);
                vn_[i] = (2.0 * v_[i] - (1.0 - gv) * vp_[i] + dt2 * sv) / (1.0 + gv);
            }
        }
        un_[m - 1] = 0.0;
        vn_[m - 1] = 0.0;
        up_.swap(u_);
        u_.swap(un_);
        vp_.swap(v_);
        v_.swap(vn_);
        t_ += dt_;
        if (clip_support_) {
            const int front = static_cast<int>(std::ceil((data_r0_ + t_ + dr_) / dr_));
            for (int i = front + 1; i < m; ++i) u_[i] = v_[i] = 0.0;
        }
        for (int i = 0; i < m; ++i) {
            if (!std::isfinite(u_[i]) || !std::isfinite(v_[i])) {
                finite_ = false;
                break;
            }
        }
    }

private:
    double laplacian(const std::vector<double>& w, int i) const {
        if (i == 0) return sp_.n * 2.0 * (w[1] - w[0]) / (dr_ * dr_);
        const double r = i * dr_;
        return (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (dr_ * dr_) +
               (sp_.n - 1.0) / r * (w[i + 1] - w[i - 1]) / (2.0 * dr_);
    }

    double rhs_u(int i, double t, double r) const {
        double s = opts_.nonlinearity ? std::pow(std::fabs(v_[i]), sp_.p) : 0.0;
        if (opts_.force_u) s += opts_.force_u(t, r);
        return s;
    }
    double rhs_v(int i, double t, double r) const {
        double s = opts_.nonlinearity ? std::pow(std::fabs(u_[i]), sp_.q) : 0.0;
        if (opts_.force_v) s += opts_.force_v(t, r);
        return s;
    }

    model::SystemParams sp_;
    GridSpec grid_;
    SolverOptions opts_;
    double eps_ = 0.0;
    double dr_ = 0.0, dt_ = 0.0, t_ = 0.0;
    bool first_step_pending_ = true;
    bool finite_ = true;
    bool clip_support_ = false;
    double data_r0_ = 1.0;
    std::vector<double> u_, up_, ut0_, un_;
    std::vector<double> v_, vp_, vt0_, vn_;
};

/// Initial state on the grid (the step-0 snapshot of an integrator).
inline FieldState init(const InitialData& data, const GridSpec& grid, double eps, const model::SystemParams& sp) {
    return RadialIntegrator(sp, data, grid, eps).snapshot();
}

struct Functionals {
    double U = 0.0, V = 0.0, F = 0.0, G = 0.0;
};

/// Spatial averages and the adjoint-weighted functionals
/// F(t) = int u(t,x) lambda1(t) phi(x) dx, G(t) = int v(t,x) lambda2(t) phi(x) dx.
inline Functionals functionals(const FieldState& st, const testfunc::TimeFactor& tf1,
                               const testfunc::TimeFactor& tf2) {
    Functionals fn;
    fn.U = detail::radial_integral(st.u, st.dr, st.n);
    fn.V = detail::radial_integral(st.v, st.dr, st.n);
    const double lam1 = testfunc::lambda_factor(tf1, st.t).value;
    const double lam2 = testfunc::lambda_factor(tf2, st.t).value;
    std::vector<double> wu(st.u.size()), wv(st.v.size());
    for (std::size_t i = 0; i < st.u.size(); ++i) {
        const double phi = testfunc::phi_yz(st.n, i * st.dr);
        wu[i] = st.u[i] * phi;
        wv[i] = st.v[i] * phi;
    }
    fn.F = lam1 * detail::radial_integral(wu, st.dr, st.n);
    fn.G = lam2 * detail::radial_integral(wv, st.dr, st.n);
    return fn;
}

struct RunResult {
    LifespanRecord record;
    DiagnosticSeries series;   // finest level
    FieldHistory history;      // only if history_snapshots > 0
};

namespace detail {

struct SingleRun {
    double T = std::numeric_limits<double>::infinity();
    bool blew_up = false;
    DiagnosticSeries series;
    FieldHistory history;
};

inline SingleRun integrate_one(const model::SystemParams& sp, const InitialData& data, const GridSpec& grid,
                               double eps, double threshold, const SolverOptions& opts, bool want_series) {
    RadialIntegrator integ(sp, data, grid, eps, opts);
    SingleRun out;
    const long n_steps = static_cast<long>(std::ceil(grid.t_max / integ.dt()));
    const long hist_stride =
        opts.history_snapshots > 0 ? std::max(1L, n_steps / opts.history_snapshots) : 0;
    const testfunc::TimeFactor tf1{sp.mu1, sp.nu1sq};
    const testfunc::TimeFactor tf2{sp.mu2, sp.nu2sq};

    // phi(x) sampled once on the grid; reused by every series snapshot.
    std::vector<double> phi_r;
    if (want_series) {
        phi_r.resize(grid.nr + 1);
        for (int i = 0; i <= grid.nr; ++i) phi_r[i] = testfunc::phi_yz(sp.n, i * integ.dr());
    }
    std::vector<double> scratch(grid.nr + 1), scratch2(grid.nr + 1);

    auto record_series = [&](const FieldState& st) {
        out.series.t.push_back(st.t);
        out.series.U.push_back(radial_integral(st.u, st.dr, st.n));
        out.series.V.push_back(radial_integral(st.v, st.dr, st.n));
        const double lam1 = testfunc::lambda_factor(tf1, st.t).value;
        const double lam2 = testfunc::lambda_factor(tf2, st.t).value;
        double mu = 0.0, mv = 0.0;
        for (std::size_t i = 0; i < st.u.size(); ++i) {
            mu = std::max(mu, std::fabs(st.u[i]));
            mv = std::max(mv, std::fabs(st.v[i]));
            scratch[i] = st.u[i] * phi_r[i];
            scratch2[i] = st.v[i] * phi_r[i];
        }
        out.series.Fw.push_back(lam1 * radial_integral(scratch, st.dr, st.n));
        out.series.Gw.push_back(lam2 * radial_integral(scratch2, st.dr, st.n));
        out.series.max_u.push_back(mu);
        out.series.max_v.push_back(mv);
        for (std::size_t i = 0; i < st.u.size(); ++i) {
            scratch[i] = std::pow(std::fabs(st.v[i]), sp.p);
            scratch2[i] = std::pow(std::fabs(st.u[i]), sp.q);
        }
        out.series.int_vp.push_back(radial_integral(scratch, st.dr, st.n));
        out.series.int_uq.push_back(radial_integral(scratch2, st.dr, st.n));
    };
    auto record_history = [&](const FieldState& st) {
        out.history.t.push_back(st.t);
        out.history.u.push_back(st.u);
        out.history.v.push_back(st.v);
        out.history.dr = st.dr;
        out.history.n = st.n;
    };

    if (want_series) record_series(integ.snapshot());
    if (hist_stride > 0) record_history(integ.snapshot());
    for (long m = 1; m <= n_steps; ++m) {
        integ.step();
        if (!integ.finite() || integ.max_abs() >= threshold) {
            out.T = integ.t();
            out.blew_up = true;
            return out;
        }
        if (want_series && m % opts.series_stride == 0) record_series(integ.snapshot());
        if (hist_stride > 0 && m % hist_stride == 0) record_history(integ.snapshot());
    }
    return out;
}

}  // namespace detail

/// Lifespan measurement: integrate until max(|u|,|v|) crosses `threshold`
/// (or goes non-finite) on a ladder of refined grids. T_num is the first
/// crossing time on the finest grid; staying below threshold up to t_max is a
/// valid outcome recorded as +infinity.
inline RunResult run_lifespan(const model::SystemParams& sp, const InitialData& data, const GridSpec& grid,
                              double eps, double threshold = 1e8, SolverOptions opts = {}) {
    if (threshold < 1e6) throw std::invalid_argument("run_lifespan: threshold must be >= 1e6");
    const auto t_start = std::chrono::steady_clock::now();
    RunResult result;
    result.record.eps = eps;
    result.record.threshold_used = threshold;
    detail::SingleRun finest;
    for (int level = 0; level < grid.refine_levels; ++level) {
        GridSpec g = grid;
        g.nr = grid.nr << level;
        const bool last = level == grid.refine_levels - 1;
        SolverOptions level_opts = opts;
        if (!last) level_opts.history_snapshots = 0;
        auto run = detail::integrate_one(sp, data, g, eps, threshold, level_opts, last);
        result.record.level_T.push_back(run.T);
        if (last) finest = std::move(run);
    }
    result.record.blow_up = finest.blew_up;
    result.record.T_num = finest.T;
    const auto& lv = result.record.level_T;
    if (lv.size() >= 2) {
        const double Tf = lv.back(), Tc = lv[lv.size() - 2];
        if (std::isinf(Tf) && std::isinf(Tc)) {
            result.record.converged = true;
        } else if (std::isfinite(Tf) && std::isfinite(Tc)) {
            result.record.converged = std::fabs(Tf - Tc) <= 0.05 * Tf;
        }
    }
    result.series = std::move(finest.series);
    result.history = std::move(finest.history);
    result.record.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Y-functional: Y[w](R) = int_0^R ( intint w psi*_sigma dx dt ) dsigma/sigma.

struct YPoint {
    double R = 0.0;
    double Y = 0.0;
    double inner_at_R = 0.0;      // intint w psi*_R dx dt
    double inner_psi_at_R = 0.0;  // intint w psi_R dx dt (majorant in the lemma)
};

struct YResult {
    std::vector<YPoint> points;
    bool sampling_warning = false;  // time sampling coarse relative to min R
};

/// Weight evaluated pointwise on the stored history.
using WeightFn = std::function<double(double t, double r, double u, double v)>;

namespace detail {

// The sigma dependence enters only through the cutoff factor, so the spatial
// integrals W(t_m) = int w dx are formed once. Each sigma evaluation then
// integrates psi_sigma against the piecewise-linear interpolant of W, exactly:
// snapshot intervals are split at the cutoff breakpoints sigma/2 and sigma,
// and each polynomial piece is Gauss-integrated.
struct WeightedSeries {
    std::vector<double> t;
    std::vector<double> W;

    double integrate(double sigma, bool star) const {
        const testfunc::CutoffSpec spec{sigma};
        double s = 0.0;
        for (std::size_t m = 0; m + 1 < t.size(); ++m) {
            const double ta = t[m], tb = t[m + 1];
            if (ta >= sigma) break;  // outside the cutoff support
            const double wa = W[m], wb = W[m + 1];
            auto wlin = [&](double x) { return wa + (wb - wa) * (x - ta) / (tb - ta); };
            // split at the breakpoints; each piece is (deg-7 poly) x (linear)
            double cuts[4] = {ta, std::min(tb, sigma), 0.0, 0.0};
            int nc = 2;
            for (double brk : {0.5 * sigma, sigma}) {
                if (brk > ta && brk < cuts[nc - 1]) {
                    cuts[nc] = cuts[nc - 1];
                    cuts[nc - 1] = brk;
                    ++nc;
                }
            }
            for (int c = 0; c + 1 < nc; ++c) {
                const double a = cuts[c], b = cuts[c + 1];
                if (b <= a) continue;
                if (b <= 0.5 * sigma) {
                    // plateau: psi = 1, psi* = 0
                    if (!star) s += 0.5 * (wlin(a) + wlin(b)) * (b - a);
                    continue;
                }
                s += numeric::gauss16(
                    [&](double x) {
                        const auto cv = testfunc::cutoff(spec, x);
                        return (star ? cv.psi_star : cv.psi) * wlin(x);
                    },
                    a, b);
            }
        }
        return s;
    }
};

inline WeightedSeries weighted_series(const FieldHistory& h, const WeightFn& w) {
    WeightedSeries ws;
    ws.t = h.t;
    ws.W.resize(h.t.size());
    std::vector<double> row;
    for (std::size_t m = 0; m < h.t.size(); ++m) {
        row.resize(h.u[m].size());
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = w(h.t[m], i * h.dr, h.u[m][i], h.v[m][i]);
        ws.W[m] = radial_integral(row, h.dr, h.n);
    }
    return ws;
}

}  // namespace detail

/// Y[w](R) for each requested R by nested quadrature over the run history.
inline YResult y_functional(const FieldHistory& h, const WeightFn& w, std::span<const double> R_values) {
    if (h.t.size() < 2) throw std::invalid_argument("y_functional: history too short");
    const auto ws = detail::weighted_series(h, w);
    YResult res;
    double dt_max = 0.0;
    for (std::size_t m = 0; m + 1 < h.t.size(); ++m) dt_max = std::max(dt_max, h.t[m + 1] - h.t[m]);
    for (double R : R_values) {
        if (!(R > 0.0)) throw std::invalid_argument("y_functional: R must be positive");
        if (dt_max > R / 50.0) res.sampling_warning = true;
        YPoint pt;
        pt.R = R;
        auto integrand = [&](double sigma) { return ws.integrate(sigma, true) / sigma; };
        // The integrand tends to a finite limit as sigma -> 0; a short
        // left-edge strip covers [0, sigma_min].
        const double sigma_min = R * 1e-6;
        pt.Y = numeric::gauss16_composite(integrand, sigma_min, R, 64) + sigma_min * integrand(sigma_min);
        pt.inner_at_R = ws.integrate(R, true);
        pt.inner_psi_at_R = ws.integrate(R, false);
        res.points.push_back(pt);
    }
    return res;
}

}  // namespace siwave::solver
