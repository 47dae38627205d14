#pragma once

// Experiment drivers binding the modules into the user-facing commands:
// classification reports, critical-curve grids, single simulations with
// diagnostics, and lifespan sweeps with a log-log scaling fit.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <string>
#include <vector>

#include "siwave/config.hpp"
#include "siwave/io.hpp"
#include "siwave/iterkit.hpp"
#include "siwave/model.hpp"
#include "siwave/solver.hpp"

namespace siwave::experiment {

struct ClassifyOutcome {
    model::RegimeReport report;
    model::RootPairs roots;
    iterkit::IterationConstants consts;
    bool thresholds_available = false;
    iterkit::Thresholds thresholds;
};

inline ClassifyOutcome run_classify(const config::RunConfig& cfg) {
    ClassifyOutcome out;
    out.report = model::classify(cfg.system, cfg.classify_tol);
    out.roots = model::roots(cfg.system);
    out.consts = iterkit::constants(cfg.system, out.roots);
    if (out.report.regime == model::Regime::Subcritical) {
        out.thresholds = iterkit::blowup_thresholds(out.consts, cfg.system, out.roots, cfg.iteration);
        out.thresholds_available = true;
    }
    return out;
}

inline io::json classify_to_json(const config::RunConfig& cfg, const ClassifyOutcome& out) {
    io::json j{{"params", io::to_json(cfg.system)}, {"report", io::to_json(out.report)}};
    j["roots"] = io::json{{"r1", out.roots.r1}, {"r2", out.roots.r2}, {"rho1", out.roots.rho1},
                          {"rho2", out.roots.rho2}};
    if (out.thresholds_available) {
        const auto& th = out.thresholds;
        j["thresholds"] = io::json{{"E", std::isnan(th.E) ? io::json(nullptr) : io::json(th.E)},
                                   {"E_tilde", std::isnan(th.E_tilde) ? io::json(nullptr) : io::json(th.E_tilde)},
                                   {"T_pred", th.T_pred},
                                   {"branch", th.branch_is_tilde ? "F1" : "F2"},
                                   {"eps0_feasible", th.eps0_feasible}};
    } else {
        j["thresholds"] = nullptr;
    }
    return j;
}

inline model::PqGrid run_curve(const config::RunConfig& cfg) {
    return model::pq_grid(cfg.system, cfg.curve.p_min, cfg.curve.p_max, cfg.curve.q_min, cfg.curve.q_max,
                          cfg.curve.steps_p, cfg.curve.steps_q, cfg.classify_tol);
}

struct SimulateOutcome {
    solver::RunResult run;
};

inline SimulateOutcome run_simulate(const config::RunConfig& cfg) {
    solver::SolverOptions opts;
    opts.series_stride = 4;
    SimulateOutcome out;
    out.run = solver::run_lifespan(cfg.system, cfg.data, cfg.grid, cfg.system.eps, cfg.sweep_threshold, opts);
    return out;
}

inline io::json simulate_to_json(const config::RunConfig& cfg, const SimulateOutcome& out) {
    return io::json{{"params", io::to_json(cfg.system)},
                    {"grid", io::to_json(cfg.grid)},
                    {"record", io::to_json(out.run.record, /*include_runtime=*/true)},
                    {"series", io::series_to_json(out.run.series)}};
}

struct SweepOutcome {
    std::vector<solver::LifespanRecord> records;
    double predicted_slope = 0.0;  // -1/max(F1,F2)
    double fitted_slope = 0.0;
    double rel_gap = 0.0;
    int points_used = 0;
    bool fit_ok = false;
};

/// Lifespan sweep over the configured eps grid; refuses non-subcritical
/// configurations (the exponential laws are not simulable at desk scale).
/// The fit uses converged blow-up points only and needs at least three.
inline SweepOutcome run_sweep(const config::RunConfig& cfg, int jobs = 0) {
    const auto report = model::classify(cfg.system, cfg.classify_tol);
    if (report.regime != model::Regime::Subcritical)
        throw std::domain_error("run_sweep: requires a subcritical configuration");
    if (cfg.sweep_eps.size() < 4) throw std::invalid_argument("run_sweep: need an eps grid of >= 4 points");
    if (jobs <= 0) jobs = cfg.jobs;
    jobs = std::max(1, jobs);

    SweepOutcome out;
    out.records.resize(cfg.sweep_eps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.sweep_eps.size()) return;
            auto res = solver::run_lifespan(cfg.system, cfg.data, cfg.grid, cfg.sweep_eps[i],
                                            cfg.sweep_threshold);
            out.records[i] = res.record;
        }
    };
    std::vector<std::future<void>> pool;
    for (int w = 1; w < jobs; ++w) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool) f.get();

    out.predicted_slope = -1.0 / std::max(report.F1, report.F2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& rec : out.records) {
        if (!rec.blow_up || !rec.converged) continue;
        const double x = std::log(rec.eps), y = std::log(rec.T_num);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    out.points_used = m;
    if (m >= 3) {
        out.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        out.rel_gap = std::fabs(out.fitted_slope - out.predicted_slope) / std::fabs(out.predicted_slope);
        out.fit_ok = true;
    }
    return out;
}

inline io::json sweep_to_json(const config::RunConfig& cfg, const SweepOutcome& out) {
    // volatile fields (wall-clock runtimes) are excluded: repeated runs of the
    // same configuration must serialize byte-identically
    io::json recs = io::json::array();
    for (const auto& rec : out.records) recs.push_back(io::to_json(rec, /*include_runtime=*/false));
    return io::json{{"params", io::to_json(cfg.system)},
                    {"grid", io::to_json(cfg.grid)},
                    {"threshold", cfg.sweep_threshold},
                    {"records", std::move(recs)},
                    {"fit", io::json{{"predicted_slope", out.predicted_slope},
                                     {"fitted_slope", out.fit_ok ? io::json(out.fitted_slope) : io::json(nullptr)},
                                     {"rel_gap", out.fit_ok ? io::json(out.rel_gap) : io::json(nullptr)},
                                     {"points_used", out.points_used},
                                     {"fit_ok", out.fit_ok}}}};
}

}  // namespace siwave::experiment
