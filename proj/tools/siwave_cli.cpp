// Command-line front end: regime classification, critical-curve export,
// verification suites, single simulations, and lifespan sweeps.
//
// Exit codes: 0 success, 1 verification/invariant failure, 2 config error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <string>

#include "siwave/config.hpp"
#include "siwave/experiment.hpp"
#include "siwave/io.hpp"
#include "siwave/verify.hpp"

namespace {

namespace fs = std::filesystem;
using siwave::config::RunConfig;

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

int cmd_classify(const RunConfig& cfg, const std::string& out_dir) {
    auto outcome = siwave::experiment::run_classify(cfg);
    const auto& rep = outcome.report;
    const auto& sp = cfg.system;
    std::cout << fmt::format("system: n={} mu=({}, {}) nu^2=({}, {}) p={} q={} r0={} eps={}\n", sp.n, sp.mu1,
                             sp.mu2, sp.nu1sq, sp.nu2sq, sp.p, sp.q, sp.r0, sp.eps);
    std::cout << fmt::format("delta1 = {:.12g}, delta2 = {:.12g}\n", sp.delta1(), sp.delta2());
    std::cout << fmt::format("roots: r = ({:.12g}, {:.12g}), rho = ({:.12g}, {:.12g})\n", outcome.roots.r1,
                             outcome.roots.r2, outcome.roots.rho1, outcome.roots.rho2);
    std::cout << fmt::format("F1 = F(n+mu1, p, q) = {:.12g}\n", rep.F1);
    std::cout << fmt::format("F2 = F(n+mu2, q, p) = {:.12g}\n", rep.F2);
    std::cout << "regime: " << siwave::model::to_string(rep.regime);
    if (rep.critical_subcase) std::cout << " (" << siwave::model::to_string(*rep.critical_subcase) << ")";
    std::cout << "\n";
    switch (rep.lifespan_law.kind) {
        case siwave::model::LifespanKind::Polynomial:
            std::cout << fmt::format("lifespan: T <~ eps^(-{:.12g})\n", rep.lifespan_law.exponent);
            break;
        case siwave::model::LifespanKind::Exponential:
            std::cout << fmt::format("lifespan: T <~ exp(C eps^(-{:.12g}))\n", rep.lifespan_law.exponent);
            break;
        case siwave::model::LifespanKind::NoPrediction:
            std::cout << "lifespan: no prediction (supercritical; open problem)\n";
            break;
    }
    std::cout << "exponent-range condition (1/p < (n-sqrt(delta2))/2 and 1/q < (n-sqrt(delta1))/2): "
              << (rep.technical_ok ? "satisfied" : "violated") << "\n";
    if (rep.parabolic_curve_value)
        std::cout << fmt::format("parabolic-like curve value (report only): {:.12g}\n",
                                 *rep.parabolic_curve_value);
    if (outcome.thresholds_available)
        std::cout << fmt::format("iteration thresholds: T_pred = {:.6g} on the {} branch\n",
                                 outcome.thresholds.T_pred, outcome.thresholds.branch_is_tilde ? "F1" : "F2");
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        siwave::io::write_file(join(out_dir, "classify.json"),
                               siwave::experiment::classify_to_json(cfg, outcome).dump(2) + "\n");
        std::cout << "wrote " << join(out_dir, "classify.json") << "\n";
        if (rep.regime != siwave::model::Regime::Supercritical) {
            auto table = siwave::iterkit::sequences_recurrence(outcome.consts, cfg.system, outcome.roots,
                                                               cfg.iteration, cfg.j_max);
            std::ofstream csv(join(out_dir, "iteration.csv"), std::ios::binary);
            siwave::io::write_iteration_csv(csv, table);
            std::cout << "wrote " << join(out_dir, "iteration.csv") << "\n";
        }
    }
    return 0;
}

int cmd_curve(const RunConfig& cfg, const std::string& out_dir) {
    auto grid = siwave::experiment::run_curve(cfg);
    ensure_dir(out_dir);
    {
        std::ofstream csv(join(out_dir, "curve.csv"), std::ios::binary);
        siwave::io::write_grid_csv(csv, grid);
    }
    siwave::io::write_file(join(out_dir, "curve.json"), siwave::io::to_json(grid).dump(2) + "\n");
    std::cout << fmt::format("wrote {} ({} x {} points) and curve.json\n", join(out_dir, "curve.csv"),
                             grid.p_values.size(), grid.q_values.size());
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out_dir) {
    auto checks = siwave::verify::suite(suite);
    int failed = 0;
    double total = 0.0;
    std::map<std::string, std::pair<int, double>> per_suite;  // passed count, seconds
    for (const auto& c : checks) {
        total += c.seconds;
        auto& agg = per_suite[c.suite];
        agg.first += c.pass ? 1 : 0;
        agg.second += c.seconds;
        std::cout << fmt::format("[{}] {}/{} metric={:.3g} bound={:.3g} ({:.2f}s){}{}\n",
                                 c.pass ? "PASS" : "FAIL", c.suite, c.name, c.metric, c.bound, c.seconds,
                                 c.note.empty() ? "" : " -- ", c.note);
        if (!c.pass) ++failed;
    }
    if (per_suite.size() > 1)
        for (const auto& [name, agg] : per_suite)
            std::cout << fmt::format("  {}: {:.2f}s\n", name, agg.second);
    std::cout << fmt::format("{}: {}/{} checks passed in {:.2f}s\n", suite, checks.size() - failed,
                             checks.size(), total);
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        siwave::io::json arr = siwave::io::json::array();
        for (const auto& c : checks)
            arr.push_back(siwave::io::json{{"suite", c.suite},
                                           {"name", c.name},
                                           {"pass", c.pass},
                                           {"metric", c.metric},
                                           {"bound", c.bound},
                                           {"seconds", c.seconds},
                                           {"note", c.note}});
        siwave::io::write_file(join(out_dir, "verify.json"), arr.dump(2) + "\n");
    }
    return failed == 0 ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
    auto outcome = siwave::experiment::run_simulate(cfg);
    const auto& rec = outcome.run.record;
    if (rec.blow_up)
        std::cout << fmt::format("blow-up detected: T_num = {:.6g} (threshold {:.3g}, converged: {})\n",
                                 rec.T_num, rec.threshold_used, rec.converged ? "yes" : "no");
    else
        std::cout << fmt::format("no blow-up before t_max = {:.6g}\n", cfg.grid.t_max);
    ensure_dir(out_dir);
    siwave::io::write_file(join(out_dir, "run.json"),
                           siwave::experiment::simulate_to_json(cfg, outcome).dump(2) + "\n");
    {
        std::ofstream csv(join(out_dir, "series.csv"), std::ios::binary);
        siwave::io::write_series_csv(csv, outcome.run.series);
    }
    std::cout << "wrote " << join(out_dir, "run.json") << " and series.csv\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, int jobs) {
    auto outcome = siwave::experiment::run_sweep(cfg, jobs);
    for (const auto& rec : outcome.records) {
        if (rec.blow_up)
            std::cout << fmt::format("eps = {:<8.5g} T_num = {:<10.6g} converged: {}\n", rec.eps, rec.T_num,
                                     rec.converged ? "yes" : "no");
        else
            std::cout << fmt::format("eps = {:<8.5g} no blow-up before t_max\n", rec.eps);
    }
    if (outcome.fit_ok)
        std::cout << fmt::format(
            "fitted slope {:.4f} vs predicted {:.4f} (relative gap {:.1f}%, {} points)\n",
            outcome.fitted_slope, outcome.predicted_slope, 100.0 * outcome.rel_gap, outcome.points_used);
    else
        std::cout << "fit unavailable: fewer than 3 converged blow-up points\n";
    ensure_dir(out_dir);
    siwave::io::write_file(join(out_dir, "sweep.json"),
                           siwave::experiment::sweep_to_json(cfg, outcome).dump(2) + "\n");
    std::cout << "wrote " << join(out_dir, "sweep.json") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis toolkit for weakly coupled wave systems with scale-invariant damping and mass"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite = "all";
    int jobs = 0;

    auto add_config = [&](CLI::App* sub) { sub->add_option("--config", config_path, "run configuration file")->required(); };

    auto* classify = app.add_subcommand("classify", "regime classification and lifespan-law prediction");
    add_config(classify);
    classify->add_option("--out", out_dir, "output directory for classify.json");

    auto* curve = app.add_subcommand("curve", "classification grid over the (p,q) plane");
    add_config(curve);
    curve->add_option("--out", out_dir, "output directory (default: [output] dir from the config)");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", suite, "specfun|testfunc|model|iterkit|solver|all");
    verify->add_option("--out", out_dir, "output directory for verify.json");

    auto* simulate = app.add_subcommand("simulate", "single lifespan run with diagnostics");
    add_config(simulate);
    simulate->add_option("--out", out_dir, "output directory (default: [output] dir from the config)");

    auto* sweep = app.add_subcommand("sweep", "lifespan sweep over the eps grid with a scaling fit");
    add_config(sweep);
    sweep->add_option("--out", out_dir, "output directory (default: [output] dir from the config)");
    sweep->add_option("--jobs", jobs, "parallel workers (default: from config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(suite, out_dir);
        const RunConfig cfg = siwave::config::parse_file(config_path);
        // output-directory precedence: --out flag, then SIWAVE_OUT, then the
        // config's [output] dir; no other environment configuration exists
        if (out_dir.empty())
            if (const char* env = std::getenv("SIWAVE_OUT")) out_dir = env;
        if (out_dir.empty()) out_dir = cfg.output_dir;
        if (classify->parsed()) return cmd_classify(cfg, out_dir);
        const bool needs_out = curve->parsed() || simulate->parsed() || sweep->parsed();
        if (needs_out && out_dir.empty())
            throw siwave::config::ConfigError(0, "no output directory: pass --out or set [output] dir");
        if (curve->parsed()) return cmd_curve(cfg, out_dir);
        if (simulate->parsed()) return cmd_simulate(cfg, out_dir);
        if (sweep->parsed()) return cmd_sweep(cfg, out_dir, jobs);
    } catch (const siwave::config::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
