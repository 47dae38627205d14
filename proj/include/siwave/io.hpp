#pragma once

// Serialization of reports, grids, tables, and runs. JSON objects use
// insertion-ordered keys and CSV columns follow the documented order, so
// identical inputs serialize to identical bytes.

#include <json.hpp>

#include <fmt/format.h>
#include <fstream>
#include <ostream>
#include <string>

#include "siwave/iterkit.hpp"
#include "siwave/model.hpp"
#include "siwave/solver.hpp"

namespace siwave::io {

using json = nlohmann::ordered_json;

inline json to_json(const model::SystemParams& sp) {
    return json{{"n", sp.n},         {"mu1", sp.mu1}, {"mu2", sp.mu2}, {"nu1sq", sp.nu1sq},
                {"nu2sq", sp.nu2sq}, {"p", sp.p},     {"q", sp.q},     {"r0", sp.r0},
                {"eps", sp.eps},     {"delta1", sp.delta1()}, {"delta2", sp.delta2()}};
}

inline json to_json(const model::RegimeReport& rep) {
    json j{{"F1", rep.F1},
           {"F2", rep.F2},
           {"regime", model::to_string(rep.regime)},
           {"technical_ok", rep.technical_ok},
           {"lifespan_kind", model::to_string(rep.lifespan_law.kind)},
           {"lifespan_exponent", rep.lifespan_law.exponent}};
    j["critical_subcase"] =
        rep.critical_subcase ? json(model::to_string(*rep.critical_subcase)) : json(nullptr);
    j["parabolic_curve_value"] =
        rep.parabolic_curve_value ? json(*rep.parabolic_curve_value) : json(nullptr);
    return j;
}

// Grid CSV column order is part of the format contract:
// p, q, F1, F2, regime, lifespan_kind, lifespan_exponent
inline void write_grid_csv(std::ostream& os, const model::PqGrid& grid) {
    os << "p,q,F1,F2,regime,lifespan_kind,lifespan_exponent\n";
    for (const auto& gp : grid.points) {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g}\n", gp.p, gp.q, gp.report.F1,
                          gp.report.F2, model::to_string(gp.report.regime),
                          model::to_string(gp.report.lifespan_law.kind), gp.report.lifespan_law.exponent);
    }
}

inline json to_json(const model::PqGrid& grid) {
    json arr = json::array();
    for (const auto& gp : grid.points) {
        json rec{{"p", gp.p}, {"q", gp.q}};
        rec.update(to_json(gp.report));
        arr.push_back(std::move(rec));
    }
    return arr;
}

// Iteration table CSV: j, a_j, b_j, alpha_j, beta_j, log_D_j, log_Delta_j
inline void write_iteration_csv(std::ostream& os, const iterkit::IterationTable& table) {
    os << "j,a_j,b_j,alpha_j,beta_j,log_D_j,log_Delta_j\n";
    for (const auto& row : table.rows)
        os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", row.j, row.a, row.b,
                          row.alpha, row.beta, row.log_D, row.log_Delta);
}

inline json to_json(const solver::LifespanRecord& rec, bool include_runtime = true) {
    json j{{"eps", rec.eps},
           {"blow_up", rec.blow_up},
           {"T_num", rec.blow_up ? json(rec.T_num) : json(nullptr)},
           {"threshold_used", rec.threshold_used},
           {"converged", rec.converged},
           {"level_T", json::array()}};
    for (double T : rec.level_T) j["level_T"].push_back(std::isfinite(T) ? json(T) : json(nullptr));
    if (include_runtime) j["runtime_s"] = rec.runtime_s;
    return j;
}

inline json to_json(const solver::GridSpec& g) {
    return json{{"r_max", g.r_max},
                {"nr", g.nr},
                {"cfl", g.cfl},
                {"t_max", g.t_max},
                {"refine_levels", g.refine_levels}};
}

// Time-series CSV: t, U, V, F, G, max_u, max_v
inline void write_series_csv(std::ostream& os, const solver::DiagnosticSeries& s) {
    os << "t,U,V,F,G,max_u,max_v\n";
    for (std::size_t i = 0; i < s.t.size(); ++i)
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t[i], s.U[i],
                          s.V[i], s.Fw[i], s.Gw[i], s.max_u[i], s.max_v[i]);
}

inline json series_to_json(const solver::DiagnosticSeries& s, std::size_t max_points = 400) {
    // thinned copy keeps run records a sane size
    const std::size_t stride = s.t.empty() ? 1 : std::max<std::size_t>(1, s.t.size() / max_points);
    json j{{"t", json::array()},     {"U", json::array()},     {"V", json::array()},
           {"F", json::array()},     {"G", json::array()},     {"max_u", json::array()},
           {"max_v", json::array()}, {"int_vp", json::array()}, {"int_uq", json::array()}};
    for (std::size_t i = 0; i < s.t.size(); i += stride) {
        j["t"].push_back(s.t[i]);
        j["U"].push_back(s.U[i]);
        j["V"].push_back(s.V[i]);
        j["F"].push_back(s.Fw[i]);
        j["G"].push_back(s.Gw[i]);
        j["max_u"].push_back(s.max_u[i]);
        j["max_v"].push_back(s.max_v[i]);
        j["int_vp"].push_back(s.int_vp[i]);
        j["int_uq"].push_back(s.int_uq[i]);
    }
    return j;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    os << contents;
}

}  // namespace siwave::io
