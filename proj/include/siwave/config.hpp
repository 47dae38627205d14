#pragma once

// Plain-text run configuration: flat key = value lines grouped in [sections],
// '#' comments. Unknown keys are rejected with their line number, as are
// values violating the numeric invariants of the underlying types.

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "siwave/iterkit.hpp"
#include "siwave/model.hpp"
#include "siwave/solver.hpp"

namespace siwave::config {

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct CurveRange {
    double p_min = 1.2, p_max = 4.0;
    double q_min = 1.2, q_max = 4.0;
    int steps_p = 50, steps_q = 50;
};

struct RunConfig {
    model::SystemParams system;
    solver::GridSpec grid;
    solver::InitialData data;
    iterkit::DataConstants iteration;
    long j_max = 25;
    CurveRange curve;
    std::vector<double> sweep_eps;
    double sweep_threshold = 1e8;
    int jobs = 1;
    double classify_tol = 1e-12;
    std::string output_dir;
};

namespace detail {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

class Entries {
public:
    std::map<std::string, RawEntry> map;

    double num(const std::string& key, double fallback) {
        auto it = map.find(key);
        if (it == map.end()) return fallback;
        it->second.used = true;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError(it->second.line, "expected a number for '" + key + "', got '" + it->second.value + "'");
        }
    }

    long integer(const std::string& key, long fallback) {
        const double v = num(key, static_cast<double>(fallback));
        const long r = static_cast<long>(v);
        if (static_cast<double>(r) != v) {
            auto it = map.find(key);
            throw ConfigError(it->second.line, "expected an integer for '" + key + "'");
        }
        return r;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        auto it = map.find(key);
        if (it == map.end()) return fallback;
        it->second.used = true;
        return it->second.value;
    }

    std::vector<double> list(const std::string& key) {
        auto it = map.find(key);
        if (it == map.end()) return {};
        it->second.used = true;
        std::vector<double> out;
        std::stringstream ss(it->second.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw ConfigError(it->second.line, "bad list entry '" + item + "' for '" + key + "'");
            }
        }
        return out;
    }
};

}  // namespace detail

inline RunConfig parse(std::istream& in) {
    std::map<std::string, detail::Entries> sections;
    std::string line;
    std::string section = "";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(lineno, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(lineno, "empty key");
        if (section.empty()) throw ConfigError(lineno, "key '" + key + "' outside any [section]");
        auto& ent = sections[section].map[key];
        ent.value = val;
        ent.line = lineno;
    }

    RunConfig cfg;
    auto& sys = sections["system"];
    cfg.system.n = static_cast<int>(sys.integer("n", cfg.system.n));
    cfg.system.mu1 = sys.num("mu1", cfg.system.mu1);
    cfg.system.mu2 = sys.num("mu2", cfg.system.mu2);
    cfg.system.nu1sq = sys.num("nu1sq", cfg.system.nu1sq);
    cfg.system.nu2sq = sys.num("nu2sq", cfg.system.nu2sq);
    cfg.system.p = sys.num("p", cfg.system.p);
    cfg.system.q = sys.num("q", cfg.system.q);
    cfg.system.r0 = sys.num("r0", cfg.system.r0);
    cfg.system.eps = sys.num("eps", cfg.system.eps);

    auto& grid = sections["grid"];
    cfg.grid.r_max = grid.num("r_max", cfg.grid.r_max);
    cfg.grid.nr = static_cast<int>(grid.integer("nr", cfg.grid.nr));
    cfg.grid.cfl = grid.num("cfl", cfg.grid.cfl);
    cfg.grid.t_max = grid.num("t_max", cfg.grid.t_max);
    cfg.grid.refine_levels = static_cast<int>(grid.integer("refine_levels", cfg.grid.refine_levels));

    auto& data = sections["data"];
    cfg.data.k = static_cast<int>(data.integer("k", cfg.data.k));
    cfg.data.cu0 = data.num("cu0", cfg.data.cu0);
    cfg.data.cu1 = data.num("cu1", cfg.data.cu1);
    cfg.data.cv0 = data.num("cv0", cfg.data.cv0);
    cfg.data.cv1 = data.num("cv1", cfg.data.cv1);
    cfg.data.r0 = cfg.system.r0;

    auto& it = sections["iteration"];
    cfg.iteration.C1 = it.num("c1", cfg.iteration.C1);
    cfg.iteration.K1 = it.num("k1", cfg.iteration.K1);
    cfg.iteration.T0 = it.num("t0", cfg.iteration.T0);
    cfg.j_max = it.integer("j_max", cfg.j_max);

    auto& curve = sections["curve"];
    cfg.curve.p_min = curve.num("p_min", cfg.curve.p_min);
    cfg.curve.p_max = curve.num("p_max", cfg.curve.p_max);
    cfg.curve.q_min = curve.num("q_min", cfg.curve.q_min);
    cfg.curve.q_max = curve.num("q_max", cfg.curve.q_max);
    cfg.curve.steps_p = static_cast<int>(curve.integer("steps_p", cfg.curve.steps_p));
    cfg.curve.steps_q = static_cast<int>(curve.integer("steps_q", cfg.curve.steps_q));

    auto& sweep = sections["sweep"];
    cfg.sweep_eps = sweep.list("eps_list");
    cfg.sweep_threshold = sweep.num("threshold", cfg.sweep_threshold);
    cfg.jobs = static_cast<int>(sweep.integer("jobs", cfg.jobs));

    auto& misc = sections["classify"];
    cfg.classify_tol = misc.num("tol", cfg.classify_tol);

    auto& out = sections["output"];
    cfg.output_dir = out.text("dir", cfg.output_dir);

    // reject unknown keys so typos do not silently fall back to defaults
    static const std::map<std::string, bool> known_sections = {
        {"system", true}, {"grid", true},     {"data", true},   {"iteration", true},
        {"curve", true},  {"sweep", true},    {"classify", true}, {"output", true}};
    for (const auto& [name, entries] : sections) {
        if (!known_sections.count(name)) {
            int ln = entries.map.empty() ? 0 : entries.map.begin()->second.line;
            throw ConfigError(ln, "unknown section [" + name + "]");
        }
        for (const auto& [key, ent] : entries.map)
            if (!ent.used) throw ConfigError(ent.line, "unknown key '" + key + "' in [" + name + "]");
    }

    try {
        cfg.system.validate();
    } catch (const std::exception& ex) {
        throw ConfigError(0, std::string("invalid [system] parameters: ") + ex.what());
    }
    return cfg;
}

inline RunConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    return parse(in);
}

}  // namespace siwave::config
