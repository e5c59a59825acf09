#include "phl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace phl::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view v, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(std::string(v), &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(x)) throw std::invalid_argument("not finite");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a finite number, got '" + std::string(v) + "'");
    }
}

int parse_int(std::string_view v, int line) {
    const double x = parse_double(v, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) {
        throw ConfigError(line, "expected an integer, got '" + std::string(v) + "'");
    }
    return i;
}

bool parse_bool(std::string_view v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(line, "expected a boolean, got '" + std::string(v) + "'");
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Dynamics: return "dynamics";
        case Mode::Steady: return "steady";
        case Mode::Sweep: return "sweep";
    }
    return "?";
}

const char* format_name(Format f) {
    return f == Format::Csv ? "csv" : "json-lines";
}

RunConfig parse_config(std::string_view text) {
    struct Assignment {
        std::string key, value;
        int line;
    };
    std::vector<Assignment> items;

    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                              : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++lineno;

        const size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;

        const size_t eq = raw.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(lineno, "malformed line (expected key = value)");
        }
        items.push_back({std::string(trim(raw.substr(0, eq))),
                         std::string(trim(raw.substr(eq + 1))), lineno});
        if (items.back().key.empty()) throw ConfigError(lineno, "empty key");
        if (items.back().value.empty()) throw ConfigError(lineno, "empty value");
    }

    RunConfig cfg;
    bool mode_seen = false;
    bool omega1_seen = false, omega2_seen = false;
    SweepSpec sweep;
    bool sweep_seen = false;
    int last_param_line = 0;

    // Preset first so later keys override it.
    for (const auto& it : items) {
        if (it.key == "preset") {
            try {
                cfg.preset_name = it.value;
                cfg.params = model::preset(it.value).params;
            } catch (const std::invalid_argument& e) {
                throw ConfigError(it.line, e.what());
            }
        }
    }
    if (cfg.preset_name == "model-section" &&
        std::none_of(items.begin(), items.end(),
                     [](const Assignment& a) { return a.key == "preset"; })) {
        cfg.params = model::preset("model-section").params;
    }

    auto& p = cfg.params;
    for (const auto& it : items) {
        const std::string& k = it.key;
        const std::string& v = it.value;
        const int ln = it.line;

        if (k == "preset") continue;
        if (k == "mode") {
            if (v == "dynamics") cfg.mode = Mode::Dynamics;
            else if (v == "steady") cfg.mode = Mode::Steady;
            else if (v == "sweep") cfg.mode = Mode::Sweep;
            else throw ConfigError(ln, "mode must be dynamics, steady or sweep");
            mode_seen = true;
        } else if (k == "t_end") {
            cfg.t_end = parse_double(v, ln);
            if (cfg.t_end < 0.0) throw ConfigError(ln, "t_end must be nonnegative");
        } else if (k == "dt") {
            cfg.dt = parse_double(v, ln);
            if (cfg.dt <= 0.0) throw ConfigError(ln, "dt must be positive");
        } else if (k == "sample_every") {
            cfg.sample_every = parse_int(v, ln);
            if (cfg.sample_every < 1) throw ConfigError(ln, "sample_every must be >= 1");
        } else if (k == "self_consistent") {
            cfg.self_consistent = parse_bool(v, ln);
        } else if (k == "out") {
            cfg.out = v;
        } else if (k == "format") {
            if (v == "csv") cfg.format = Format::Csv;
            else if (v == "json-lines") cfg.format = Format::JsonLines;
            else throw ConfigError(ln, "format must be csv or json-lines");
        } else if (k == "workers") {
            cfg.workers = parse_int(v, ln);
            if (cfg.workers < 1) throw ConfigError(ln, "workers must be >= 1");
        } else if (k == "sweep_variable") {
            if (v != "deltaT" && v != "lambda" && v != "g" && v != "gamma_sys") {
                throw ConfigError(ln, "sweep_variable must be deltaT, lambda, g or gamma_sys");
            }
            sweep.variable = v;
            sweep_seen = true;
        } else if (k == "sweep_from") {
            sweep.from = parse_double(v, ln);
            sweep_seen = true;
        } else if (k == "sweep_to") {
            sweep.to = parse_double(v, ln);
            sweep_seen = true;
        } else if (k == "sweep_points") {
            sweep.points = parse_int(v, ln);
            if (sweep.points < 1) throw ConfigError(ln, "sweep_points must be >= 1");
            sweep_seen = true;
        } else if (k == "E1") {
            if (parse_double(v, ln) != 0.0) throw ConfigError(ln, "E1 is fixed to 0");
        } else if (k == "E2") { p.E_M[1] = parse_double(v, ln); last_param_line = ln;
        } else if (k == "E3") { p.E_M[2] = parse_double(v, ln); last_param_line = ln;
        } else if (k == "E4") { p.E_M[3] = parse_double(v, ln); last_param_line = ln;
        } else if (k == "delta_T") { p.delta_T = parse_double(v, ln); last_param_line = ln;
        } else if (k == "delta_B") { p.delta_B = parse_double(v, ln); last_param_line = ln;
        } else if (k == "lambda") {
            p.lambda_MT = p.lambda_MB = parse_double(v, ln); last_param_line = ln;
        } else if (k == "lambda_MT") { p.lambda_MT = parse_double(v, ln); last_param_line = ln;
        } else if (k == "lambda_MB") { p.lambda_MB = parse_double(v, ln); last_param_line = ln;
        } else if (k == "gamma") {
            p.gamma_H = p.gamma_C = parse_double(v, ln); last_param_line = ln;
        } else if (k == "gamma_H") { p.gamma_H = parse_double(v, ln); last_param_line = ln;
        } else if (k == "gamma_C") { p.gamma_C = parse_double(v, ln); last_param_line = ln;
        } else if (k == "T_H") { p.T_H = parse_double(v, ln); last_param_line = ln;
        } else if (k == "T_C") { p.T_C = parse_double(v, ln); last_param_line = ln;
        } else if (k == "T_sys") { p.T_sys = parse_double(v, ln); last_param_line = ln;
        } else if (k == "gamma_sys") {
            p.gamma_sys12 = p.gamma_sys34 = parse_double(v, ln); last_param_line = ln;
        } else if (k == "gamma_sys12") { p.gamma_sys12 = parse_double(v, ln); last_param_line = ln;
        } else if (k == "gamma_sys34") { p.gamma_sys34 = parse_double(v, ln); last_param_line = ln;
        } else if (k == "omega1") {
            p.omega1 = parse_double(v, ln); omega1_seen = true; last_param_line = ln;
        } else if (k == "omega2") {
            p.omega2 = parse_double(v, ln); omega2_seen = true; last_param_line = ln;
        } else if (k == "g") { p.g = parse_double(v, ln); last_param_line = ln;
        } else if (k == "Gamma_ph") { p.Gamma_ph = parse_double(v, ln); last_param_line = ln;
        } else if (k == "u0") { p.u0 = parse_double(v, ln); last_param_line = ln;
        } else if (k == "B1_init") { p.B1_init = parse_double(v, ln); last_param_line = ln;
        } else if (k == "B2_init") { p.B2_init = parse_double(v, ln); last_param_line = ln;
        } else {
            throw ConfigError(ln, "unknown key '" + k + "'");
        }
    }

    if (!mode_seen) throw ConfigError(0, "mode is required (dynamics, steady or sweep)");

    // Re-derive resonant frequencies unless pinned explicitly.
    if (!omega1_seen) p.omega1 = 0.0;
    if (!omega2_seen) p.omega2 = 0.0;
    p.derive_omegas();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(last_param_line, e.what());
    }

    if (cfg.mode == Mode::Sweep) {
        if (!sweep_seen || sweep.variable.empty()) {
            throw ConfigError(0, "sweep mode requires sweep_variable, sweep_from, sweep_to, "
                                 "sweep_points");
        }
        if (sweep.points < 1) throw ConfigError(0, "sweep_points must be >= 1");
        if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to)) {
            throw ConfigError(0, "sweep range must be finite");
        }
        cfg.sweep = sweep;
    } else if (sweep_seen) {
        throw ConfigError(0, "sweep_* keys are only valid in sweep mode");
    }
    return cfg;
}

std::string render_config(const RunConfig& c) {
    std::ostringstream out;
    out << "mode = " << mode_name(c.mode) << "\n";
    out << "preset = " << c.preset_name << "\n";
    const auto& p = c.params;
    out << "E2 = " << fmt(p.E_M[1]) << "\nE3 = " << fmt(p.E_M[2]) << "\nE4 = " << fmt(p.E_M[3])
        << "\n";
    out << "delta_T = " << fmt(p.delta_T) << "\ndelta_B = " << fmt(p.delta_B) << "\n";
    out << "lambda_MT = " << fmt(p.lambda_MT) << "\nlambda_MB = " << fmt(p.lambda_MB) << "\n";
    out << "gamma_H = " << fmt(p.gamma_H) << "\ngamma_C = " << fmt(p.gamma_C) << "\n";
    out << "T_H = " << fmt(p.T_H) << "\nT_C = " << fmt(p.T_C) << "\nT_sys = " << fmt(p.T_sys)
        << "\n";
    out << "gamma_sys12 = " << fmt(p.gamma_sys12) << "\ngamma_sys34 = " << fmt(p.gamma_sys34)
        << "\n";
    out << "omega1 = " << fmt(p.omega1) << "\nomega2 = " << fmt(p.omega2) << "\n";
    out << "g = " << fmt(p.g) << "\nGamma_ph = " << fmt(p.Gamma_ph) << "\nu0 = " << fmt(p.u0)
        << "\n";
    out << "B1_init = " << fmt(p.B1_init.real()) << "\nB2_init = " << fmt(p.B2_init.real())
        << "\n";
    out << "t_end = " << fmt(c.t_end) << "\ndt = " << fmt(c.dt)
        << "\nsample_every = " << c.sample_every << "\n";
    out << "self_consistent = " << (c.self_consistent ? "true" : "false") << "\n";
    out << "format = " << format_name(c.format) << "\nworkers = " << c.workers << "\n";
    if (c.out != "-") out << "out = " << c.out << "\n";
    if (c.sweep) {
        out << "sweep_variable = " << c.sweep->variable << "\nsweep_from = " << fmt(c.sweep->from)
            << "\nsweep_to = " << fmt(c.sweep->to) << "\nsweep_points = " << c.sweep->points
            << "\n";
    }
    return out.str();
}

}  // namespace phl::cli
