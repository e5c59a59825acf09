#include "phl/run.hpp"

#include "phl/analysis.hpp"
#include "phl/dynamics.hpp"
#include "phl/steady.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace phl::cli {

using analysis::CurrentsReport;
using analysis::ThermoReport;
using dynamics::SimState;
using model::ModelParams;
using qspace::Complex;
using qspace::Matrix;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> meta_lines(const RunConfig& c) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    std::vector<std::string> meta;
    meta.push_back(std::string("phl ") + mode_name(c.mode) + " run, generated " + stamp);
    meta.push_back("preset: " + c.preset_name
                   + " (middle level energies are a reconstructed completion of the "
                     "delta_T, delta_B and eps23 splittings)");
    meta.push_back("conventions: P_ij = |i><j|; currents positive in the written direction; "
                   "Qdot_C and Qdot_D released-positive; u_m = u0*2*Re(B_m)");
    meta.push_back("levels: E = (" + format_double(c.params.E_M[0]) + ", "
                   + format_double(c.params.E_M[1]) + ", " + format_double(c.params.E_M[2]) + ", "
                   + format_double(c.params.E_M[3]) + ") meV");
    return meta;
}

std::vector<std::string> state_columns() {
    return {"t_ps",
            "rhoT11", "rhoT22",
            "rhoM11", "rhoM22", "rhoM33", "rhoM44",
            "rhoB11", "rhoB22",
            "inversion",
            "B1_re", "B1_im", "B2_re", "B2_im",
            "u1_pm", "u2_pm",
            "J_L_12_per_ps", "J_R_12_per_ps", "J_D_12_per_ps", "J_D_34_per_ps",
            "J_H_14_per_ps", "J_H_43_per_ps", "J_H_32_per_ps", "J_H_21_per_ps",
            "J_C_14_per_ps", "J_C_43_per_ps", "J_C_32_per_ps", "J_C_21_per_ps",
            "J_Ph_43_per_ps", "J_Ph_21_per_ps",
            "JM_H_per_ps", "JM_C_per_ps",
            "J_uniform_per_ps", "J_spread_per_ps",
            "Qdot_H_meV_per_ps", "Qdot_C_meV_per_ps",
            "Qdot_D12_meV_per_ps", "Qdot_D34_meV_per_ps",
            "Sdot_meV_per_ps_K",
            "eta", "eta_ideal", "eta_carnot", "deltaT_threshold_K"};
}

// Per-row health gate: occupation sums and the per-level current balance
// against the master-equation diagonal.
void check_row(const SimState& s, const CurrentsReport& c, const ModelParams& p) {
    const auto occ = analysis::occupations(s.rho.matrix);
    for (const auto* v : {&occ.T, &occ.M, &occ.B}) {
        if (std::abs(v->sum() - 1.0) > 1e-9) {
            throw dynamics::InvariantError("occupation sum deviates from 1 at t = "
                                           + format_double(s.t));
        }
    }
    const Matrix rhs = dynamics::master_rhs(s, p);
    const Matrix m = qspace::partial_trace(rhs, model::kSlotM, qspace::CompositeSpace{});
    for (int i = 0; i < 4; ++i) {
        if (std::abs(c.middle_rate[i] - m(i, i).real()) > 1e-9) {
            throw dynamics::InvariantError("per-level current balance violated at t = "
                                           + format_double(s.t));
        }
    }
}

std::vector<double> state_row(const SimState& s, const ModelParams& p, bool check = true) {
    const auto occ = analysis::occupations(s.rho.matrix);
    const auto cur = analysis::flow_decomposition(s, p);
    if (check) check_row(s, cur, p);
    const ThermoReport th = analysis::thermo_report(cur, p);

    std::vector<double> row;
    row.reserve(43);
    row.push_back(s.t);
    row.push_back(occ.T(0));
    row.push_back(occ.T(1));
    for (int i = 0; i < 4; ++i) row.push_back(occ.M(i));
    row.push_back(occ.B(0));
    row.push_back(occ.B(1));
    row.push_back(analysis::total_inversion(s.rho.matrix));
    row.push_back(s.B1.real());
    row.push_back(s.B1.imag());
    row.push_back(s.B2.real());
    row.push_back(s.B2.imag());
    row.push_back(p.u0 * 2.0 * s.B1.real());
    row.push_back(p.u0 * 2.0 * s.B2.real());
    row.push_back(cur.J_L_12);
    row.push_back(cur.J_R_12);
    row.push_back(cur.J_D_12);
    row.push_back(cur.J_D_34);
    for (int i = 0; i < 4; ++i) row.push_back(cur.J_H_map[i]);
    for (int i = 0; i < 4; ++i) row.push_back(cur.J_C_map[i]);
    row.push_back(cur.J_Ph_43);
    row.push_back(cur.J_Ph_21);
    row.push_back(cur.JM_H);
    row.push_back(cur.JM_C);
    row.push_back(cur.J_uniform);
    row.push_back(cur.J_spread);
    row.push_back(th.heats.Qdot_H);
    row.push_back(th.heats.Qdot_C);
    row.push_back(th.heats.Qdot_D12);
    row.push_back(th.heats.Qdot_D34);
    row.push_back(th.Sdot);
    row.push_back(th.eff.eta_defined ? th.eff.eta : kNan);
    row.push_back(th.eff.eta_defined ? th.eff.eta_ideal : kNan);
    row.push_back(th.eff.eta_carnot);
    row.push_back(th.deltaT_threshold);
    return row;
}

Table run_dynamics(const RunConfig& cfg) {
    Table t;
    t.meta = meta_lines(cfg);
    t.columns = state_columns();
    try {
        // Stream sample-by-sample so a mid-run invariant failure still leaves
        // the rows computed so far.
        dynamics::Integrator integ(cfg.params);
        SimState s = dynamics::initial_state(cfg.params);
        const long nsteps = std::lround(cfg.t_end / cfg.dt);
        for (long k = 0;; ++k) {
            s.t = k * cfg.dt;
            if (k % cfg.sample_every == 0 || k == nsteps) {
                qspace::validate(s.rho);
                t.rows.push_back(state_row(s, cfg.params));
            }
            if (k == nsteps) break;
            integ.advance(s, cfg.dt);
        }
    } catch (const std::runtime_error& e) {
        t.failed = e.what();
    }
    return t;
}

Table run_steady(const RunConfig& cfg) {
    Table t;
    t.meta = meta_lines(cfg);
    t.columns = state_columns();
    for (int i = 1; i <= 5; ++i) t.columns.push_back("rel" + std::to_string(i) + "_resid_per_ps");
    for (int i = 1; i <= 3; ++i) {
        t.columns.push_back("resonant_chain" + std::to_string(i) + "_resid_per_ps");
    }
    t.columns.push_back("solver_residual_per_ps");

    steady::SteadyState ss;
    if (cfg.self_consistent) {
        ss = steady::self_consistent_steady(cfg.params).ss;
    } else {
        ss = steady::solve_steady(cfg.params);
    }
    SimState s{ss.rho_ss, ss.B1, ss.B2, 0.0};
    auto row = state_row(s, cfg.params);
    const auto rels = steady::verify_current_relations(ss, cfg.params);
    for (const auto& r : rels.relations) row.push_back(r.residual);
    for (const auto& r : rels.resonant_chain) row.push_back(r.residual);
    row.push_back(ss.residual);
    t.rows.push_back(std::move(row));
    return t;
}

ModelParams apply_sweep_value(const RunConfig& cfg, double x) {
    ModelParams p = cfg.params;
    const std::string& var = cfg.sweep->variable;
    if (var == "deltaT") {
        p.T_H = p.T_C + x;
    } else if (var == "lambda") {
        p.lambda_MT = p.lambda_MB = x;
    } else if (var == "g") {
        p.g = x;
    } else {
        p.gamma_sys12 = p.gamma_sys34 = x;
    }
    p.validate();
    return p;
}

Table run_sweep(const RunConfig& cfg) {
    Table t;
    t.meta = meta_lines(cfg);
    const std::string unit = cfg.sweep->variable == "deltaT" ? "_K"
                            : cfg.sweep->variable == "lambda" ? "_meV"
                                                              : "_per_ps";
    t.columns = {cfg.sweep->variable + unit,
                 "J_uniform_per_ps", "J_spread_per_ps", "inversion",
                 "Sdot_meV_per_ps_K", "eta", "eta_ideal", "eta_carnot",
                 "deltaT_threshold_K"};

    const int n = cfg.sweep->points;
    auto value_at = [&](int i) {
        if (n == 1) return cfg.sweep->from;
        return cfg.sweep->from + (cfg.sweep->to - cfg.sweep->from) * i / (n - 1);
    };

    auto point = [&](int i) -> std::vector<double> {
        const double x = value_at(i);
        const ModelParams p = apply_sweep_value(cfg, x);
        steady::SteadyState ss;
        if (cfg.self_consistent) {
            ss = steady::self_consistent_steady(p).ss;
        } else {
            ss = steady::solve_steady(p);
        }
        const auto cur = analysis::flow_decomposition({ss.rho_ss, ss.B1, ss.B2, 0.0}, p);
        const auto th = analysis::thermo_report(cur, p);
        return {x, cur.J_uniform, cur.J_spread,
                analysis::total_inversion(ss.rho_ss.matrix), th.Sdot,
                th.eff.eta_defined ? th.eff.eta : kNan,
                th.eff.eta_defined ? th.eff.eta_ideal : kNan,
                th.eff.eta_carnot, th.deltaT_threshold};
    };

    t.rows.resize(n);
    if (cfg.workers <= 1) {
        for (int i = 0; i < n; ++i) t.rows[i] = point(i);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    t.rows[i] = point(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> threads;
        const int nw = std::min(cfg.workers, n);
        threads.reserve(nw);
        for (int w = 0; w < nw; ++w) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
        if (error) std::rethrow_exception(error);
    }
    return t;
}

}  // namespace

Table run_to_table(const RunConfig& cfg) {
    switch (cfg.mode) {
        case Mode::Dynamics: return run_dynamics(cfg);
        case Mode::Steady: return run_steady(cfg);
        case Mode::Sweep: return run_sweep(cfg);
    }
    throw std::logic_error("unreachable mode");
}

int run(const RunConfig& cfg) {
    Table table;
    try {
        table = run_to_table(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }

    if (cfg.out == "-") {
        write_table(std::cout, table, cfg.format);
        if (!std::cout) return kExitIo;
    } else {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) {
            std::cerr << "cannot open output file '" << cfg.out << "'\n";
            return kExitIo;
        }
        write_table(os, table, cfg.format);
        os.flush();
        if (!os) {
            std::cerr << "write failure on '" << cfg.out << "'\n";
            return kExitIo;
        }
    }
    return table.failed.empty() ? kExitOk : kExitNumerical;
}

}  // namespace phl::cli
