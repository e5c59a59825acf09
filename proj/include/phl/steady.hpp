// steady.hpp — column-stacked Liouvillian superoperator, nonequilibrium steady
// states, the self-consistent lasing fixed point, and the current-relation audit.

#pragma once

#include "phl/analysis.hpp"
#include "phl/model.hpp"

#include <array>
#include <string>

namespace phl::steady {

using model::ModelParams;
using qspace::Complex;
using qspace::DensityMatrix;
using qspace::Matrix;

struct Liouvillian {
    Matrix matrix;  // 256x256, 1/ps, column-stacking vectorization
    Complex B1{0.0, 0.0}, B2{0.0, 0.0};  // amplitudes frozen into the drive term
};

// vec(drho/dt) = L vec(rho) with vec the column-stacking map.
Liouvillian build_liouvillian(const ModelParams& p, Complex B1 = {0.0, 0.0},
                              Complex B2 = {0.0, 0.0});

struct SteadyState {
    DensityMatrix rho_ss;
    double residual = 0.0;          // max |L vec(rho_ss)| element, 1/ps
    Complex B1{0.0, 0.0}, B2{0.0, 0.0};
    bool degenerate = false;        // null space dimension > 1 (tie-break applied)
    int null_dimension = 1;
    double uniform_current = 0.0;   // mean ring current J, 1/ps
    double current_spread = 0.0;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trace-normalized hermitian null vector of L; degeneracy resolved by
// propagating the ground state and projecting onto the null space.
SteadyState steady_state(const Liouvillian& L, const ModelParams& p);

// build_liouvillian + steady_state.
SteadyState solve_steady(const ModelParams& p, Complex B1 = {0.0, 0.0},
                         Complex B2 = {0.0, 0.0});

struct SelfConsistentResult {
    SteadyState ss;
    int iterations = 0;
    double last_delta = 0.0;  // final fixed-point update size
    bool converged = false;
};

// Damped fixed-point iteration B_m <- -i g c_m / (i omega_m + Gamma) around the
// frozen-amplitude steady solve; seeds default to the params' initial amplitudes.
SelfConsistentResult self_consistent_steady(const ModelParams& p, double damping = 0.5,
                                            int max_iterations = 400, double tol = 1e-13);

struct Relation {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    double residual = 0.0;
};

struct RelationsReport {
    std::array<Relation, 5> relations;       // the steady-state relations
    std::array<Relation, 3> resonant_chain;  // informational: resonant-approximation chain
    double tolerance = 1e-8;
    bool pass = false;                       // all five relations within tolerance
    double J_uniform = 0.0;
    double J_spread = 0.0;
};

// Evaluates the five steady-state current relations (and, informationally, the
// resonant-approximation chain) on a solved steady state. Never throws on failure.
RelationsReport verify_current_relations(const SteadyState& ss, const ModelParams& p);

}  // namespace phl::steady
