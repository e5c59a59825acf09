// analysis.hpp — reduced observables, the particle-current decomposition, and
// the thermodynamic audit quantities (heat flows, entropy production, bounds).

#pragma once

#include "phl/dynamics.hpp"
#include "phl/model.hpp"

#include <array>
#include <string>

namespace phl::analysis {

using dynamics::SimState;
using model::ModelParams;
using qspace::Complex;
using qspace::Matrix;

struct Occupations {
    Eigen::VectorXd T, M, B;
};

// Diagonal occupations of each reduced subsystem state.
Occupations occupations(const Matrix& rho);

// (rho^M_22 - rho^M_11) + (rho^M_44 - rho^M_33), in [-2, 2].
double total_inversion(const Matrix& rho);

enum class WhichBath { L, R };

// Gamma_1 rho_11 - Gamma_2 rho_22 of the selected filter; positive = the bath
// excites its filter.
double bath_current(const Matrix& rho, WhichBath which, const ModelParams& p);

enum class WhichPair { P12, P34 };

// Internal-dissipator current J_{D,1->2} or J_{D,3->4}.
double dissipation_current(const Matrix& rho, WhichPair pair, const ModelParams& p);

// Transition key order used by the per-transition maps: {1->4, 4->3, 3->2, 2->1}.
inline constexpr std::array<const char*, 4> kTransitionNames{"1->4", "4->3", "3->2", "2->1"};

struct CurrentsReport {
    double J_L_12 = 0.0, J_R_12 = 0.0;      // bath currents
    double J_D_12 = 0.0, J_D_34 = 0.0;      // internal-dissipation currents
    std::array<double, 4> J_H_map{};        // hot-side exchange per transition
    std::array<double, 4> J_C_map{};        // cold-side exchange per transition
    double J_Ph_43 = 0.0, J_Ph_21 = 0.0;    // phonon-drive currents
    double JM_H = 0.0, JM_C = 0.0;          // filter-exchange totals (d rho^{T/B}_22 parts)
    std::array<double, 4> ring{};           // total transition currents {1->4,4->3,3->2,2->1}
    double J_uniform = 0.0;                 // mean of ring
    double J_spread = 0.0;                  // max - min of ring
    std::array<double, 4> F_H{}, F_C{};     // raw downward flow per coupling pair
    std::array<double, 4> middle_rate{};    // reconstructed d rho^M_ii/dt from the ring
};

// Exact per-generator-term attribution of the middle-level population flows.
// Every entry is linear in the generator, so middle_rate reproduces the
// master-equation diagonal identically.
CurrentsReport flow_decomposition(const SimState& state, const ModelParams& p);

struct HeatFlows {
    double Qdot_H = 0.0;    // absorbed from the hot bath, meV/ps
    double Qdot_C = 0.0;    // released to the cold bath, meV/ps
    double Qdot_D12 = 0.0;  // released by the 1<->2 internal dissipator
    double Qdot_D34 = 0.0;  // released by the 3<->4 internal dissipator
};

HeatFlows heat_flows(const CurrentsReport& report, const ModelParams& p);

// -Qdot_H/T_H + Qdot_C/T_C + (Qdot_D12 + Qdot_D34)/T_sys, meV/(ps K).
double entropy_production(const HeatFlows& heats, const ModelParams& p);

// (delta_T/delta_B - 1) * T_C, in K. Throws when delta_B = 0.
double threshold_delta_T(const ModelParams& p);

struct Efficiencies {
    double eta_ideal = 0.0;
    double eta = 0.0;
    double eta_carnot = 0.0;
    bool eta_defined = false;  // false when Qdot_H == 0 (undefined marker)
};

Efficiencies efficiencies(const HeatFlows& heats, const ModelParams& p);

struct ThermoReport {
    HeatFlows heats;
    double Sdot = 0.0;
    Efficiencies eff;
    double deltaT_threshold = 0.0;
};

ThermoReport thermo_report(const CurrentsReport& report, const ModelParams& p);

}  // namespace phl::analysis
