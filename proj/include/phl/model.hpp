// model.hpp — machine parameters, the two named presets, Hamiltonians and the
// Lindblad channel set of the heat-driven two-phonon nanomachine.

#pragma once

#include "phl/qspace.hpp"

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phl::model {

using qspace::Complex;
using qspace::CompositeSpace;
using qspace::Matrix;
using qspace::Operator;

inline constexpr double kHbar = 0.6582119569;       // meV ps
inline constexpr double kBoltzmann = 0.08617333;    // meV/K

// Slot order of the composite space.
inline constexpr int kSlotT = 0;
inline constexpr int kSlotM = 1;
inline constexpr int kSlotB = 2;

// Composite basis index of |t> x |m> x |b|, levels 1-based.
inline int basis_index(int t, int m, int b) {
    return (t - 1) * 8 + (m - 1) * 2 + (b - 1);
}

struct ModelParams {
    std::array<double, 4> E_M{0.0, 5.0, 30.0, 35.0};  // middle level energies, meV (E1 = 0)
    double delta_T = 35.0;      // top filter splitting, meV
    double delta_B = 25.0;      // bottom filter splitting, meV
    double lambda_MT = 0.03;    // meV
    double lambda_MB = 0.03;    // meV
    double gamma_H = 3.0;       // 1/ps
    double gamma_C = 3.0;       // 1/ps
    double T_H = 400.0;         // K
    double T_C = 100.0;         // K
    double gamma_sys12 = 0.0;   // 1/ps
    double gamma_sys34 = 0.0;   // 1/ps
    double T_sys = 300.0;       // K
    double omega1 = 0.0;        // 1/ps; 0 means "derive from (E4-E3)/hbar"
    double omega2 = 0.0;        // 1/ps; 0 means "derive from (E2-E1)/hbar"
    double g = 2.25;            // carrier-phonon coupling, 1/ps
    double Gamma_ph = 2.0;      // phonon dephasing, 1/ps
    double u0 = 20.0;           // single-phonon displacement, pm
    Complex B1_init{1e-3, 0.0};
    Complex B2_init{1e-3, 0.0};

    double eps12() const { return E_M[1] - E_M[0]; }
    double eps23() const { return E_M[2] - E_M[1]; }
    double eps34() const { return E_M[3] - E_M[2]; }
    double eps14() const { return E_M[3] - E_M[0]; }

    // Fill omega1/omega2 from the phonon gaps where left at 0.
    void derive_omegas();

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;

    bool operator==(const ModelParams& other) const = default;
};

struct Preset {
    std::string name;
    ModelParams params;
};

std::vector<std::string> preset_names();
Preset preset(std::string_view name);  // throws std::invalid_argument on unknown name

enum class BathTag { Hot, Cold, Sys12, Sys34 };
enum class Direction { Up, Down };

struct LindbladChannel {
    Operator op;
    double rate = 0.0;
    BathTag tag = BathTag::Hot;
    Direction dir = Direction::Up;
};

// Gamma_k(T) = gamma / (1 + exp((-1)^(k-1) delta / kB T)), k in {1, 2}.
// Gamma_1 + Gamma_2 = gamma; Gamma_1/Gamma_2 = exp(-delta/kB T).
double bath_rate(int k, double delta, double T, double gamma);

// Diagonal 16x16: energy of |t,m,b> is delta_T [t=2] + E_m + delta_B [b=2].
Operator build_system_hamiltonian(const ModelParams& p);

// lambda_MT (h^TM x 1_B) + lambda_MB (1_T x h^MB); every term exchanges one
// excitation between a filter and the middle system.
Operator build_interaction_hamiltonian(const ModelParams& p);

// Semiclassical carrier drive: hbar g (B1* P34 + B1 P43 + B2* P12 + B2 P21) on M.
Operator build_drive_hamiltonian(Complex B1, Complex B2, const ModelParams& p);

// The 8 channels: hot pair on T, cold pair on B, internal 1<->2 and 3<->4 pairs on M.
// Zero-rate channels are retained with rate 0.
std::vector<LindbladChannel> build_channels(const ModelParams& p);

// The four middle lowering operators of the filter couplings: (lower, upper) level pairs.
inline constexpr std::array<std::pair<int, int>, 4> kCouplingPairs{
    {{1, 2}, {1, 4}, {2, 3}, {2, 4}}};

enum class Side { Top, Bottom };

// One hermitian coupling term: lambda * (filter raise x P_lower,upper + h.c.), embedded.
Matrix interaction_term(Side side, std::pair<int, int> pair, const ModelParams& p);

}  // namespace phl::model
