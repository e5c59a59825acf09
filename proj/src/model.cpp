#include "phl/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phl::model {

namespace {

const CompositeSpace& tmb_space() {
    static const CompositeSpace space;
    return space;
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(std::string("ModelParams: ") + what);
    }
}

}  // namespace

void ModelParams::derive_omegas() {
    if (omega1 == 0.0) omega1 = eps34() / kHbar;
    if (omega2 == 0.0) omega2 = eps12() / kHbar;
}

void ModelParams::validate() const {
    require(E_M[0] == 0.0, "E1 must be 0 by convention");
    require(E_M[0] <= E_M[1] && E_M[1] <= E_M[2] && E_M[2] <= E_M[3],
            "middle level energies must be nondecreasing");
    require(delta_T >= 0.0 && delta_B >= 0.0, "filter splittings must be nonnegative");
    require(lambda_MT >= 0.0 && lambda_MB >= 0.0, "couplings must be nonnegative");
    require(gamma_H >= 0.0 && gamma_C >= 0.0 && gamma_sys12 >= 0.0 && gamma_sys34 >= 0.0,
            "bath rates must be nonnegative");
    require(omega1 >= 0.0 && omega2 >= 0.0, "phonon frequencies must be nonnegative");
    require(g >= 0.0, "carrier-phonon coupling must be nonnegative");
    require(Gamma_ph >= 0.0, "phonon dephasing must be nonnegative");
    require(u0 >= 0.0, "single-phonon displacement must be nonnegative");
    if (gamma_H > 0.0) require(T_H > 0.0, "T_H must be positive while gamma_H > 0");
    if (gamma_C > 0.0) require(T_C > 0.0, "T_C must be positive while gamma_C > 0");
    if (gamma_sys12 > 0.0 || gamma_sys34 > 0.0) {
        require(T_sys > 0.0, "T_sys must be positive while an internal rate is nonzero");
    }
}

std::vector<std::string> preset_names() {
    return {"model-section", "results-phonon"};
}

Preset preset(std::string_view name) {
    ModelParams p;
    if (name == "model-section") {
        // Defaults above are the model-section completion: E=(0,5,30,35),
        // delta_T = eps14 = 35, delta_B = eps23 = 25, both phonon gaps 5 meV.
        p.derive_omegas();
        p.validate();
        return {"model-section", p};
    }
    if (name == "results-phonon") {
        p.E_M = {0.0, 2.0, 27.0, 29.0};
        p.delta_T = 29.0;
        p.delta_B = 25.0;
        p.lambda_MT = p.lambda_MB = 0.08;
        p.gamma_H = p.gamma_C = 5.0;
        p.gamma_sys12 = p.gamma_sys34 = 0.0;
        p.Gamma_ph = 1.0;
        p.derive_omegas();
        p.validate();
        return {"results-phonon", p};
    }
    std::ostringstream msg;
    msg << "unknown preset '" << name << "' (available: model-section, results-phonon)";
    throw std::invalid_argument(msg.str());
}

double bath_rate(int k, double delta, double T, double gamma) {
    if (k != 1 && k != 2) {
        throw std::invalid_argument("bath_rate: k must be 1 or 2");
    }
    if (delta < 0.0) {
        throw std::invalid_argument("bath_rate: delta must be nonnegative");
    }
    if (gamma < 0.0) {
        throw std::invalid_argument("bath_rate: gamma must be nonnegative");
    }
    if (gamma == 0.0) {
        return 0.0;
    }
    if (T <= 0.0) {
        throw std::invalid_argument("bath_rate: temperature must be positive while gamma > 0");
    }
    const double sign = (k == 1) ? 1.0 : -1.0;
    return gamma / (1.0 + std::exp(sign * delta / (kBoltzmann * T)));
}

Operator build_system_hamiltonian(const ModelParams& p) {
    const CompositeSpace& space = tmb_space();
    Matrix h = Matrix::Zero(space.total_dim, space.total_dim);
    for (int t = 1; t <= 2; ++t) {
        for (int m = 1; m <= 4; ++m) {
            for (int b = 1; b <= 2; ++b) {
                h(basis_index(t, m, b), basis_index(t, m, b)) =
                    p.delta_T * (t == 2) + p.E_M[m - 1] + p.delta_B * (b == 2);
            }
        }
    }
    return {space, std::move(h)};
}

Matrix interaction_term(Side side, std::pair<int, int> pair, const ModelParams& p) {
    const CompositeSpace& space = tmb_space();
    const auto [lo, hi] = pair;
    const Matrix lowering = qspace::projector(lo, hi, 4);
    const double lambda = (side == Side::Top) ? p.lambda_MT : p.lambda_MB;
    const int slot = (side == Side::Top) ? kSlotT : kSlotB;
    Matrix half = lambda * (qspace::embed(qspace::projector(2, 1, 2), slot, space)
                            * qspace::embed(lowering, kSlotM, space));
    return half + half.adjoint().eval();
}

Operator build_interaction_hamiltonian(const ModelParams& p) {
    const CompositeSpace& space = tmb_space();
    Matrix h = Matrix::Zero(space.total_dim, space.total_dim);
    for (const auto& pair : kCouplingPairs) {
        h += interaction_term(Side::Top, pair, p);
        h += interaction_term(Side::Bottom, pair, p);
    }
    return {space, std::move(h)};
}

Operator build_drive_hamiltonian(Complex B1, Complex B2, const ModelParams& p) {
    const CompositeSpace& space = tmb_space();
    Matrix hm = kHbar * p.g
        * (std::conj(B1) * qspace::projector(3, 4, 4) + B1 * qspace::projector(4, 3, 4)
           + std::conj(B2) * qspace::projector(1, 2, 4) + B2 * qspace::projector(2, 1, 4));
    return {space, qspace::embed(hm, kSlotM, space)};
}

std::vector<LindbladChannel> build_channels(const ModelParams& p) {
    const CompositeSpace& space = tmb_space();
    std::vector<LindbladChannel> out;
    out.reserve(8);

    auto add = [&](int slot, int up_to, int down_from, double delta, double T, double gamma,
                   BathTag tag) {
        const int n = space.dims[slot];
        out.push_back({{space, qspace::embed(qspace::projector(up_to, down_from, n), slot, space)},
                       bath_rate(1, delta, T, gamma), tag, Direction::Up});
        out.push_back({{space, qspace::embed(qspace::projector(down_from, up_to, n), slot, space)},
                       bath_rate(2, delta, T, gamma), tag, Direction::Down});
    };

    add(kSlotT, 2, 1, p.delta_T, p.T_H, p.gamma_H, BathTag::Hot);
    add(kSlotB, 2, 1, p.delta_B, p.T_C, p.gamma_C, BathTag::Cold);
    add(kSlotM, 2, 1, p.eps12(), p.T_sys, p.gamma_sys12, BathTag::Sys12);
    add(kSlotM, 4, 3, p.eps34(), p.T_sys, p.gamma_sys34, BathTag::Sys34);
    return out;
}

}  // namespace phl::model
