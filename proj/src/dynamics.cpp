#include "phl/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace phl::dynamics {

using model::basis_index;
using model::kHbar;

namespace {

constexpr int kDim = 16;
const Complex kMinusIOverHbar{0.0, -1.0 / kHbar};

}  // namespace

Generator::Generator(const ModelParams& p) : params_(p) {
    p.validate();

    const Matrix hsys = model::build_system_hamiltonian(p).matrix;
    const auto channels = model::build_channels(p);

    // Decay vector a_i = 1/2 sum_k rate_k (L_k^dag L_k)_ii; the jump operators are
    // embedded projectors, so L^dag L is a diagonal indicator pattern.
    Eigen::VectorXd decay = Eigen::VectorXd::Zero(kDim);
    for (const auto& ch : channels) {
        Channel c;
        c.rate = ch.rate;
        for (int r = 0; r < kDim; ++r) {
            for (int s = 0; s < kDim; ++s) {
                if (ch.op.matrix(r, s) != 0.0) {
                    c.row.push_back(r);
                    c.col.push_back(s);
                    decay(s) += 0.5 * ch.rate;
                }
            }
        }
        if (c.rate > 0.0) {
            channels_.push_back(std::move(c));
        }
    }

    weight_.resize(kDim, kDim);
    for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j < kDim; ++j) {
            weight_(i, j) = kMinusIOverHbar * (hsys(i, i).real() - hsys(j, j).real())
                            - Complex(decay(i) + decay(j), 0.0);
        }
    }

    const Matrix hint = model::build_interaction_hamiltonian(p).matrix;
    for (int i = 0; i < kDim; ++i) {
        for (int j = i + 1; j < kDim; ++j) {
            if (hint(i, j) != 0.0) {
                hint_.push_back({i, j, hint(i, j).real()});
            }
        }
    }

    if (p.g > 0.0) {
        for (int t = 1; t <= 2; ++t) {
            for (int b = 1; b <= 2; ++b) {
                drive1_.emplace_back(basis_index(t, 4, b), basis_index(t, 3, b));
                drive2_.emplace_back(basis_index(t, 2, b), basis_index(t, 1, b));
            }
        }
    }
}

void Generator::master_rhs(const Matrix& rho, Complex B1, Complex B2, Matrix& out) const {
    out = weight_.cwiseProduct(rho);

    for (const auto& e : hint_) {
        const Complex c = kMinusIOverHbar * e.v;
        out.row(e.i) += c * rho.row(e.j);
        out.row(e.j) += c * rho.row(e.i);
        out.col(e.i) -= c * rho.col(e.j);
        out.col(e.j) -= c * rho.col(e.i);
    }

    // Drive H += c |up><lo| + conj(c) |lo><up| with c = hbar g B_m.
    auto add_drive = [&](const std::vector<std::pair<int, int>>& pairs, Complex B) {
        if (B == Complex(0.0, 0.0)) return;
        const Complex c = kMinusIOverHbar * (kHbar * params_.g) * B;
        const Complex cc = kMinusIOverHbar * (kHbar * params_.g) * std::conj(B);
        for (const auto& [up, lo] : pairs) {
            out.row(up) += c * rho.row(lo);
            out.row(lo) += cc * rho.row(up);
            out.col(lo) -= c * rho.col(up);
            out.col(up) -= cc * rho.col(lo);
        }
    };
    add_drive(drive1_, B1);
    add_drive(drive2_, B2);

    for (const auto& ch : channels_) {
        const size_t n = ch.row.size();
        for (size_t a = 0; a < n; ++a) {
            for (size_t b = 0; b < n; ++b) {
                out(ch.row[a], ch.row[b]) += ch.rate * rho(ch.col[a], ch.col[b]);
            }
        }
    }
}

std::pair<Complex, Complex> Generator::amplitude_rhs(const Matrix& rho, Complex B1,
                                                     Complex B2) const {
    Complex c1{0.0, 0.0}, c2{0.0, 0.0};
    for (int t = 1; t <= 2; ++t) {
        for (int b = 1; b <= 2; ++b) {
            c1 += rho(basis_index(t, 4, b), basis_index(t, 3, b));  // rho^M_43
            c2 += rho(basis_index(t, 2, b), basis_index(t, 1, b));  // rho^M_21
        }
    }
    const Complex i{0.0, 1.0};
    const auto& p = params_;
    return {-(i * p.omega1 + p.Gamma_ph) * B1 - i * p.g * c1,
            -(i * p.omega2 + p.Gamma_ph) * B2 - i * p.g * c2};
}

SimState initial_state(const ModelParams& p) {
    Matrix rho = Matrix::Zero(kDim, kDim);
    rho(basis_index(1, 1, 1), basis_index(1, 1, 1)) = 1.0;  // ground state |1,1,1>
    return {{qspace::CompositeSpace{}, std::move(rho)}, p.B1_init, p.B2_init, 0.0};
}

Matrix master_rhs(const SimState& s, const ModelParams& p) {
    Generator gen(p);
    Matrix out(kDim, kDim);
    gen.master_rhs(s.rho.matrix, s.B1, s.B2, out);
    return out;
}

std::pair<Complex, Complex> amplitude_rhs(const SimState& s, const ModelParams& p) {
    return Generator(p).amplitude_rhs(s.rho.matrix, s.B1, s.B2);
}

Integrator::Integrator(const ModelParams& p)
    : gen_(p), k1_(kDim, kDim), k2_(kDim, kDim), k3_(kDim, kDim), k4_(kDim, kDim),
      tmp_(kDim, kDim) {}

void Integrator::advance(SimState& s, double dt) {
    Matrix& rho = s.rho.matrix;
    Complex& B1 = s.B1;
    Complex& B2 = s.B2;

    gen_.master_rhs(rho, B1, B2, k1_);
    auto [a1, b1] = gen_.amplitude_rhs(rho, B1, B2);

    tmp_ = rho + (0.5 * dt) * k1_;
    gen_.master_rhs(tmp_, B1 + 0.5 * dt * a1, B2 + 0.5 * dt * b1, k2_);
    auto [a2, b2] = gen_.amplitude_rhs(tmp_, B1 + 0.5 * dt * a1, B2 + 0.5 * dt * b1);

    tmp_ = rho + (0.5 * dt) * k2_;
    gen_.master_rhs(tmp_, B1 + 0.5 * dt * a2, B2 + 0.5 * dt * b2, k3_);
    auto [a3, b3] = gen_.amplitude_rhs(tmp_, B1 + 0.5 * dt * a2, B2 + 0.5 * dt * b2);

    tmp_ = rho + dt * k3_;
    gen_.master_rhs(tmp_, B1 + dt * a3, B2 + dt * b3, k4_);
    auto [a4, b4] = gen_.amplitude_rhs(tmp_, B1 + dt * a3, B2 + dt * b3);

    rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    B1 += (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    B2 += (dt / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    rho = 0.5 * (rho + rho.adjoint().eval());
    s.t += dt;
}

namespace {

void check_sample(const Matrix& rho, double t) {
    const double tr = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (tr > qspace::kTraceTol) {
        std::ostringstream msg;
        msg << "trace deviates from 1 by " << tr << " at t = " << t << " ps";
        throw InvariantError(msg.str());
    }
    const double herm = qspace::hermiticity_defect(rho);
    if (herm > qspace::kHermTol) {
        std::ostringstream msg;
        msg << "hermiticity defect " << herm << " at t = " << t << " ps";
        throw InvariantError(msg.str());
    }
    const double lam = qspace::smallest_eigenvalue(rho);
    if (lam < -qspace::kPsdTol) {
        std::ostringstream msg;
        msg << "smallest eigenvalue " << lam << " at t = " << t << " ps";
        throw InvariantError(msg.str());
    }
}

}  // namespace

SimState rk4_step(const SimState& s, double dt, const ModelParams& p) {
    if (dt <= 0.0) {
        throw std::invalid_argument("rk4_step: dt must be positive");
    }
    Integrator integ(p);
    SimState out = s;
    integ.advance(out, dt);
    return out;
}

Trajectory simulate_from(const SimState& init, const ModelParams& p, double t_end, double dt,
                         int sample_every) {
    if (t_end < 0.0) {
        throw std::invalid_argument("simulate: t_end must be nonnegative");
    }
    if (dt <= 0.0) {
        throw std::invalid_argument("simulate: dt must be positive");
    }
    if (sample_every < 1) {
        throw std::invalid_argument("simulate: sample_every must be >= 1");
    }

    Integrator integ(p);
    SimState s = init;

    const long nsteps = std::lround(t_end / dt);
    Trajectory traj;
    traj.samples.reserve(static_cast<size_t>(nsteps / sample_every) + 2);

    for (long k = 0;; ++k) {
        s.t = init.t + k * dt;
        if (k % sample_every == 0 || k == nsteps) {
            check_sample(s.rho.matrix, s.t);
            traj.samples.push_back({s.t, s.rho.matrix, s.B1, s.B2});
        }
        if (k == nsteps) break;
        integ.advance(s, dt);
    }
    return traj;
}

Trajectory simulate(const ModelParams& p, double t_end, double dt, int sample_every) {
    return simulate_from(initial_state(p), p, t_end, dt, sample_every);
}

}  // namespace phl::dynamics
