// dynamics.hpp — time evolution of the coupled density matrix + phonon-amplitude
// system with a fixed-step RK4 scheme.

#pragma once

#include "phl/model.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace phl::dynamics {

using model::ModelParams;
using qspace::Complex;
using qspace::DensityMatrix;
using qspace::Matrix;

struct SimState {
    DensityMatrix rho;
    Complex B1{0.0, 0.0};
    Complex B2{0.0, 0.0};
    double t = 0.0;
};

struct Trajectory {
    struct Sample {
        double t;
        Matrix rho;
        Complex B1, B2;
    };
    std::vector<Sample> samples;
};

// Raised when a trajectory leaves the density-matrix invariants; the message
// names the failed invariant and the time.
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precompiled generator action. The constant part (H_sys diagonal, H_int
// entries, channel jump maps) is compiled once; the drive is rebuilt from the
// stage-local amplitudes on every evaluation.
class Generator {
public:
    explicit Generator(const ModelParams& p);

    // drho/dt in 1/ps; `out` must be 16x16.
    void master_rhs(const Matrix& rho, Complex B1, Complex B2, Matrix& out) const;

    // (dB1/dt, dB2/dt): free rotation, dephasing, and coherence drive.
    std::pair<Complex, Complex> amplitude_rhs(const Matrix& rho, Complex B1, Complex B2) const;

    const ModelParams& params() const { return params_; }

private:
    struct HermEntry {
        int i, j;
        double v;
    };
    struct Channel {
        // L = sum_p |row[p]><col[p]| scaled by 1 (embedded projector pattern)
        std::vector<int> row, col;
        double rate;
    };

    ModelParams params_;
    Matrix weight_;                  // elementwise: -(i/hbar)(d_i - d_j) - a_i - a_j
    std::vector<HermEntry> hint_;    // static off-diagonal H entries (i<j), value in meV
    std::vector<Channel> channels_;  // gain parts of the dissipators
    std::vector<std::pair<int, int>> drive1_, drive2_;  // embedded (upper, lower) pairs
};

// Reusable RK4 stepper over a compiled generator; the drive Hamiltonian is
// rebuilt from the stage-local amplitudes inside every stage.
class Integrator {
public:
    explicit Integrator(const ModelParams& p);
    void advance(SimState& s, double dt);
    const Generator& generator() const { return gen_; }

private:
    Generator gen_;
    Matrix k1_, k2_, k3_, k4_, tmp_;
};

SimState initial_state(const ModelParams& p);

// Convenience single-shot forms (tests, reports); simulate() compiles once.
Matrix master_rhs(const SimState& s, const ModelParams& p);
std::pair<Complex, Complex> amplitude_rhs(const SimState& s, const ModelParams& p);

// One classical RK4 update of (rho, B1, B2); post-step hermitization. dt > 0.
SimState rk4_step(const SimState& s, double dt, const ModelParams& p);

// Integrate from the ground state with B(0) from the params; every emitted
// sample is validated against the density-matrix invariants.
Trajectory simulate(const ModelParams& p, double t_end, double dt, int sample_every);

// As simulate(), but from a caller-supplied initial state.
Trajectory simulate_from(const SimState& init, const ModelParams& p, double t_end, double dt,
                         int sample_every);

}  // namespace phl::dynamics
