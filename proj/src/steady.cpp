#include "phl/steady.hpp"

#include "phl/dynamics.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace phl::steady {

using model::kHbar;

namespace {

constexpr int kDim = 16;
constexpr int kSuper = kDim * kDim;

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

Eigen::VectorXcd vec(const Matrix& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Matrix unvec(const Eigen::VectorXcd& v) {
    return Eigen::Map<const Matrix>(v.data(), kDim, kDim);
}

// Least-squares solve of L x = 0 with the trace pinned to 1.
Matrix trace_constrained_solve(const Matrix& L) {
    Matrix A(kSuper + 1, kSuper);
    A.topRows(kSuper) = L;
    Eigen::RowVectorXcd trace_row = Eigen::RowVectorXcd::Zero(kSuper);
    for (int i = 0; i < kDim; ++i) {
        trace_row(i * kDim + i) = 1.0;
    }
    A.bottomRows(1) = trace_row;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(kSuper + 1);
    b(kSuper) = 1.0;
    const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
    Matrix rho = unvec(x);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-12) {
        throw SolverError("steady_state: trace-constrained solve returned a traceless matrix");
    }
    return rho / tr;
}

double max_abs(const Eigen::VectorXcd& v) {
    return v.cwiseAbs().maxCoeff();
}

}  // namespace

Liouvillian build_liouvillian(const ModelParams& p, Complex B1, Complex B2) {
    p.validate();
    const Matrix id = Matrix::Identity(kDim, kDim);
    Matrix h = model::build_system_hamiltonian(p).matrix
               + model::build_interaction_hamiltonian(p).matrix
               + model::build_drive_hamiltonian(B1, B2, p).matrix;

    const Complex mi_over_hbar{0.0, -1.0 / kHbar};
    Matrix L = mi_over_hbar * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& ch : model::build_channels(p)) {
        if (ch.rate == 0.0) continue;
        const Matrix& Lk = ch.op.matrix;
        const Matrix LdL = Lk.adjoint() * Lk;
        L += ch.rate
             * (kron(Lk.conjugate(), Lk)
                - 0.5 * (kron(id, LdL) + kron(LdL.transpose(), id)));
    }
    return {std::move(L), B1, B2};
}

SteadyState steady_state(const Liouvillian& L, const ModelParams& p) {
    Eigen::BDCSVD<Matrix> svd(L.matrix, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double scale = sv(0);
    const double null_tol = scale * 1e-10;

    int null_dim = 0;
    for (int i = kSuper - 1; i >= 0 && sv(i) < null_tol; --i) {
        ++null_dim;
    }
    if (null_dim == 0) {
        std::ostringstream msg;
        msg << "steady_state: no null vector within tolerance; smallest singular value "
            << sv(kSuper - 1) << " (1/ps), largest " << scale;
        throw SolverError(msg.str());
    }

    Eigen::VectorXcd v;
    if (null_dim == 1) {
        v = svd.matrixV().col(kSuper - 1);
    } else {
        // Tie-break: propagate the ground state past the fast transients, then
        // project onto the null space to select the physically reached branch.
        double min_rate = std::numeric_limits<double>::infinity();
        for (const auto& ch : model::build_channels(p)) {
            if (ch.rate > 0.0) min_rate = std::min(min_rate, ch.rate);
        }
        const double t_relax = std::isfinite(min_rate) ? 10.0 / min_rate : 10.0;
        auto traj = dynamics::simulate_from(
            {dynamics::initial_state(p).rho, L.B1, L.B2, 0.0}, p, t_relax,
            std::min(0.001, t_relax / 100.0), 1 << 20);
        const Eigen::VectorXcd reached = vec(traj.samples.back().rho);
        const auto null_basis = svd.matrixV().rightCols(null_dim);
        v = null_basis * (null_basis.adjoint() * reached);
    }

    Matrix rho = unvec(v);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-10) {
        throw SolverError("steady_state: null vector has (near-)zero trace");
    }
    rho /= tr;

    double residual = max_abs(L.matrix * vec(rho));
    // Least-squares polish; with a degenerate null space it would pick an
    // arbitrary branch, so it only runs when the steady state is unique.
    if (residual > 1e-11 && null_dim == 1) {
        const Matrix polished = trace_constrained_solve(L.matrix);
        const double polished_residual = max_abs(L.matrix * vec(polished));
        if (polished_residual < residual) {
            rho = polished;
            residual = polished_residual;
        }
    }
    if (residual > 1e-10) {
        std::ostringstream msg;
        msg << "steady_state: residual " << residual << " exceeds 1e-10; smallest singular value "
            << sv(kSuper - 1);
        throw SolverError(msg.str());
    }

    SteadyState out{{qspace::CompositeSpace{}, std::move(rho)}, residual, L.B1, L.B2,
                    null_dim > 1, null_dim, 0.0, 0.0};
    qspace::validate(out.rho_ss);
    const auto currents =
        analysis::flow_decomposition({out.rho_ss, out.B1, out.B2, 0.0}, p);
    out.uniform_current = currents.J_uniform;
    out.current_spread = currents.J_spread;
    return out;
}

SteadyState solve_steady(const ModelParams& p, Complex B1, Complex B2) {
    return steady_state(build_liouvillian(p, B1, B2), p);
}

SelfConsistentResult self_consistent_steady(const ModelParams& p, double damping,
                                            int max_iterations, double tol) {
    Complex B1 = p.B1_init, B2 = p.B2_init;
    const Complex i{0.0, 1.0};
    SelfConsistentResult res;

    for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
        const auto L = build_liouvillian(p, B1, B2);
        const Matrix rho = trace_constrained_solve(L.matrix);
        const Matrix m = qspace::partial_trace(rho, model::kSlotM, qspace::CompositeSpace{});
        const Complex next1 = -i * p.g * m(3, 2) / (i * p.omega1 + p.Gamma_ph);
        const Complex next2 = -i * p.g * m(1, 0) / (i * p.omega2 + p.Gamma_ph);
        res.last_delta = std::max(std::abs(next1 - B1), std::abs(next2 - B2));
        B1 += damping * (next1 - B1);
        B2 += damping * (next2 - B2);
        if (res.last_delta < tol) {
            res.converged = true;
            break;
        }
    }
    res.ss = solve_steady(p, B1, B2);
    return res;
}

RelationsReport verify_current_relations(const SteadyState& ss, const ModelParams& p) {
    const auto c = analysis::flow_decomposition({ss.rho_ss, ss.B1, ss.B2, 0.0}, p);
    RelationsReport rep;
    rep.J_uniform = c.J_uniform;
    rep.J_spread = c.J_spread;

    auto rel = [](std::string name, double lhs, double rhs) {
        return Relation{std::move(name), lhs, rhs, std::abs(lhs - rhs)};
    };
    rep.relations[0] = rel("J_L_12 = -JM_H", c.J_L_12, -c.JM_H);
    rep.relations[1] = rel("J_R_12 = -JM_C", c.J_R_12, -c.JM_C);
    rep.relations[2] = rel("J_32 = J_21", c.ring[2], c.ring[3]);
    rep.relations[3] = rel("J_43 = J_32", c.ring[1], c.ring[2]);
    rep.relations[4] = rel("J_14 = J_43", c.ring[0], c.ring[1]);

    const double j_d21 = -c.J_D_12;
    const double j_d43 = -c.J_D_34;
    rep.resonant_chain[0] =
        rel("J_Ph_21 + J_D_21 = J_C_32", c.J_Ph_21 + j_d21, c.J_C_map[2]);
    rep.resonant_chain[1] =
        rel("J_C_32 = J_Ph_43 + J_D_43", c.J_C_map[2], c.J_Ph_43 + j_d43);
    rep.resonant_chain[2] =
        rel("J_Ph_43 + J_D_43 = J_H_14", c.J_Ph_43 + j_d43, c.J_H_map[0]);

    rep.pass = std::all_of(rep.relations.begin(), rep.relations.end(),
                           [&](const Relation& r) { return r.residual <= rep.tolerance; });
    return rep;
}

}  // namespace phl::steady
