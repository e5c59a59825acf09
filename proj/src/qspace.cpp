#include "phl/qspace.hpp"

#include <Eigen/Eigenvalues>

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace phl::qspace {

CompositeSpace::CompositeSpace(std::vector<int> d) : dims(std::move(d)) {
    if (dims.empty()) {
        throw std::invalid_argument("CompositeSpace: dims must be nonempty");
    }
    total_dim = 1;
    for (int n : dims) {
        if (n < 2) {
            throw std::invalid_argument("CompositeSpace: every subsystem dimension must be >= 2");
        }
        total_dim *= n;
    }
}

Matrix projector(int i, int j, int n) {
    if (n < 1) {
        throw std::invalid_argument("projector: dimension must be positive");
    }
    if (i < 1 || i > n || j < 1 || j > n) {
        std::ostringstream msg;
        msg << "projector: index (" << i << "," << j << ") out of range for dimension " << n;
        throw std::out_of_range(msg.str());
    }
    Matrix m = Matrix::Zero(n, n);
    m(i - 1, j - 1) = 1.0;
    return m;
}

Matrix embed(const Matrix& op, int slot, const CompositeSpace& space) {
    const int k = static_cast<int>(space.dims.size());
    if (slot < 0 || slot >= k) {
        throw std::out_of_range("embed: slot out of range");
    }
    if (op.rows() != space.dims[slot] || op.cols() != space.dims[slot]) {
        std::ostringstream msg;
        msg << "embed: operator is " << op.rows() << "x" << op.cols()
            << " but slot " << slot << " has dimension " << space.dims[slot];
        throw std::invalid_argument(msg.str());
    }
    Matrix out = Matrix::Identity(1, 1);
    for (int s = 0; s < k; ++s) {
        const Matrix& factor = (s == slot)
            ? op
            : static_cast<const Matrix&>(Matrix::Identity(space.dims[s], space.dims[s]));
        Matrix next(out.rows() * factor.rows(), out.cols() * factor.cols());
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(r * factor.rows(), c * factor.cols(), factor.rows(), factor.cols()) =
                    out(r, c) * factor;
            }
        }
        out = std::move(next);
    }
    return out;
}

Matrix partial_trace(const Matrix& rho, int keep, const CompositeSpace& space) {
    const int k = static_cast<int>(space.dims.size());
    if (keep < 0 || keep >= k) {
        throw std::out_of_range("partial_trace: keep slot out of range");
    }
    if (rho.rows() != space.total_dim || rho.cols() != space.total_dim) {
        throw std::invalid_argument("partial_trace: matrix does not match space dimension");
    }
    std::vector<int> stride(k, 1);
    for (int s = k - 2; s >= 0; --s) {
        stride[s] = stride[s + 1] * space.dims[s + 1];
    }
    const int dk = space.dims[keep];
    const int rest = space.total_dim / dk;
    Matrix out = Matrix::Zero(dk, dk);
    // Enumerate the traced-out multi-index once, then sweep the kept indices.
    for (int r = 0; r < rest; ++r) {
        int base = 0;
        int rem = r;
        for (int s = k - 1; s >= 0; --s) {
            if (s == keep) continue;
            const int digit = rem % space.dims[s];
            rem /= space.dims[s];
            base += digit * stride[s];
        }
        for (int a = 0; a < dk; ++a) {
            for (int b = 0; b < dk; ++b) {
                out(a, b) += rho(base + a * stride[keep], base + b * stride[keep]);
            }
        }
    }
    return out;
}

Matrix lindblad_apply(const Matrix& rho, const Matrix& L, double rate) {
    if (rate < 0.0) {
        throw std::invalid_argument("lindblad_apply: rate must be nonnegative");
    }
    if (L.rows() != rho.rows() || L.cols() != rho.cols()) {
        throw std::invalid_argument("lindblad_apply: dimension mismatch");
    }
    if (rate == 0.0) {
        return Matrix::Zero(rho.rows(), rho.cols());
    }
    const Matrix LdL = L.adjoint() * L;
    return rate * (L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL));
}

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double smallest_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void validate(const DensityMatrix& rho) {
    if (rho.matrix.rows() != rho.space.total_dim || rho.matrix.cols() != rho.space.total_dim) {
        throw std::runtime_error("density matrix: dimension does not match its space");
    }
    const double herm = hermiticity_defect(rho.matrix);
    if (herm > kHermTol) {
        std::ostringstream msg;
        msg << "density matrix: hermiticity defect " << herm << " exceeds " << kHermTol;
        throw std::runtime_error(msg.str());
    }
    const double tr = std::abs(rho.matrix.trace() - Complex(1.0, 0.0));
    if (tr > kTraceTol) {
        std::ostringstream msg;
        msg << "density matrix: trace deviates from 1 by " << tr;
        throw std::runtime_error(msg.str());
    }
    const double lam = smallest_eigenvalue(rho.matrix);
    if (lam < -kPsdTol) {
        std::ostringstream msg;
        msg << "density matrix: smallest eigenvalue " << lam << " below -" << kPsdTol;
        throw std::runtime_error(msg.str());
    }
}

}  // namespace phl::qspace
