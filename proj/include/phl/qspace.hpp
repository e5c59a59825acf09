// qspace.hpp — tensor-product Hilbert space bookkeeping and elementary operator algebra
// for the 2x4x2 filter / gain-medium / filter composite.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace phl::qspace {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Density-matrix health tolerances.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-8;

// Ordered tensor factors; default (T, M, B) = (2, 4, 2).
struct CompositeSpace {
    std::vector<int> dims;
    int total_dim = 0;

    CompositeSpace() : CompositeSpace(std::vector<int>{2, 4, 2}) {}
    explicit CompositeSpace(std::vector<int> d);

    bool operator==(const CompositeSpace& other) const = default;
};

struct Operator {
    CompositeSpace space;
    Matrix matrix;
};

struct DensityMatrix {
    CompositeSpace space;
    Matrix matrix;
};

// P_ij = |i><j| on an n-dimensional subsystem; indices are 1-based.
Matrix projector(int i, int j, int n);

// identity x ... x op x ... x identity with op at the given slot.
Matrix embed(const Matrix& op, int slot, const CompositeSpace& space);

// Reduced density matrix of the subsystem at `keep`; traces out everything else.
Matrix partial_trace(const Matrix& rho, int keep, const CompositeSpace& space);

// rate * (L rho L^dag - 1/2 {L^dag L, rho}). Throws on rate < 0.
Matrix lindblad_apply(const Matrix& rho, const Matrix& L, double rate);

// max elementwise |m - m^dag|
double hermiticity_defect(const Matrix& m);

// smallest eigenvalue of the hermitized matrix
double smallest_eigenvalue(const Matrix& m);

// Throws std::runtime_error naming the violated invariant (hermiticity, trace, positivity).
void validate(const DensityMatrix& rho);

}  // namespace phl::qspace
