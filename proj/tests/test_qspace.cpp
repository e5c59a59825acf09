#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phl/qspace.hpp"
#include "test_support.hpp"

#include <random>

using namespace phl;
using qspace::Complex;
using qspace::CompositeSpace;
using qspace::Matrix;
using test::max_abs_diff;

TEST_CASE("composite space validates dimensions") {
    CompositeSpace def;
    CHECK(def.dims == std::vector<int>{2, 4, 2});
    CHECK(def.total_dim == 16);
    CHECK_THROWS_AS(CompositeSpace({2, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(CompositeSpace(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("projector is |i><j|") {
    const Matrix p11 = qspace::projector(1, 1, 2);
    CHECK(p11(0, 0) == Complex(1.0, 0.0));
    CHECK(p11(0, 1) == Complex(0.0, 0.0));
    CHECK(p11(1, 0) == Complex(0.0, 0.0));
    CHECK(p11(1, 1) == Complex(0.0, 0.0));

    // adjoint symmetry
    CHECK(max_abs_diff(qspace::projector(2, 1, 2).adjoint(), qspace::projector(1, 2, 2)) == 0.0);

    // |3><4| maps e4 to e3
    Eigen::VectorXcd e4 = Eigen::VectorXcd::Zero(4);
    e4(3) = 1.0;
    Eigen::VectorXcd e3 = Eigen::VectorXcd::Zero(4);
    e3(2) = 1.0;
    CHECK((qspace::projector(3, 4, 4) * e4 - e3).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(qspace::projector(0, 1, 2), std::out_of_range);
    CHECK_THROWS_AS(qspace::projector(1, 3, 2), std::out_of_range);
}

TEST_CASE("embed places factors with identities around them") {
    const CompositeSpace space;
    CHECK(max_abs_diff(qspace::embed(Matrix::Identity(2, 2), 0, space),
                       Matrix::Identity(16, 16)) == 0.0);

    // trace multiplicity 2*1*2
    const Matrix e = qspace::embed(qspace::projector(2, 2, 4), 1, space);
    CHECK(e.trace().real() == doctest::Approx(4.0));

    // disjoint slots commute
    std::mt19937_64 rng(7);
    for (int it = 0; it < 20; ++it) {
        const Matrix a = test::random_matrix(rng, 2);
        const Matrix b = test::random_matrix(rng, 2);
        const Matrix ea = qspace::embed(a, 0, space);
        const Matrix eb = qspace::embed(b, 2, space);
        CHECK(max_abs_diff(ea * eb, eb * ea) < 1e-14);
    }

    CHECK_THROWS_AS(qspace::embed(Matrix::Identity(3, 3), 0, space), std::invalid_argument);
    CHECK_THROWS_AS(qspace::embed(Matrix::Identity(2, 2), 3, space), std::out_of_range);
}

TEST_CASE("embed respects the mixed-product rule") {
    const CompositeSpace space;
    std::mt19937_64 rng(11);
    for (int slot = 0; slot < 3; ++slot) {
        const int n = space.dims[slot];
        const Matrix a = test::random_matrix(rng, n);
        const Matrix b = test::random_matrix(rng, n);
        CHECK(max_abs_diff(qspace::embed(a * b, slot, space),
                           qspace::embed(a, slot, space) * qspace::embed(b, slot, space))
              < 1e-13);
    }
}

TEST_CASE("partial trace of product states returns the factors") {
    const CompositeSpace space;
    const Matrix pt = qspace::projector(1, 1, 2);
    const Matrix pm = qspace::projector(1, 1, 4);
    const Matrix pb = qspace::projector(1, 1, 2);
    Matrix rho = qspace::embed(pt, 0, space) * qspace::embed(pm, 1, space)
                 * qspace::embed(pb, 2, space);
    CHECK(max_abs_diff(qspace::partial_trace(rho, 1, space), pm) == 0.0);

    const Matrix mixed = Matrix::Identity(16, 16) / 16.0;
    CHECK(max_abs_diff(qspace::partial_trace(mixed, 0, space), Matrix::Identity(2, 2) / 2.0)
          < 1e-15);
}

TEST_CASE("partial trace: random states against direct index summation") {
    const CompositeSpace space;
    std::mt19937_64 rng(13);
    for (int it = 0; it < 100; ++it) {
        const Matrix rho = test::random_density(rng, 16);
        for (int keep = 0; keep < 3; ++keep) {
            const Matrix red = qspace::partial_trace(rho, keep, space);
            CHECK(std::abs(red.trace() - Complex(1.0, 0.0)) < 1e-10);
            CHECK(qspace::hermiticity_defect(red) < 1e-12);
            CHECK(qspace::smallest_eigenvalue(red) > -1e-12);

            // direct summation oracle over explicit (t, m, b) digits
            Matrix direct = Matrix::Zero(space.dims[keep], space.dims[keep]);
            for (int t = 0; t < 2; ++t) {
                for (int m = 0; m < 4; ++m) {
                    for (int b = 0; b < 2; ++b) {
                        for (int t2 = 0; t2 < 2; ++t2) {
                            for (int m2 = 0; m2 < 4; ++m2) {
                                for (int b2 = 0; b2 < 2; ++b2) {
                                    const int i = t * 8 + m * 2 + b;
                                    const int j = t2 * 8 + m2 * 2 + b2;
                                    const int di[3] = {t, m, b};
                                    const int dj[3] = {t2, m2, b2};
                                    bool same = true;
                                    for (int s = 0; s < 3; ++s) {
                                        if (s != keep && di[s] != dj[s]) same = false;
                                    }
                                    if (same) direct(di[keep], dj[keep]) += rho(i, j);
                                }
                            }
                        }
                    }
                }
            }
            CHECK(max_abs_diff(red, direct) < 1e-14);
        }
    }
}

TEST_CASE("partial trace composed over all subsystems gives the full trace") {
    const CompositeSpace space;
    std::mt19937_64 rng(17);
    const Matrix rho = test::random_density(rng, 16);
    const Matrix m = qspace::partial_trace(rho, 1, space);
    CHECK(std::abs(m.trace() - rho.trace()) < 1e-12);
}

TEST_CASE("lindblad_apply basics") {
    const int n = 4;
    std::mt19937_64 rng(19);
    const Matrix rho = test::random_density(rng, n);

    // rate 0 is the zero map
    CHECK(qspace::lindblad_apply(rho, test::random_matrix(rng, n), 0.0).cwiseAbs().maxCoeff()
          == 0.0);

    // unitary L: rate (U rho U^dag - rho), traceless
    Matrix u = Matrix::Identity(n, n);
    u(0, 0) = Complex(0.0, 1.0);
    u(1, 1) = Complex(0.0, -1.0);
    const Matrix d = qspace::lindblad_apply(rho, u, 2.0);
    CHECK(max_abs_diff(d, 2.0 * (u * rho * u.adjoint() - rho)) < 1e-14);
    CHECK(std::abs(d.trace()) < 1e-14);

    // pure excitation channel on |1><1|
    const Matrix ground = qspace::projector(1, 1, 2);
    const Matrix up = qspace::projector(2, 1, 2);
    const Matrix out = qspace::lindblad_apply(ground, up, 0.7);
    CHECK(max_abs_diff(out, 0.7 * (qspace::projector(2, 2, 2) - qspace::projector(1, 1, 2)))
          < 1e-15);

    CHECK_THROWS_AS(qspace::lindblad_apply(rho, u, -1.0), std::invalid_argument);
}

TEST_CASE("lindblad_apply output is traceless and hermitian on random inputs") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 100; ++it) {
        const Matrix rho = test::random_density(rng, 16);
        const Matrix L = test::random_matrix(rng, 16);
        const double rate = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
        const Matrix d = qspace::lindblad_apply(rho, L, rate);
        CHECK(std::abs(d.trace()) < 1e-12);
        CHECK(qspace::hermiticity_defect(d) < 1e-12);
    }
}

TEST_CASE("density-matrix validation catches each invariant") {
    const CompositeSpace space;
    std::mt19937_64 rng(29);
    qspace::DensityMatrix rho{space, test::random_density(rng, 16)};
    CHECK_NOTHROW(qspace::validate(rho));

    qspace::DensityMatrix bad_trace = rho;
    bad_trace.matrix *= 1.01;
    CHECK_THROWS_WITH_AS(qspace::validate(bad_trace),
                         doctest::Contains("trace"), std::runtime_error);

    qspace::DensityMatrix bad_herm = rho;
    bad_herm.matrix(0, 1) += Complex(0.0, 1e-6);
    CHECK_THROWS_WITH_AS(qspace::validate(bad_herm),
                         doctest::Contains("hermiticity"), std::runtime_error);

    // shift weight between two diagonal entries: trace kept, one eigenvalue negative
    qspace::DensityMatrix bad_psd = rho;
    const double w = bad_psd.matrix(0, 0).real() + 1e-7;
    bad_psd.matrix(0, 0) -= w;
    bad_psd.matrix(1, 1) += w;
    bad_psd.matrix.row(0).tail(15).setZero();
    bad_psd.matrix.col(0).tail(15).setZero();
    CHECK_THROWS_WITH_AS(qspace::validate(bad_psd),
                         doctest::Contains("eigenvalue"), std::runtime_error);
}
