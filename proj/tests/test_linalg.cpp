#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "otfs/linalg.hpp"

using namespace otfs;

namespace {

CMatrix random_matrix(std::size_t r, std::size_t c, unsigned seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> d;
    CMatrix m(r, c);
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t i = 0; i < r; ++i) m(i, j) = cplx(d(g), d(g));
    return m;
}

CVector random_vector(std::size_t n, unsigned seed) {
    return random_matrix(n, 1, seed).col(0);
}

// Gram-Schmidt on a random matrix gives a random unitary.
CMatrix random_unitary(std::size_t n, unsigned seed) {
    const CMatrix a = random_matrix(n, n, seed);
    Eigen::HouseholderQR<CMatrix> qr(a);
    return qr.householderQ() * CMatrix::Identity(n, n);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("dft_matrix small cases") {
    CHECK(dft_matrix(1)(0, 0) == cplx(1.0, 0.0));

    const CMatrix f2 = dft_matrix(2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2(0, 0) - cplx(s, 0)) < 1e-14);
    CHECK(std::abs(f2(0, 1) - cplx(s, 0)) < 1e-14);
    CHECK(std::abs(f2(1, 0) - cplx(s, 0)) < 1e-14);
    CHECK(std::abs(f2(1, 1) - cplx(-s, 0)) < 1e-14);

    // entry (1,1) of the 4-point matrix is exp(-j*pi/2)/2 = -j/2
    CHECK(std::abs(dft_matrix(4)(1, 1) - cplx(0.0, -0.5)) < 1e-14);

    CHECK_THROWS_AS(dft_matrix(0), DimensionError);
}

TEST_CASE("dft_matrix unitarity up to n=64") {
    for (std::size_t n = 1; n <= 64; ++n) {
        const CMatrix f = dft_matrix(n);
        const CMatrix g = f.adjoint() * f - CMatrix::Identity(n, n);
        CHECK(max_abs(g) <= 1e-12);
    }
}

TEST_CASE("dft_submatrix") {
    CHECK(max_abs(dft_submatrix(2, 2) - dft_matrix(2)) == 0.0);

    const CMatrix c = dft_submatrix(4, 1);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(c(i, 0) - cplx(0.5, 0.0)) < 1e-14);

    // Gram determinant of the first two columns of the unitary 4-point matrix.
    const CMatrix f = dft_submatrix(4, 2);
    const cplx det = (f.adjoint() * f).determinant();
    CHECK(std::abs(det - cplx(1.0, 0.0)) < 1e-12);

    CHECK_THROWS_AS(dft_submatrix(2, 3), DimensionError);
    CHECK_THROWS_AS(dft_submatrix(4, 0), DimensionError);
}

TEST_CASE("kron basics") {
    const CMatrix b = random_matrix(3, 2, 1);
    CHECK(max_abs(kron(CMatrix::Identity(1, 1), b) - b) == 0.0);

    CMatrix two(1, 1);
    two(0, 0) = 2.0;
    CHECK(max_abs(kron(two, CMatrix::Identity(2, 2)) - 2.0 * CMatrix::Identity(2, 2)) == 0.0);

    const CMatrix u = kron(dft_matrix(2), CMatrix::Identity(2, 2));
    CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("kron mixed product property") {
    const CMatrix a = random_matrix(2, 3, 11), c = random_matrix(3, 2, 12);
    const CMatrix b = random_matrix(3, 2, 13), d = random_matrix(2, 4, 14);
    const CMatrix lhs = kron(a, b) * kron(c, d);
    const CMatrix rhs = kron(CMatrix(a * c), CMatrix(b * d));
    CHECK(max_abs(lhs - rhs) <= 1e-10 * max_abs(rhs));
}

TEST_CASE("vec and invec") {
    CMatrix x(2, 2);
    x << cplx(1), cplx(3), cplx(2), cplx(4);  // row-major fill: [[1,3],[2,4]]
    const CVector v = vec(x);
    CHECK(v(0) == cplx(1));
    CHECK(v(1) == cplx(2));
    CHECK(v(2) == cplx(3));
    CHECK(v(3) == cplx(4));

    CHECK(max_abs(invec(v, 2) - x) == 0.0);

    const CMatrix r = random_matrix(3, 4, 2);
    CHECK(max_abs(invec(vec(r), 3) - r) == 0.0);

    CHECK_THROWS_AS(invec(random_vector(5, 3), 2), DimensionError);
}

TEST_CASE("numerical_rank") {
    CHECK(numerical_rank(CMatrix::Zero(3, 3)) == 0);
    CHECK(numerical_rank(CMatrix::Identity(4, 4)) == 4);

    const CVector u = random_vector(4, 4), w = random_vector(4, 5);
    CHECK(numerical_rank(CMatrix(u * w.adjoint())) == 1);
}

TEST_CASE("numerical_rank unitary invariance") {
    for (unsigned seed = 0; seed < 5; ++seed) {
        CMatrix a = random_matrix(4, 4, 20 + seed);
        if (seed % 2 == 0) a.col(3) = a.col(0) + a.col(1);  // force deficiency
        const std::size_t r = numerical_rank(a);
        const CMatrix q = random_unitary(4, 40 + seed);
        CHECK(numerical_rank(CMatrix(q * a)) == r);
        CHECK(numerical_rank(CMatrix(a * q)) == r);
    }
}

TEST_CASE("eig_hermitian") {
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 3;
    d(1, 1) = 1;
    d(2, 2) = 2;
    auto e = eig_hermitian(d);
    CHECK(e.eigenvalues(0) == doctest::Approx(3));
    CHECK(e.eigenvalues(1) == doctest::Approx(2));
    CHECK(e.eigenvalues(2) == doctest::Approx(1));

    auto ei = eig_hermitian(CMatrix::Identity(2, 2));
    CHECK(ei.eigenvalues(0) == doctest::Approx(1));
    CHECK(ei.eigenvalues(1) == doctest::Approx(1));

    CMatrix m(2, 2);
    m << cplx(2), cplx(1), cplx(1), cplx(2);
    auto em = eig_hermitian(m);
    CHECK(em.eigenvalues(0) == doctest::Approx(3));
    CHECK(em.eigenvalues(1) == doctest::Approx(1));

    // reconstruction
    const CMatrix rec = em.eigenvectors *
                        em.eigenvalues.cast<cplx>().asDiagonal() * em.eigenvectors.adjoint();
    CHECK(max_abs(rec - m) <= 1e-9 * max_abs(m));

    CMatrix nh(2, 2);
    nh << cplx(1), cplx(2), cplx(3), cplx(4);
    CHECK_THROWS_AS(eig_hermitian(nh), ContractViolationError);
}

TEST_CASE("eig_hermitian of gram matrices is PSD") {
    for (unsigned seed = 0; seed < 4; ++seed) {
        const CMatrix phi = random_matrix(6, 3, 60 + seed);
        const CMatrix c = phi.adjoint() * phi;
        auto e = eig_hermitian(c);
        const double smax = e.eigenvalues(0);
        for (int i = 0; i < e.eigenvalues.size(); ++i)
            CHECK(e.eigenvalues(i) >= -1e-9 * smax);
    }
}

TEST_CASE("fft_unitary matches the dense transform") {
    for (std::size_t n : {1u, 2u, 3u, 8u, 12u, 2048u}) {
        const CVector x = random_vector(n, static_cast<unsigned>(100 + n));
        const CMatrix f = dft_matrix(n);

        CVector fwd = x;
        fft_unitary(fwd, false);
        CHECK((fwd - f * x).cwiseAbs().maxCoeff() <= 1e-10);

        CVector inv = x;
        fft_unitary(inv, true);
        CHECK((inv - f.adjoint() * x).cwiseAbs().maxCoeff() <= 1e-10);

        // round trip
        fft_unitary(fwd, true);
        CHECK((fwd - x).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("ensure_finite") {
    CVector v = random_vector(3, 7);
    CHECK_NOTHROW(ensure_finite(v, "v"));
    v(1) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(ensure_finite(v, "v"), DimensionError);
}
