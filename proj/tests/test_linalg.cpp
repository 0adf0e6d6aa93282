#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "specdiff/errors.hpp"
#include "specdiff/linalg.hpp"
#include "specdiff/presets.hpp"

using namespace specdiff;

namespace {

CMatrix random_matrix(int rows, int cols, std::uint64_t seed) {
    SeededRng rng(seed);
    CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) m(i, j) = cplx(rng.normal(), rng.normal());
    }
    return m;
}

CMatrix random_hermitian(int n, std::uint64_t seed) {
    const CMatrix m = random_matrix(n, n, seed);
    return 0.5 * (m + m.adjoint());
}

// Closed-form eigenvalues of a real symmetric 3x3 matrix (trigonometric cubic roots).
std::array<double, 3> cubic_eigenvalues(const RMatrix& a) {
    const double q = a.trace() / 3.0;
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                      (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    const RMatrix b = (a - q * RMatrix::Identity(3, 3)) / p;
    const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    std::array<double, 3> e = {e1, 3.0 * q - e1 - e3, e3};
    std::sort(e.begin(), e.end());
    return e;
}

// Kronecker-product solve of A X - X B = C; independent of any Schur machinery.
CMatrix kronecker_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = b.rows();
    CMatrix k = CMatrix::Zero(m * n, m * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        k.block(j * m, j * m, m, m) += a;
        for (Eigen::Index l = 0; l < n; ++l) {
            k.block(l * m, j * m, m, m) -= b(j, l) * CMatrix::Identity(m, m);
        }
    }
    const CVector x = k.fullPivLu().solve(Eigen::Map<const CVector>(c.data(), m * n));
    return Eigen::Map<const CMatrix>(x.data(), m, n);
}

}  // namespace

TEST_CASE("herm_eig matches closed-form cubic roots") {
    RMatrix a(3, 3);
    a << 2.0, -1.0, 0.5, -1.0, 3.0, 0.25, 0.5, 0.25, -1.0;
    const auto expected = cubic_eigenvalues(a);
    const auto d = herm_eig(a.cast<cplx>());
    for (int i = 0; i < 3; ++i) CHECK(d.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("herm_eig residual and orthonormality on a complex Hermitian matrix") {
    const CMatrix h = random_hermitian(40, 3);
    const auto d = herm_eig(h);
    const CMatrix residual = h * d.eigenvectors - d.eigenvectors * d.eigenvalues.asDiagonal();
    CHECK(residual.norm() / h.norm() < kEigResidualTol);
    CHECK((d.eigenvectors.adjoint() * d.eigenvectors - CMatrix::Identity(40, 40)).norm() < 1e-12);
    for (Eigen::Index i = 1; i < d.dim(); ++i) CHECK(d.eigenvalues(i - 1) <= d.eigenvalues(i));
    CHECK(herm_op_norm(h) == doctest::Approx(d.eigenvalues.cwiseAbs().maxCoeff()).epsilon(1e-13));
}

TEST_CASE("herm_eig rejects non-Hermitian and non-finite input") {
    CMatrix m = random_matrix(4, 4, 5);
    CHECK_THROWS_AS(herm_eig(m), NotHermitian);
    CMatrix h = random_hermitian(4, 5);
    h(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(herm_eig(h), InvalidInput);
    CHECK_THROWS_AS(herm_eig(CMatrix()), InvalidInput);
}

TEST_CASE("singular values square to the eigenvalues of M*M") {
    const CMatrix m = random_matrix(7, 5, 11);
    const auto s = svd(m);
    const auto d = herm_eig(m.adjoint() * m);
    for (int i = 0; i < 5; ++i) {
        CHECK(s.singular_values(i) * s.singular_values(i) ==
              doctest::Approx(d.eigenvalues(4 - i)).epsilon(1e-12));
    }
    CHECK((s.U * s.singular_values.asDiagonal() * s.V.adjoint() - m).norm() < 1e-12 * m.norm());
    CHECK(op_norm(m) == doctest::Approx(s.singular_values(0)).epsilon(1e-14));
}

TEST_CASE("expm_apply follows closed forms and the group law") {
    // exp(tM) for M = [[0, 1], [1, 0]] is cosh(t) I + sinh(t) M.
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    const double t = 0.7;
    const CMatrix expected = std::cosh(t) * CMatrix::Identity(2, 2) + std::sinh(t) * m;
    CHECK((expm_apply(m, t, CMatrix::Identity(2, 2)) - expected).norm() < 1e-14);

    const CMatrix h = random_hermitian(12, 17) * 0.2;
    const CMatrix x = random_matrix(12, 3, 18);
    const CMatrix lhs = expm_apply(h, 0.3, expm_apply(h, 0.9, x));
    const CMatrix rhs = expm_apply(h, 1.2, x);
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("expm_apply guards against overflow on growing modes") {
    CMatrix m(1, 1);
    m(0, 0) = 10.0;
    CHECK_THROWS_AS(expm_apply(m, 100.0, CMatrix::Identity(1, 1)), OverflowGuard);
    // The same exponent on a decaying mode is harmless.
    m(0, 0) = -10.0;
    CHECK(std::abs(expm_apply(m, 100.0, CMatrix::Identity(1, 1))(0, 0)) < 1e-300);
}

TEST_CASE("sylvester_solve agrees with the Kronecker formulation") {
    SUBCASE("Hermitian coefficients with separated spectra") {
        CMatrix a = random_hermitian(6, 21);
        CMatrix b = random_hermitian(4, 22);
        a += 10.0 * CMatrix::Identity(6, 6);
        const CMatrix c = random_matrix(6, 4, 23);
        const CMatrix x = sylvester_solve(a, b, c);
        CHECK((a * x - x * b - c).norm() < 1e-12 * c.norm());
        CHECK((x - kronecker_sylvester(a, b, c)).norm() < 1e-11 * x.norm());
    }
    SUBCASE("general complex coefficients") {
        CMatrix a = random_matrix(5, 5, 31);
        CMatrix b = random_matrix(3, 3, 32);
        a += 8.0 * CMatrix::Identity(5, 5);
        const CMatrix c = random_matrix(5, 3, 33);
        const CMatrix x = sylvester_solve(a, b, c);
        CHECK((a * x - x * b - c).norm() < 1e-11 * c.norm());
        CHECK((x - kronecker_sylvester(a, b, c)).norm() < 1e-10 * x.norm());
    }
    SUBCASE("shared eigenvalue is rejected") {
        const CMatrix a = CMatrix::Identity(2, 2);
        const CMatrix b = CMatrix::Identity(3, 3);
        CHECK_THROWS_AS(sylvester_solve(a, b, CMatrix::Ones(2, 3)), SpectralCollision);
    }
}

TEST_CASE("psd_sqrt squares back and clips roundoff negatives") {
    const CMatrix m = random_matrix(6, 4, 41);
    const CMatrix p = m * m.adjoint();  // rank 4: two zero eigenvalues
    const CMatrix r = psd_sqrt(p);
    CHECK((r * r - p).norm() < 1e-12 * p.norm());
    CHECK(hermitian_asymmetry(r) < 1e-14);

    CMatrix negative = CMatrix::Identity(2, 2);
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(psd_sqrt(negative), InvalidInput);
}

TEST_CASE("imaginary part of a resolvent is positive in the upper half plane") {
    const CMatrix h = random_hermitian(8, 51);
    const CMatrix resolvent = (h - cplx(0.1, 0.05) * CMatrix::Identity(8, 8)).inverse();
    CHECK(herm_eig(imag_part(resolvent)).eigenvalues.minCoeff() > 0.0);
    CHECK((hermitian_part(resolvent) + cplx(0, 1) * imag_part(resolvent) - resolvent).norm() < 1e-13);
}
