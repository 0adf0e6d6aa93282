#include <doctest.h>

#include <cmath>

#include "specdiff/errors.hpp"
#include "specdiff/operator_models.hpp"
#include "specdiff/presets.hpp"
#include "specdiff/projections.hpp"

using namespace specdiff;

namespace {

// H0 = diag(-1, 1) and H its rotation by theta, with G = I and V0 = H - H0.
OperatorPair rotated_pair(double theta) {
    CMatrix h0 = CMatrix::Zero(2, 2);
    h0(0, 0) = -1.0;
    h0(1, 1) = 1.0;
    CMatrix r(2, 2);
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const CMatrix h = r * h0 * r.adjoint();
    return build_finite_pair(h0, CMatrix::Identity(2, 2), h - h0);
}

}  // namespace

TEST_CASE("two-dimensional rotation: D has eigenvalues +-sin(theta)") {
    const double theta = 0.4;
    const auto pair = rotated_pair(theta);
    const auto d = projection_difference(pair, 0.0);
    REQUIRE(d.spectrum.size() == 2);
    CHECK(d.spectrum[0] == doctest::Approx(-std::sin(theta)).epsilon(1e-14));
    CHECK(d.spectrum[1] == doctest::Approx(std::sin(theta)).epsilon(1e-14));
    CHECK(d.count_shift == 0);
    CHECK(std::abs(d.trace) < 1e-15);
    CHECK(d.pairing_defect < 1e-14);
    CHECK(d.idempotency_defect < 1e-14);

    // Corner operator E0(R+) E(R-) E0(R+) is the scalar |<e2, R e1>|^2 = sin^2(theta).
    const auto corner = corner_spectrum(pair, 0.0, +1);
    REQUIRE(corner.eigenvalues.size() == 1);
    CHECK(corner.eigenvalues[0] == doctest::Approx(std::sin(theta) * std::sin(theta)).epsilon(1e-14));
    CHECK(dsq_block_check(pair, 0.0) < 1e-15);
}

TEST_CASE("a rank-one push below the probe shows up as a -1 eigenvalue and -trace D = count shift") {
    CMatrix h0 = CMatrix::Zero(3, 3);
    h0.diagonal() << -0.5, 0.5, 1.5;
    CMatrix g = CMatrix::Zero(1, 3);
    g(0, 1) = 1.0;
    CMatrix v0 = CMatrix::Identity(1, 1) * -1.0;  // moves the level at 0.5 down to -0.5
    const auto pair = build_finite_pair(h0, g, v0);
    const auto d = projection_difference(pair, 0.0);
    CHECK(d.count_shift == -1);
    CHECK(d.trace == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.dim_plus == 1);
    CHECK(d.max_eig == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random pairs: projections, D^2 block identity and +- pairing") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto pair = random_finite_pair(16, 3, seed, {0.1});
        const auto spectra = decompose(pair);
        const auto pp = projection_pair(spectra, 0.1);
        CHECK(idempotency_defect(pp.E0) < 1e-13);
        CHECK(idempotency_defect(pp.E) < 1e-13);
        CHECK(dsq_block_check(spectra, 0.1) < 1e-12);
        const auto d = projection_difference(spectra, 0.1);
        CHECK(d.pairing_defect < 1e-6);
        CHECK(d.pairing_count_mismatch == 0);
        CHECK(d.count_shift == -static_cast<int>(std::lround(d.trace)));
        CHECK(d.min_eig >= -1.0 - 1e-12);
        CHECK(d.max_eig <= 1.0 + 1e-12);
    }
}

TEST_CASE("pairing defect of hand-built spectra") {
    int mismatch = 0;
    CHECK(pairing_defect({-0.5, -0.2, 0.2, 0.5}, 1e-6, &mismatch) == doctest::Approx(0.0));
    CHECK(mismatch == 0);
    CHECK(pairing_defect({-0.5, 0.2, 0.5}, 1e-6, &mismatch) == doctest::Approx(0.3));
    CHECK(mismatch != 0);
    // Eigenvalues at +-1 and 0 are excluded from pairing.
    CHECK(pairing_defect({-1.0, -0.3, 0.0, 0.3}, 1e-6, &mismatch) == doctest::Approx(0.0));
}

TEST_CASE("probes on an eigenvalue are rejected") {
    CMatrix h0 = CMatrix::Zero(2, 2);
    h0.diagonal() << 0.0, 1.0;
    const auto pair = build_finite_pair(h0, CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
    try {
        projection_difference(pair, 1.0);
        FAIL("expected SpectralCollision");
    } catch (const SpectralCollision& e) {
        CHECK(e.nearest() == doctest::Approx(1.0));
        CHECK(e.gap() < 1e-8);
    }
}

TEST_CASE("zero perturbation gives D = 0") {
    const auto base = random_finite_pair(8, 2, 3, {0.0});
    const auto pair = build_finite_pair(base.H0, base.G, CMatrix::Zero(2, 2));
    const auto d = projection_difference(pair, 0.0);
    CHECK(std::abs(d.min_eig) < 1e-14);
    CHECK(std::abs(d.max_eig) < 1e-14);
    CHECK(d.count_shift == 0);
}
