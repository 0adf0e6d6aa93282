#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specdiff/errors.hpp"
#include "specdiff/operator_models.hpp"
#include "specdiff/presets.hpp"
#include "specdiff/projections.hpp"
#include "specdiff/quadrature.hpp"
#include "specdiff/scattering.hpp"

using namespace specdiff;
using std::numbers::pi;

namespace {

OperatorPair scalar_pair(double mu0, double coupling) {
    CMatrix h0(1, 1);
    h0(0, 0) = mu0;
    CMatrix v0(1, 1);
    v0(0, 0) = coupling;
    return build_finite_pair(h0, CMatrix::Identity(1, 1), v0);
}

}  // namespace

TEST_CASE("scalar Lorentzian: peak height 1/(pi eps) and the Poisson profile") {
    const auto pair = scalar_pair(0.0, 0.0);
    for (double eps : {0.1, 0.01, 0.001}) {
        const auto s = smoothed_density(pair, 0.0, eps);
        CHECK(s.F0prime(0, 0).real() == doctest::Approx(1.0 / (pi * eps)).epsilon(1e-13));
    }
    const auto off = smoothed_density(pair, 0.3, 0.1);
    CHECK(off.F0prime(0, 0).real() == doctest::Approx(0.1 / (pi * (0.09 + 0.01))).epsilon(1e-13));
}

TEST_CASE("smoothed densities integrate to G G* over the real line") {
    const auto pair = random_finite_pair(8, 2, 5, {0.0});
    const double eps = 0.1;
    // lambda = tan(phi) maps the line onto (-pi/2, pi/2) and keeps Lorentzians smooth.
    QuadratureParams p{-pi / 2.0, pi / 2.0};
    const auto rule = make_quadrature(QuadratureKind::BoundedLegendre, 600, p);
    CMatrix total = CMatrix::Zero(2, 2);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double phi = rule.nodes[i];
        const double c = std::cos(phi);
        total += rule.weights[i] / (c * c) * smoothed_density(pair, std::tan(phi), eps).F0prime;
    }
    const CMatrix ggstar = pair.G * pair.G.adjoint();
    CHECK((total - ggstar).norm() < 1e-8 * ggstar.norm());
}

TEST_CASE("smoothed spectral shift matches the arctangent closed form") {
    const auto pair = scalar_pair(0.0, 1.0);  // H = [1]
    const auto spectra = decompose(pair);
    for (double lambda : {-0.5, 0.5, 2.0}) {
        const double eps = 0.05;
        const double expected = (std::atan(lambda / eps) - std::atan((lambda - 1.0) / eps)) / pi;
        CHECK(smoothed_spectral_shift(spectra, lambda, eps) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("first resolvent identity, exact unitarity and the finite-eps A identity") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto pair = random_finite_pair(14, 3, seed, {0.2});
        const auto spectra = decompose(pair);
        for (double eps : {1e-1, 1e-2}) {
            const auto b = scattering_bundle(pair, spectra, 0.2, eps);
            CHECK(b.resolvent_residual < 1e-9);
            CHECK(b.a_identity_residual < 1e-9);
            CHECK(b.unitarity_defect < 1e-10);
            CHECK(b.a_from_s == doctest::Approx(b.a_from_a).epsilon(1e-8));
            CHECK(b.a_from_s <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("direct and spectral sandwich routes agree") {
    const auto pair = random_finite_pair(10, 2, 9, {0.0});
    const auto spectra = decompose(pair);
    const cplx z(0.1, 0.05);
    const auto direct = resolvent_sandwich(pair, z);
    const auto spectral = resolvent_sandwich(pair, spectra, z);
    CHECK((direct.T - spectral.T).norm() < 1e-12 * direct.T.norm());
    CHECK((direct.T0 - spectral.T0).norm() < 1e-12 * direct.T0.norm());
    CHECK(direct.imag_psd_defect < 1e-12);
    CHECK_THROWS_AS(resolvent_sandwich(pair, cplx(0.1, 0.0)), InvalidInput);
}

TEST_CASE("phase predictions from eigenphases") {
    const auto p = phase_predictions(std::vector<double>{pi, pi / 3.0});
    CHECK(p.a == doctest::Approx(1.0));
    REQUIRE(p.band_edges.size() == 2);
    CHECK(p.band_edges[0] == doctest::Approx(1.0));
    CHECK(p.band_edges[1] == doctest::Approx(0.5));
    CHECK(phase_predictions(std::vector<double>{}).a == 0.0);
}

TEST_CASE("Birman-Krein: integer count and the smoothed determinant identity") {
    const auto pair = random_finite_pair(12, 3, 2, {0.25});
    const auto spectra = decompose(pair);
    LadderOptions options;
    options.kappa = 0.0;
    const auto ladder = scattering_ladder(pair, spectra, 0.25, {0.1, 0.03, 0.01}, options);
    const auto bk = birman_krein_check(spectra, 0.25, ladder);
    const auto d = projection_difference(spectra, 0.25);
    CHECK(bk.xi == -static_cast<int>(std::lround(d.trace)));
    CHECK(std::isfinite(bk.xi_smoothed));
    CHECK(ladder.eps_used.size() == 3);
    CHECK(ladder.members.size() == 3);
}

TEST_CASE("ladder admissibility drops members finer than the level spacing") {
    const auto pair = build_krein(100, 40.0);
    const auto spectra = decompose(pair);
    LadderOptions options;
    options.kappa = 1.0;
    const auto ladder = scattering_ladder(pair, spectra, 0.5, {0.2, 0.1, 0.05, 1e-4}, options);
    CHECK(ladder.level_spacing > 1e-4);
    CHECK_FALSE(ladder.members.back().admissible);
    CHECK(ladder.eps_used.size() == 3);
    CHECK_THROWS_AS(scattering_ladder(pair, spectra, 0.5, {0.1, 0.2}, options), InvalidInput);
}

TEST_CASE("Krein model at lambda = 1/2: the retained phase approaches pi") {
    const auto pair = build_krein(400, 40.0);
    const auto spectra = decompose(pair);
    LadderOptions options;
    options.scattering.retention_floor = 2e-2;
    const auto ladder = scattering_ladder(pair, spectra, 0.5, {0.2, 0.1, 0.05}, options);
    REQUIRE_FALSE(ladder.phases.empty());
    CHECK(std::abs(std::exp(cplx(0.0, ladder.phases[0])) + 1.0) < 0.1);
    CHECK(ladder.a == doctest::Approx(1.0).epsilon(0.05));
}
