#include <doctest.h>

#include <cmath>

#include "specdiff/errors.hpp"
#include "specdiff/operator_models.hpp"
#include "specdiff/presets.hpp"
#include "specdiff/projections.hpp"
#include "specdiff/zops.hpp"

using namespace specdiff;

namespace {

OperatorPair scalar_pair(double mu0, double coupling) {
    CMatrix h0 = CMatrix::Constant(1, 1, mu0);
    return build_finite_pair(h0, CMatrix::Identity(1, 1), CMatrix::Constant(1, 1, coupling));
}

// H0 = diag of n levels spread evenly on [-half, half], one channel with unit density.
OperatorPair flat_pair(int n, double half) {
    CMatrix h0 = CMatrix::Zero(n, n);
    CMatrix g(1, n);
    for (int i = 0; i < n; ++i) {
        h0(i, i) = -half + 2.0 * half * (i + 0.5) / n;
        g(0, i) = std::sqrt(2.0 * half / n);
    }
    return build_finite_pair(h0, g, CMatrix::Zero(1, 1));
}

double probe_gap(const PairSpectra& s, double lambda) {
    return std::min(spectral_gap(s.free, lambda), spectral_gap(s.perturbed, lambda));
}

}  // namespace

TEST_CASE("scalar case: Z0 Z0* = int exp(-2t) dt = 1/2") {
    const auto pair = scalar_pair(1.0, -2.0);  // H = -1
    const auto z = build_z_ops(pair, default_trule(1.0, 1.0));
    CHECK((z.Z0 * z.Z0.adjoint())(0, 0).real() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK((z.Z * z.Z.adjoint())(0, 0).real() == doctest::Approx(0.5).epsilon(1e-6));
    const auto [n0, n1] = z_norms(z);
    CHECK(n0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(n1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("G = 0 gives Z0 = Z = 0") {
    CMatrix h0 = CMatrix::Zero(4, 4);
    h0.diagonal() << -1.0, -0.5, 0.5, 1.0;
    const auto pair = build_finite_pair(h0, CMatrix::Zero(2, 4), CMatrix::Identity(2, 2));
    const auto z = build_z_ops(pair, default_trule(0.5, 1.0, 40));
    CHECK(z.Z0.norm() == 0.0);
    CHECK(z.Z.norm() == 0.0);
}

TEST_CASE("Sylvester oracle reproduces E(R-)E0(R+) at machine precision") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto pair = random_finite_pair(12, 3, seed, {0.0});
        const auto r = product_check(pair, 0.0);
        CHECK(r.residual_oracle <= 1e-8 * 12);
        CHECK(r.sylvester_residual < 1e-12);
        CHECK(r.direct_computed);
        CHECK(r.residual_direct < 1e-4);
        CHECK(r.representation_residual < 1e-4);
    }
    const auto krein = build_krein(200, 40.0);
    const auto oracle = product_oracle(krein, 0.5);
    CHECK(oracle.residual_oracle <= 1e-8 * 200);
    CHECK_FALSE(oracle.direct_computed);
}

TEST_CASE("quadrature residual of the Z representation falls as the t-rule is refined") {
    const auto pair = random_finite_pair(10, 2, 3, {0.0});
    const auto spectra = decompose(pair);
    const double gap = probe_gap(spectra, 0.0);
    const double radius = std::max(spectra.free.eigenvalues.cwiseAbs().maxCoeff(),
                                   spectra.perturbed.eigenvalues.cwiseAbs().maxCoeff());
    const auto coarse = product_check(pair, default_trule(gap, radius, 30), 0.0);
    const auto fine = product_check(pair, default_trule(gap, radius, 240), 0.0);
    CHECK(fine.residual_direct < coarse.residual_direct);
    CHECK(fine.residual_direct < 1e-6);
}

TEST_CASE("Gamma on a t-rule and the decay exponent fit") {
    const auto rule = default_trule(0.5, 1.0, 12);
    const CMatrix g = gamma_on_rule(rule);
    const double s = rule.nodes[2] + rule.nodes[5];
    CHECK(g(2, 5).real() == doctest::Approx(std::sqrt(rule.weights[2] * rule.weights[5]) * (1.0 - std::exp(-s)) / s));

    std::vector<double> sigma;
    for (int k = 1; k <= 30; ++k) sigma.push_back(std::pow(k, -2.0));
    CHECK(decay_exponent(sigma) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK_THROWS_AS(default_trule(2.0, 1.0), InvalidInput);
}

TEST_CASE("Z0*Z0 is close to Gamma x F0'(0) when the free density is flat on [-1, 1]") {
    // Gamma integrates exp(-(t+s) lambda) over lambda in [0, 1], so a density that is
    // flat on exactly that window leaves only a small remainder; spreading it to
    // [-2, 2] adds the lambda > 1 part.
    const std::vector<double> eps = {0.2, 0.1, 0.05};
    const auto trule = default_trule(0.5, 1.0, 120);  // t stays well below 1 / level spacing
    const auto flat = gram_comparison(flat_pair(400, 1.0), trule, eps, 0.0);
    const auto wide = gram_comparison(flat_pair(400, 2.0), trule, eps, 0.0);
    CHECK(flat.free_ratio < 0.02);
    CHECK(wide.free_ratio > 0.1);
    CHECK(flat.gram_psd_defect < 1e-10);
}

TEST_CASE("Krein model: the Z0 remainder is compact-like and shrinks with better smoothing") {
    const auto pair = build_krein(300, 40.0);
    const auto spectra = decompose(pair);
    const auto trule = default_trule(probe_gap(spectra, 0.5), 1.0, 120);

    const auto r = gram_comparison(pair, trule, {0.2, 0.1, 0.05}, 0.5);
    REQUIRE(r.free_singular_values.size() >= 10);
    CHECK(r.free_singular_values[9] / r.free_singular_values[0] <= 0.2);
    CHECK(r.perturbed_singular_values[9] / r.perturbed_singular_values[0] <= 0.2);

    // Two-member Richardson ladders with the finest eps halved each step.
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& ladder : {std::vector<double>{0.4, 0.2}, std::vector<double>{0.2, 0.1},
                               std::vector<double>{0.1, 0.05}}) {
        const double sigma1 = gram_comparison(pair, trule, ladder, 0.5).free_singular_values[0];
        CHECK(sigma1 < previous);
        previous = sigma1;
    }
}
