#include <doctest.h>

#include <cmath>

#include <Eigen/LU>

#include "specdiff/errors.hpp"
#include "specdiff/operator_models.hpp"
#include "specdiff/presets.hpp"
#include "specdiff/quadrature.hpp"

using namespace specdiff;

namespace {

PotentialSpec preset_spec(const std::string& name, int n, double half_width) {
    ModelParams m = find_preset(name).model;
    m.n = n;
    m.truncation = half_width;
    return preset_potential(m);
}

int negative_count(const SpectralDecomposition& d) {
    int count = 0;
    for (Eigen::Index i = 0; i < d.dim(); ++i) count += d.eigenvalues(i) < 0.0 ? 1 : 0;
    return count;
}

// Ground state of the unit square well of half width 1: k tan k = kappa, k^2 + kappa^2 = 1.
double square_well_ground_state() {
    double lo = 1e-9;
    double hi = 1.0 - 1e-12;
    auto f = [](double k) { return k * std::tan(k) - std::sqrt(1.0 - k * k); };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    const double k = 0.5 * (lo + hi);
    return -(1.0 - k * k);
}

}  // namespace

TEST_CASE("Krein kernels are the Dirichlet and Neumann Green's functions of 1 - d^2/dx^2") {
    CHECK(krein_kernel_free(1.0, 2.0) == doctest::Approx(std::sinh(1.0) * std::exp(-2.0)).epsilon(1e-15));
    CHECK(krein_kernel_free(2.0, 1.0) == doctest::Approx(std::sinh(1.0) * std::exp(-2.0)).epsilon(1e-15));
    CHECK(krein_kernel_perturbed(1.0, 2.0) == doctest::Approx(std::cosh(1.0) * std::exp(-2.0)).epsilon(1e-15));
    CHECK(krein_kernel_free(0.0, 3.0) == 0.0);
}

TEST_CASE("Krein Galerkin entries match a direct cell integration") {
    const auto model = build_krein_model(24, 10.0);
    const auto& h0 = model.pair.H0;
    REQUIRE(model.edges.size() == 25);

    // Off-diagonal cells: the kernel is smooth there, so tensor Gauss-Legendre is exact to roundoff.
    auto cell_integral = [&](int i, int j) {
        QuadratureParams pi{model.edges[i], model.edges[i + 1]};
        QuadratureParams pj{model.edges[j], model.edges[j + 1]};
        const auto ri = make_quadrature(QuadratureKind::BoundedLegendre, 30, pi);
        const auto rj = make_quadrature(QuadratureKind::BoundedLegendre, 30, pj);
        return ri.integrate([&](double x) { return rj.integrate([&](double y) { return krein_kernel_free(x, y); }); });
    };
    for (auto [i, j] : {std::pair{0, 5}, std::pair{3, 17}, std::pair{22, 23}}) {
        const double wi = model.edges[i + 1] - model.edges[i];
        const double wj = model.edges[j + 1] - model.edges[j];
        CHECK(h0(i, j).real() == doctest::Approx(cell_integral(i, j) / std::sqrt(wi * wj)).epsilon(1e-12));
    }

    CHECK(factorization_residual(model.pair) < 1e-14);
    CHECK(model.pair.aux_dim() == 1);
    const auto spectra = decompose(model.pair);
    CHECK(spectra.free.eigenvalues.minCoeff() > 0.0);
    CHECK(spectra.free.eigenvalues.maxCoeff() < 1.0);
    CHECK(spectra.perturbed.eigenvalues.maxCoeff() < 1.0 + 1e-12);
}

TEST_CASE("sech^2 well: one bound state at the Poschl-Teller energy") {
    const auto pair = build_schrodinger_1d(preset_spec("schrodinger:sech2", 800, 20.0));
    const auto spectra = decompose(pair);
    CHECK(negative_count(spectra.perturbed) == 1);
    CHECK(negative_count(spectra.free) == 0);
    const double ell = (std::sqrt(5.0) - 1.0) / 2.0;  // ell (ell + 1) = 1
    CHECK(spectra.perturbed.eigenvalues(0) == doctest::Approx(-ell * ell).epsilon(2e-3));
    CHECK(factorization_residual(pair) < 1e-14);
}

TEST_CASE("deep sech^2(2x) well: ground state -4 ell^2 with ell (ell + 1) = 3/2") {
    const auto pair = build_schrodinger_1d(preset_spec("schrodinger:two-phase", 800, 20.0));
    const auto spectra = decompose(pair);
    const double ell = (std::sqrt(7.0) - 1.0) / 2.0;
    CHECK(negative_count(spectra.perturbed) == 1);
    CHECK(spectra.perturbed.eigenvalues(0) == doctest::Approx(-4.0 * ell * ell).epsilon(5e-3));
}

TEST_CASE("square well ground state solves k tan k = kappa") {
    const auto spec = preset_spec("schrodinger:square-well", 1600, 20.0);
    const auto spectra = decompose(build_schrodinger_1d(spec));
    CHECK(negative_count(spectra.perturbed) == 1);
    CHECK(spectra.perturbed.eigenvalues(0) == doctest::Approx(square_well_ground_state()).epsilon(2e-2));
    // The auxiliary space is exactly the grid inside the well.
    for (int i : schrodinger_support(spec)) CHECK(std::abs(schrodinger_grid(spec)[i]) < 1.0);
}

TEST_CASE("decay bound violations are reported with their location") {
    PotentialSpec spec;
    spec.name = "slow";
    spec.potential = [](double x) { return 1.0 / std::sqrt(1.0 + std::abs(x)); };
    spec.grid_size = 100;
    spec.half_width = 10.0;
    spec.bound_constant = 1.0;
    try {
        check_decay(spec);
        FAIL("expected BoundViolation");
    } catch (const BoundViolation& e) {
        CHECK(e.excess() > 0.0);
        CHECK(std::abs(e.where()) <= 10.0);
    }
    spec.decay_exponent = 1.0;
    CHECK_THROWS_AS(check_decay(spec), InvalidInput);
}

TEST_CASE("resolvent transform produces the resolvent pair and a valid factorization") {
    const auto pair = random_finite_pair(10, 3, 4, {0.0});
    const double a = -5.0;
    const auto tr = resolvent_transform(pair, a);
    const CMatrix id = CMatrix::Identity(10, 10);
    CHECK((tr.transformed.H - (pair.H - a * id).inverse()).norm() < 1e-13);
    CHECK((tr.transformed.H0 - (pair.H0 - a * id).inverse()).norm() < 1e-13);
    CHECK(factorization_residual(tr.transformed) < 1e-13);
    CHECK(tr.lambda_of(tr.mu(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(tr.jacobian(0.3) == doctest::Approx(1.0 / (5.3 * 5.3)));

    const auto shifted = shift_pair(pair, 0.25);
    CHECK((shifted.H - pair.H + 0.25 * id).norm() < 1e-15);
    CHECK(factorization_residual(shifted) < 1e-14);
}

TEST_CASE("random finite pairs are seeded, gapped and factorized") {
    const std::vector<double> probes = {-0.25, 0.25};
    const auto a = random_finite_pair(12, 3, 7, probes, 1e-3);
    const auto b = random_finite_pair(12, 3, 7, probes, 1e-3);
    const auto c = random_finite_pair(12, 3, 8, probes, 1e-3);
    CHECK((a.H - b.H).norm() == 0.0);
    CHECK((a.H - c.H).norm() > 0.0);
    CHECK(factorization_residual(a) < 1e-14);
    const auto spectra = decompose(a);
    for (double p : probes) {
        CHECK((spectra.free.eigenvalues.array() - p).abs().minCoeff() >= 1e-3);
        CHECK((spectra.perturbed.eigenvalues.array() - p).abs().minCoeff() >= 1e-3);
    }
    CHECK_THROWS_AS(build_finite_pair(CMatrix::Identity(3, 3), CMatrix::Identity(2, 4), CMatrix::Identity(2, 2)),
                    InvalidInput);
}
