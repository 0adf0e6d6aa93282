#include "specdiff/zops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specdiff/errors.hpp"
#include "specdiff/projections.hpp"
#include "specdiff/scattering.hpp"

namespace specdiff {

namespace {

double gap_at_zero(const PairSpectra& s) {
    return std::min(spectral_gap(s.free, 0.0), spectral_gap(s.perturbed, 0.0));
}

double radius_of(const PairSpectra& s) {
    return std::max({std::abs(s.free.eigenvalues(0)),
                     std::abs(s.free.eigenvalues(s.free.dim() - 1)),
                     std::abs(s.perturbed.eigenvalues(0)),
                     std::abs(s.perturbed.eigenvalues(s.perturbed.dim() - 1))});
}

// Z (V0 x I) Z0^* = sum_i Z_i V0 Z0_i^*.
CMatrix z_product(const ZOperators& z, const CMatrix& v0) {
    const auto k = z.kdim;
    CMatrix acc = CMatrix::Zero(z.Z.rows(), z.Z0.rows());
    for (std::size_t i = 0; i < z.trule.size(); ++i) {
        const auto c = static_cast<Eigen::Index>(i) * k;
        acc.noalias() += z.Z.middleCols(c, k) * v0 * z.Z0.middleCols(c, k).adjoint();
    }
    return acc;
}

std::vector<double> partial_sums(const std::vector<double>& s) {
    std::vector<double> out(s.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = acc += s[i];
    return out;
}

}  // namespace

QuadratureRule default_trule(double gap, double radius, int n) {
    if (!(gap > 0.0) || !(radius >= gap)) throw InvalidInput("default_trule: bad gap/radius");
    QuadratureParams p;
    p.t_min = 1e-10 / radius;
    p.t_max = 40.0 / gap;
    return make_quadrature(QuadratureKind::HalflineLogUniform, n, p);
}

ZOperators build_z_ops(const OperatorPair& pair, const PairSpectra& spectra,
                       const QuadratureRule& trule, double lambda0) {
    validate(trule);
    const PairSpectra s = shift_spectra(spectra, lambda0);
    require_gap(s.free, 0.0, kProbeGap, "build_z_ops(H0)");
    require_gap(s.perturbed, 0.0, kProbeGap, "build_z_ops(H)");

    ZOperators z;
    z.trule = trule;
    z.gap = gap_at_zero(s);
    z.radius = radius_of(s);
    z.kdim = pair.aux_dim();
    const auto n = pair.dim();
    const auto k = z.kdim;
    const auto nt = static_cast<Eigen::Index>(trule.size());
    const CMatrix gstar = pair.G.adjoint();
    z.Z0.resize(n, nt * k);
    z.Z.resize(n, nt * k);
    // Only decaying directions are kept, so the growth guard never fires.
    const auto positive = [](double mu) { return mu > 0.0; };
    const auto negative = [](double mu) { return mu < 0.0; };
    for (Eigen::Index i = 0; i < nt; ++i) {
        const double t = trule.nodes[i];
        const double sw = std::sqrt(trule.weights[i]);
        z.Z0.middleCols(i * k, k) = sw * expm_apply(s.free, -t, gstar, positive);
        z.Z.middleCols(i * k, k) = sw * expm_apply(s.perturbed, t, gstar, negative);
    }
    return z;
}

ZOperators build_z_ops(const OperatorPair& pair, const QuadratureRule& trule, double lambda0) {
    return build_z_ops(pair, decompose(pair), trule, lambda0);
}

std::pair<double, double> z_norms(const ZOperators& z) {
    auto norm_of = [](const CMatrix& m) {
        if (m.size() == 0) return 0.0;
        return std::sqrt(std::max(0.0, herm_op_norm(hermitian_part(m * m.adjoint()))));
    };
    return {norm_of(z.Z0), norm_of(z.Z)};
}

namespace {

// Quadrature-free part: the Sylvester oracle.
void product_oracle_into(ProductReport& r, const OperatorPair& pair, const PairSpectra& s, double lambda0,
                    double radius) {
    const auto n = pair.dim();
    const CMatrix eye = CMatrix::Identity(n, n);
    const CMatrix e_minus = spectral_projection(s.perturbed, 0.0);
    const CMatrix e0_plus = eye - spectral_projection(s.free, 0.0);
    const CMatrix target = e_minus * e0_plus;

    // Deflated generators: A = H E- - scale (I - E-), B = H0 E0+ + scale (I - E0+)
    // keep the two spectra apart, and the unique solution is supported on
    // Ran E0+ -> Ran E-.
    const double scale = std::max(1.0, radius);
    const CMatrix h = pair.H - lambda0 * eye;
    const CMatrix h0 = pair.H0 - lambda0 * eye;
    const CMatrix a = h * e_minus - scale * (eye - e_minus);
    const CMatrix b = h0 * e0_plus + scale * (eye - e0_plus);
    const CMatrix v = pair.G.adjoint() * pair.V0 * pair.G;
    const CMatrix rhs = -(e_minus * v * e0_plus);
    const CMatrix x = sylvester_solve(a, b, rhs);
    r.sylvester_residual = (a * x - x * b - rhs).norm();
    r.residual_oracle = (x + target).norm();
}

ProductReport product_from(const OperatorPair& pair, const PairSpectra& spectra, const ZOperators& z,
                 double lambda0) {
    const PairSpectra s = shift_spectra(spectra, lambda0);
    const auto n = pair.dim();
    const CMatrix eye = CMatrix::Identity(n, n);
    const CMatrix e_minus = spectral_projection(s.perturbed, 0.0);
    const CMatrix e0_plus = eye - spectral_projection(s.free, 0.0);
    const CMatrix target = e_minus * e0_plus;

    ProductReport r;
    r.gap = z.gap;
    r.t_nodes = static_cast<int>(z.trule.size());
    r.direct_computed = true;
    const CMatrix w = z_product(z, pair.V0);
    r.residual_direct = (target + w).norm();
    r.representation_residual = (e0_plus * e_minus * e0_plus - w.adjoint() * w).norm();
    product_oracle_into(r, pair, s, lambda0, z.radius);
    return r;
}

}  // namespace

ProductReport product_check(const OperatorPair& pair, const QuadratureRule& trule, double lambda0) {
    const PairSpectra spectra = decompose(pair);
    return product_from(pair, spectra, build_z_ops(pair, spectra, trule, lambda0), lambda0);
}

ProductReport product_oracle(const OperatorPair& pair, double lambda0) {
    return product_oracle(pair, decompose(pair), lambda0);
}

ProductReport product_oracle(const OperatorPair& pair, const PairSpectra& spectra, double lambda0) {
    const PairSpectra s = shift_spectra(spectra, lambda0);
    require_gap(s.free, 0.0, kProbeGap, "product_oracle(H0)");
    require_gap(s.perturbed, 0.0, kProbeGap, "product_oracle(H)");
    ProductReport r;
    r.gap = gap_at_zero(s);
    product_oracle_into(r, pair, s, lambda0, radius_of(s));
    return r;
}

ProductReport product_check(const OperatorPair& pair, double lambda0, const ProductOptions& options) {
    return product_check(pair, decompose(pair), lambda0, options);
}

ProductReport product_check(const OperatorPair& pair, const PairSpectra& spectra, double lambda0,
                  const ProductOptions& options) {
    const PairSpectra s = shift_spectra(spectra, lambda0);
    require_gap(s.free, 0.0, kProbeGap, "product_check(H0)");
    require_gap(s.perturbed, 0.0, kProbeGap, "product_check(H)");
    const double gap = gap_at_zero(s);
    const double radius = radius_of(s);

    int nodes = options.initial_nodes;
    ProductReport best;
    std::vector<double> history;
    for (int round = 0; round <= options.max_doublings; ++round, nodes *= 2) {
        const QuadratureRule trule = default_trule(gap, radius, nodes);
        ProductReport r = product_from(pair, spectra, build_z_ops(pair, spectra, trule, lambda0), lambda0);
        history.push_back(r.residual_direct);
        const bool settled =
            r.residual_direct <= options.floor * static_cast<double>(pair.dim()) ||
            (history.size() >= 2 &&
             std::abs(history.back() - history[history.size() - 2]) <=
                 options.stabilize * history[history.size() - 2]);
        best = std::move(r);
        if (settled) break;
    }
    best.direct_history = history;
    return best;
}

// ---------------------------------------------------------------------------

CMatrix gamma_on_rule(const QuadratureRule& trule) {
    const auto n = static_cast<Eigen::Index>(trule.size());
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double x = trule.nodes[i] + trule.nodes[j];
            g(i, j) = std::sqrt(trule.weights[i] * trule.weights[j]) * -std::expm1(-x) / x;
        }
    }
    return g;
}

double decay_exponent(const std::vector<double>& sigma, int count) {
    const double floor = sigma.empty() ? 0.0 : 1e-14 * sigma.front();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = 0; k < count && k < static_cast<int>(sigma.size()); ++k) {
        if (!(sigma[k] > floor)) break;
        const double x = std::log(k + 1.0), y = std::log(sigma[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

GramComparisonReport gram_comparison(const OperatorPair& pair, const QuadratureRule& trule,
                               const std::vector<double>& eps, double lambda0, double kappa) {
    const auto columns = static_cast<Eigen::Index>(trule.size()) * pair.aux_dim();
    if (columns > kGramMaxColumns) {
        std::ostringstream os;
        os << "gram_comparison: " << columns << " Gram columns exceed the limit "
           << kGramMaxColumns;
        throw InvalidInput(os.str());
    }
    const PairSpectra spectra = decompose(pair);
    const ZOperators z = build_z_ops(pair, spectra, trule, lambda0);

    LadderOptions lo;
    lo.kappa = kappa;
    lo.keep_densities = true;
    const ScatteringLadder ladder = scattering_ladder(pair, spectra, lambda0, eps, lo);

    GramComparisonReport r;
    r.t_nodes = static_cast<int>(trule.size());
    r.eps_used = ladder.eps_used;

    const CMatrix gamma = gamma_on_rule(trule);
    auto kron = [&gamma](const CMatrix& f) {
        const auto k = f.rows();
        CMatrix out(gamma.rows() * k, gamma.cols() * k);
        for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
            for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
                out.block(i * k, j * k, k, k) = gamma(i, j) * f;
            }
        }
        return out;
    };
    const CMatrix gram0 = hermitian_part(z.Z0.adjoint() * z.Z0);
    const CMatrix gram = hermitian_part(z.Z.adjoint() * z.Z);
    const SpectralDecomposition d0 = herm_eig(gram0);
    const SpectralDecomposition d = herm_eig(gram);
    r.free_gram_norm = herm_op_norm(gram0);
    r.perturbed_gram_norm = herm_op_norm(gram);
    r.gram_psd_defect = std::max({0.0, -d0.eigenvalues(0), -d.eigenvalues(0)});

    const RVector s0 = singular_values(gram0 - kron(ladder.F0prime));
    const RVector s1 = singular_values(gram - kron(ladder.Fprime));
    r.free_singular_values.assign(s0.data(), s0.data() + s0.size());
    r.perturbed_singular_values.assign(s1.data(), s1.data() + s1.size());
    r.free_ratio = r.free_gram_norm > 0 ? s0(0) / r.free_gram_norm : 0.0;
    r.perturbed_ratio = r.perturbed_gram_norm > 0 ? s1(0) / r.perturbed_gram_norm : 0.0;
    r.free_decay_exponent = decay_exponent(r.free_singular_values);
    r.perturbed_decay_exponent = decay_exponent(r.perturbed_singular_values);
    r.free_partial_nuclear = partial_sums(r.free_singular_values);
    r.perturbed_partial_nuclear = partial_sums(r.perturbed_singular_values);
    return r;
}

}  // namespace specdiff
