#include "specdiff/operator_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specdiff/errors.hpp"

namespace specdiff {

PairSpectra decompose(const OperatorPair& pair) {
    return {herm_eig(pair.H0), herm_eig(pair.H)};
}

double factorization_residual(const OperatorPair& pair) {
    const double scale = std::max(pair.H.norm() + pair.H0.norm(), 1e-300);
    return (pair.H - pair.H0 - pair.G.adjoint() * pair.V0 * pair.G).norm() / scale;
}

OperatorPair build_finite_pair(const CMatrix& h0, const CMatrix& g, const CMatrix& v0,
                               ModelFacts meta) {
    require_finite(h0, "build_finite_pair(H0)");
    require_finite(g, "build_finite_pair(G)");
    require_finite(v0, "build_finite_pair(V0)");
    if (h0.rows() != h0.cols()) throw InvalidInput("build_finite_pair: H0 not square");
    if (v0.rows() != v0.cols()) throw InvalidInput("build_finite_pair: V0 not square");
    if (g.cols() != h0.rows() || g.rows() != v0.rows()) {
        std::ostringstream os;
        os << "build_finite_pair: dimension mismatch (H0 " << h0.rows() << ", G " << g.rows()
           << "x" << g.cols() << ", V0 " << v0.rows() << ")";
        throw InvalidInput(os.str());
    }
    if (double a = hermitian_asymmetry(h0); a > kHermitianTol) {
        throw NotHermitian("build_finite_pair: H0 not Hermitian", a);
    }
    if (double a = hermitian_asymmetry(v0); a > kHermitianTol) {
        throw NotHermitian("build_finite_pair: V0 not Hermitian", a);
    }
    OperatorPair pair;
    pair.H0 = hermitian_part(h0);
    pair.G = g;
    pair.V0 = hermitian_part(v0);
    pair.H = hermitian_part(pair.H0 + g.adjoint() * pair.V0 * g);
    pair.meta = std::move(meta);
    return pair;
}

// ---------------------------------------------------------------------------

double krein_kernel_free(double x, double y) {
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    return std::sinh(lo) * std::exp(-hi);
}

double krein_kernel_perturbed(double x, double y) {
    return krein_kernel_free(x, y) + std::exp(-x) * std::exp(-y);
}

namespace {

// int_a^c sinh(x) dx
double sinh_integral(double a, double c) {
    return 2.0 * std::sinh(0.5 * (c + a)) * std::sinh(0.5 * (c - a));
}

// int_a^c exp(-y) dy
double exp_integral(double a, double c) { return std::exp(-a) * -std::expm1(-(c - a)); }

// int_a^c int_a^c sinh(min) exp(-max)
double diagonal_cell(double a, double c) {
    const double h = c - a;
    const double e2a = std::exp(-2.0 * a);
    return h + 0.5 * e2a * -std::expm1(-2.0 * h) - (1.0 + e2a) * -std::expm1(-h);
}

}  // namespace

KreinModel build_krein_model(int n, double truncation) {
    if (n < 16) throw InvalidInput("build_krein: n must be at least 16");
    if (!(truncation >= 10.0)) throw InvalidInput("build_krein: L must be at least 10");

    KreinModel model;
    model.truncation = truncation;
    model.rule = make_quadrature(QuadratureKind::BoundedLegendre, n, {0.0, truncation});
    model.edges.resize(n + 1);
    model.edges[0] = 0.0;
    for (int i = 0; i < n; ++i) model.edges[i + 1] = model.edges[i] + model.rule.weights[i];
    model.edges[n] = truncation;

    std::vector<double> width(n), s_int(n), e_int(n);
    for (int i = 0; i < n; ++i) {
        const double a = model.edges[i], c = model.edges[i + 1];
        width[i] = c - a;
        s_int[i] = sinh_integral(a, c);
        e_int[i] = exp_integral(a, c);
    }

    CMatrix h0(n, n);
    CMatrix g(1, n);
    for (int i = 0; i < n; ++i) {
        h0(i, i) = diagonal_cell(model.edges[i], model.edges[i + 1]) / width[i];
        for (int j = i + 1; j < n; ++j) {
            const double v = s_int[i] * e_int[j] / std::sqrt(width[i] * width[j]);
            h0(i, j) = v;
            h0(j, i) = v;
        }
        g(0, i) = e_int[i] / std::sqrt(width[i]);
    }

    ModelFacts meta;
    meta.descriptor = "krein";
    meta.exact = {{"spectrum_lower", 0.0}, {"spectrum_upper", 1.0},
                  {"spectral_shift", 0.5}, {"scattering_phase", M_PI},
                  {"difference_lower", -1.0}, {"difference_upper", 1.0},
                  {"n", static_cast<double>(n)}, {"L", truncation}};
    model.pair = build_finite_pair(h0, g, CMatrix::Identity(1, 1), std::move(meta));
    return model;
}

// ---------------------------------------------------------------------------

std::vector<double> schrodinger_grid(const PotentialSpec& spec) {
    const int n = spec.grid_size;
    const double h = 2.0 * spec.half_width / (n + 1);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = -spec.half_width + (i + 1) * h;
    return x;
}

std::vector<int> schrodinger_support(const PotentialSpec& spec) {
    const std::vector<double> x = schrodinger_grid(spec);
    std::vector<double> v(x.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        v[i] = spec.potential(x[i]);
        vmax = std::max(vmax, std::abs(v[i]));
    }
    std::vector<int> support;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > spec.support_cutoff * vmax) support.push_back(static_cast<int>(i));
    }
    return support;
}

void check_decay(const PotentialSpec& spec) {
    if (!spec.potential) throw InvalidInput("potential: no callable");
    if (!(spec.decay_exponent > 1.0)) {
        throw InvalidInput("potential: decay exponent must exceed 1");
    }
    for (double x : schrodinger_grid(spec)) {
        const double v = std::abs(spec.potential(x));
        const double bound = spec.bound_constant * std::pow(1.0 + std::abs(x), -spec.decay_exponent);
        if (!std::isfinite(v) || v > bound * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "potential '" << spec.name << "' violates |V(x)| <= C(1+|x|)^-rho at x = " << x;
            throw BoundViolation(os.str(), x, v - bound);
        }
    }
}

OperatorPair build_schrodinger_1d(const PotentialSpec& spec) {
    if (spec.grid_size < 3) throw InvalidInput("schrodinger: grid too small");
    if (!(spec.half_width > 0.0)) throw InvalidInput("schrodinger: half width must be positive");
    check_decay(spec);

    const int n = spec.grid_size;
    const std::vector<double> x = schrodinger_grid(spec);
    const double h = x[1] - x[0];
    const double inv_h2 = 1.0 / (h * h);

    CMatrix h0 = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        h0(i, i) = 2.0 * inv_h2;
        if (i + 1 < n) h0(i, i + 1) = h0(i + 1, i) = -inv_h2;
    }

    // Vectors carry sqrt(h)-scaled samples in both spaces, so G = |V|^{1/2}
    // restricted to the support gives G*V0G = diag(V) with no extra weight.
    const std::vector<int> support = schrodinger_support(spec);
    const auto k = static_cast<Eigen::Index>(support.size());
    CMatrix g = CMatrix::Zero(std::max<Eigen::Index>(k, 1), n);
    CMatrix v0 = CMatrix::Zero(std::max<Eigen::Index>(k, 1), std::max<Eigen::Index>(k, 1));
    for (Eigen::Index r = 0; r < k; ++r) {
        const int i = support[r];
        const double vi = spec.potential(x[i]);
        g(r, i) = std::sqrt(std::abs(vi));
        v0(r, r) = vi >= 0.0 ? 1.0 : -1.0;
    }
    if (k == 0) v0(0, 0) = 1.0;

    ModelFacts meta;
    meta.descriptor = spec.name.empty() ? "schrodinger" : spec.name;
    meta.exact = {{"half_width", spec.half_width},
                  {"grid_size", static_cast<double>(n)},
                  {"grid_step", h},
                  {"decay_exponent", spec.decay_exponent}};
    return build_finite_pair(h0, g, v0, std::move(meta));
}

// ---------------------------------------------------------------------------

ResolventTransform resolvent_transform(const OperatorPair& pair, double shift) {
    const PairSpectra spectra = decompose(pair);
    const double bottom = std::min(spectra.free.eigenvalues(0), spectra.perturbed.eigenvalues(0));
    if (!(shift < bottom - 1e-6)) {
        std::ostringstream os;
        os << "resolvent_transform: shift " << shift << " not below the spectra (bottom "
           << bottom << ")";
        throw SpectralCollision(os.str(), bottom, bottom - shift);
    }
    auto inverse = [shift](double x) { return 1.0 / (x - shift); };
    const CMatrix h0 = hermitian_part(spectral_function(spectra.free, inverse));
    const CMatrix h = hermitian_part(spectral_function(spectra.perturbed, inverse));

    ResolventTransform rt;
    rt.shift = shift;
    OperatorPair& out = rt.transformed;
    out.H0 = h0;
    out.H = h;
    out.G = pair.G * h0;
    out.V0 = hermitian_part(-pair.V0 + pair.V0 * pair.G * h * pair.G.adjoint() * pair.V0);
    out.meta = pair.meta;
    out.meta.descriptor = pair.meta.descriptor + "|resolvent";
    out.meta.exact["resolvent_shift"] = shift;
    return rt;
}

OperatorPair shift_pair(const OperatorPair& pair, double lambda0) {
    OperatorPair out = pair;
    if (lambda0 == 0.0) return out;
    const auto n = pair.dim();
    out.H0 = pair.H0 - lambda0 * CMatrix::Identity(n, n);
    out.H = pair.H - lambda0 * CMatrix::Identity(n, n);
    out.meta.exact["shift"] = lambda0;
    return out;
}

PairSpectra shift_spectra(const PairSpectra& spectra, double lambda0) {
    PairSpectra out = spectra;
    out.free.eigenvalues.array() -= lambda0;
    out.perturbed.eigenvalues.array() -= lambda0;
    return out;
}

}  // namespace specdiff
