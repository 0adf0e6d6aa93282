#include "specdiff/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "specdiff/errors.hpp"
#include "specdiff/extrapolation.hpp"
#include "specdiff/projections.hpp"

namespace specdiff {

namespace {

double two_pi_mod(double theta) {
    double t = std::fmod(theta, 2.0 * M_PI);
    if (t < 0.0) t += 2.0 * M_PI;
    return t;
}

void finish_sandwich(const OperatorPair& pair, ResolventSandwich& rs, double cond_limit) {
    const auto k = pair.aux_dim();
    const CMatrix m = CMatrix::Identity(k, k) + pair.V0 * rs.T0;
    const RVector s = singular_values(m);
    rs.condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                         : std::numeric_limits<double>::infinity();
    if (!(rs.condition <= cond_limit)) {
        std::ostringstream os;
        os << "resolvent_sandwich: I + V0 T0(z) has condition " << rs.condition << " at z = "
           << rs.z;
        throw SingularInverse(os.str(), rs.condition);
    }
    // T0 M^{-1} via the transposed system M^T Y^T = T0^T.
    const CMatrix t_identity = m.transpose().partialPivLu().solve(rs.T0.transpose()).transpose();
    rs.resolvent_residual = (rs.T - t_identity).norm();

    auto negative_part = [](const CMatrix& t) {
        const SpectralDecomposition d = herm_eig(imag_part(t));
        return d.dim() > 0 ? std::max(0.0, -d.eigenvalues(0)) : 0.0;
    };
    rs.imag_psd_defect = std::max(negative_part(rs.T0), negative_part(rs.T));
}

CMatrix spectral_sandwich(const CMatrix& c, const RVector& mu, cplx z) {
    CMatrix scaled = c;
    for (Eigen::Index j = 0; j < mu.size(); ++j) scaled.col(j) *= 1.0 / (mu(j) - z);
    return scaled * c.adjoint();
}

}  // namespace

ResolventSandwich resolvent_sandwich(const OperatorPair& pair, cplx z, double cond_limit) {
    if (!(z.imag() > 0.0)) throw InvalidInput("resolvent_sandwich: Im z must be positive");
    const auto n = pair.dim();
    const CMatrix eye = CMatrix::Identity(n, n);
    const CMatrix gstar = pair.G.adjoint();
    ResolventSandwich rs;
    rs.z = z;
    rs.T0 = pair.G * (pair.H0 - z * eye).partialPivLu().solve(gstar);
    rs.T = pair.G * (pair.H - z * eye).partialPivLu().solve(gstar);
    finish_sandwich(pair, rs, cond_limit);
    return rs;
}

ResolventSandwich resolvent_sandwich(const OperatorPair& pair, const PairSpectra& spectra, cplx z,
                                     double cond_limit) {
    if (!(z.imag() > 0.0)) throw InvalidInput("resolvent_sandwich: Im z must be positive");
    ResolventSandwich rs;
    rs.z = z;
    rs.T0 = spectral_sandwich(pair.G * spectra.free.eigenvectors, spectra.free.eigenvalues, z);
    rs.T = spectral_sandwich(pair.G * spectra.perturbed.eigenvectors,
                             spectra.perturbed.eigenvalues, z);
    finish_sandwich(pair, rs, cond_limit);
    return rs;
}

SmoothedDensity smoothed_density(const OperatorPair& pair, double lambda, double eps) {
    if (!(eps > 0.0)) throw InvalidInput("smoothed_density: eps must be positive");
    const ResolventSandwich rs = resolvent_sandwich(pair, cplx(lambda, eps));
    return {lambda, eps, imag_part(rs.T0) / M_PI, imag_part(rs.T) / M_PI};
}

SmoothedDensity smoothed_density(const OperatorPair& pair, const PairSpectra& spectra,
                                 double lambda, double eps) {
    if (!(eps > 0.0)) throw InvalidInput("smoothed_density: eps must be positive");
    const ResolventSandwich rs = resolvent_sandwich(pair, spectra, cplx(lambda, eps));
    return {lambda, eps, imag_part(rs.T0) / M_PI, imag_part(rs.T) / M_PI};
}

double smoothed_spectral_shift(const PairSpectra& spectra, double lambda, double eps) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < spectra.free.dim(); ++k) {
        acc += std::atan((lambda - spectra.free.eigenvalues(k)) / eps);
    }
    for (Eigen::Index k = 0; k < spectra.perturbed.dim(); ++k) {
        acc -= std::atan((lambda - spectra.perturbed.eigenvalues(k)) / eps);
    }
    return acc / M_PI;
}

ScatteringBundle scattering_bundle(const OperatorPair& pair, const PairSpectra& spectra,
                                   double lambda, double eps, const ScatteringOptions& options) {
    if (!(eps > 0.0)) throw InvalidInput("scattering: eps must be positive");
    const cplx z(lambda, eps);
    const ResolventSandwich rs = options.route == SandwichRoute::Direct
                                     ? resolvent_sandwich(pair, z, options.cond_limit)
                                     : resolvent_sandwich(pair, spectra, z, options.cond_limit);
    ScatteringBundle b;
    b.lambda = lambda;
    b.eps = eps;
    b.resolvent_residual = rs.resolvent_residual;
    b.condition = rs.condition;
    b.F0prime = imag_part(rs.T0) / M_PI;
    b.Fprime = imag_part(rs.T) / M_PI;

    const auto k = pair.aux_dim();
    const CMatrix eye = CMatrix::Identity(k, k);
    const CMatrix root = psd_sqrt(b.F0prime);
    const CMatrix& v0 = pair.V0;
    b.Stilde = eye - cplx(0.0, 2.0 * M_PI) * root * (v0 - v0 * rs.T * v0) * root;
    b.A = hermitian_part(M_PI * M_PI * root * v0 * b.Fprime * v0 * root);

    const CMatrix s_minus_i = b.Stilde - eye;
    b.unitarity_defect = op_norm(b.Stilde.adjoint() * b.Stilde - eye);
    b.a_from_s = 0.5 * op_norm(s_minus_i);
    b.a_norm = herm_op_norm(b.A);
    b.a_from_a = std::sqrt(b.a_norm);
    b.a_identity_residual = (0.25 * s_minus_i.adjoint() * s_minus_i - b.A).norm();
    b.xi_smoothed = smoothed_spectral_shift(spectra, lambda, eps);

    Eigen::ComplexEigenSolver<CMatrix> ces(b.Stilde, false);
    if (ces.info() != Eigen::Success) throw Error("scattering: eigensolver failed on S~");
    b.s_eigenvalues.assign(ces.eigenvalues().data(), ces.eigenvalues().data() + k);
    std::sort(b.s_eigenvalues.begin(), b.s_eigenvalues.end(), [](cplx x, cplx y) {
        return std::abs(x - 1.0) > std::abs(y - 1.0);
    });
    b.retention_threshold = std::max(options.retention_factor * b.unitarity_defect,
                                     options.retention_floor);
    for (cplx e : b.s_eigenvalues) {
        if (std::abs(e - 1.0) > b.retention_threshold) b.phases.push_back(two_pi_mod(std::arg(e)));
    }
    return b;
}

ScatteringBundle tilde_s(const OperatorPair& pair, double lambda, double eps,
                         const ScatteringOptions& options) {
    return scattering_bundle(pair, decompose(pair), lambda, eps, options);
}

ScatteringBundle a_matrix(const OperatorPair& pair, double lambda, double eps,
                          const ScatteringOptions& options) {
    return scattering_bundle(pair, decompose(pair), lambda, eps, options);
}

Predictions phase_predictions(const std::vector<double>& phases) {
    Predictions p;
    for (double theta : phases) {
        p.a = std::max(p.a, 0.5 * std::abs(std::polar(1.0, theta) - 1.0));
        p.band_edges.push_back(std::abs(std::sin(0.5 * theta)));
    }
    std::sort(p.band_edges.begin(), p.band_edges.end(), std::greater<>());
    return p;
}

Predictions phase_predictions(const ScatteringBundle& bundle) {
    return phase_predictions(bundle.phases);
}

// ---------------------------------------------------------------------------

ScatteringLadder scattering_ladder(const OperatorPair& pair, const PairSpectra& spectra,
                                   double lambda, const std::vector<double>& eps,
                                   const LadderOptions& options) {
    validate_ladder(eps);
    ScatteringLadder out;
    out.lambda = lambda;
    out.level_spacing = local_level_spacing(spectra.free.eigenvalues, lambda);

    std::vector<int> used = admissible_members(eps, out.level_spacing, options.kappa);
    if (used.empty()) {
        out.fallback = true;
        used.resize(eps.size());
        std::iota(used.begin(), used.end(), 0);
    }

    std::vector<CMatrix> f0s, fs;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const ScatteringBundle b = scattering_bundle(pair, spectra, lambda, eps[i], options.scattering);
        LadderMember m;
        m.eps = eps[i];
        m.admissible = std::find(used.begin(), used.end(), static_cast<int>(i)) != used.end();
        m.unitarity_defect = b.unitarity_defect;
        m.retention_threshold = b.retention_threshold;
        m.a_from_s = b.a_from_s;
        m.a_norm = b.a_norm;
        m.a_identity_residual = b.a_identity_residual;
        m.resolvent_residual = b.resolvent_residual;
        m.condition = b.condition;
        m.xi_smoothed = b.xi_smoothed;
        m.phases = b.phases;
        out.members.push_back(std::move(m));
        if (options.keep_densities && out.members.back().admissible) {
            f0s.push_back(b.F0prime);
            fs.push_back(b.Fprime);
        }
    }
    for (std::size_t i = 1; i < out.members.size(); ++i) {
        if (out.members[i].unitarity_defect >
            out.members[i - 1].unitarity_defect + options.monotone_slack) {
            out.unitarity_monotone = false;
        }
    }

    std::vector<double> e_used, a_vals, anorm_vals, xi_vals;
    for (int i : used) {
        e_used.push_back(eps[i]);
        a_vals.push_back(out.members[i].a_from_s);
        anorm_vals.push_back(out.members[i].a_norm);
        xi_vals.push_back(out.members[i].xi_smoothed);
    }
    out.eps_used = e_used;
    const Extrapolated a = extrapolate_to_zero(e_used, a_vals);
    out.a = a.value;
    out.a_error = a.error;
    out.a_norm = extrapolate_to_zero(e_used, anorm_vals).value;
    const Extrapolated xi = extrapolate_to_zero(e_used, xi_vals);
    out.xi_smoothed = xi.value;
    out.xi_error = xi.error;

    // Phases are matched across the ladder by rank in |e^{i theta} - 1|; the
    // finest admissible member fixes how many are tracked.
    const std::size_t ranks = out.members[used.back()].phases.size();
    for (std::size_t r = 0; r < ranks; ++r) {
        std::vector<double> e_r, th_r;
        for (int i : used) {
            if (out.members[i].phases.size() > r) {
                e_r.push_back(eps[i]);
                th_r.push_back(out.members[i].phases[r]);
            }
        }
        const Extrapolated th = extrapolate_to_zero(e_r, unwrap_phases(th_r));
        // Spurious phases shrink with eps and extrapolate into the floor.
        if (std::abs(std::polar(1.0, th.value) - 1.0) <= options.scattering.retention_floor) continue;
        out.phases.push_back(two_pi_mod(th.value));
        out.phase_errors.push_back(th.error);
    }
    if (options.keep_densities) {
        out.F0prime = extrapolate_to_zero(e_used, f0s);
        out.Fprime = extrapolate_to_zero(e_used, fs);
    }
    return out;
}

BirmanKreinResult birman_krein_check(const PairSpectra& spectra, double lambda,
                                     const ScatteringLadder& ladder) {
    BirmanKreinResult r;
    const auto below = [lambda](const RVector& ev) {
        return static_cast<int>((ev.array() < lambda).count());
    };
    r.xi = below(spectra.free.eigenvalues) - below(spectra.perturbed.eigenvalues);
    r.det_s = 1.0;
    for (double theta : ladder.phases) r.det_s *= std::polar(1.0, theta);
    r.defect = std::abs(r.det_s - std::polar(1.0, -2.0 * M_PI * r.xi));
    r.xi_smoothed = ladder.xi_smoothed;
    r.defect_smoothed = std::abs(r.det_s - std::polar(1.0, -2.0 * M_PI * r.xi_smoothed));
    return r;
}

BirmanKreinResult birman_krein_check(const OperatorPair& pair, double lambda,
                                     const std::vector<double>& eps,
                                     const LadderOptions& options) {
    const PairSpectra spectra = decompose(pair);
    require_gap(spectra.free, lambda, kProbeGap, "birman_krein_check");
    require_gap(spectra.perturbed, lambda, kProbeGap, "birman_krein_check");
    return birman_krein_check(spectra, lambda, scattering_ladder(pair, spectra, lambda, eps, options));
}

}  // namespace specdiff
