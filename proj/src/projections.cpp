#include "specdiff/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specdiff/errors.hpp"

namespace specdiff {

double spectral_gap(const SpectralDecomposition& d, double lambda, double* nearest) {
    double best = std::numeric_limits<double>::infinity();
    double where = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index k = 0; k < d.dim(); ++k) {
        const double gap = std::abs(d.eigenvalues(k) - lambda);
        if (gap < best) {
            best = gap;
            where = d.eigenvalues(k);
        }
    }
    if (nearest) *nearest = where;
    return best;
}

void require_gap(const SpectralDecomposition& d, double lambda, double min_gap, const char* who) {
    double nearest = 0.0;
    const double gap = spectral_gap(d, lambda, &nearest);
    if (gap < min_gap) {
        std::ostringstream os;
        os.precision(17);
        os << who << ": eigenvalue " << nearest << " within " << gap << " of probe " << lambda;
        throw SpectralCollision(os.str(), nearest, gap);
    }
}

CMatrix eigenbasis(const SpectralDecomposition& d, double lambda, bool below) {
    // Eigenvalues are ascending: the split is a single index.
    Eigen::Index split = 0;
    while (split < d.dim() && d.eigenvalues(split) < lambda) ++split;
    if (below) return d.eigenvectors.leftCols(split);
    return d.eigenvectors.rightCols(d.dim() - split);
}

CMatrix spectral_projection(const SpectralDecomposition& d, double lambda, double min_gap) {
    require_gap(d, lambda, min_gap, "spectral_projection");
    const CMatrix basis = eigenbasis(d, lambda, true);
    return basis * basis.adjoint();
}

ProjectionPair projection_pair(const PairSpectra& spectra, double lambda, double min_gap) {
    ProjectionPair pp;
    pp.probe = lambda;
    pp.E0 = spectral_projection(spectra.free, lambda, min_gap);
    pp.E = spectral_projection(spectra.perturbed, lambda, min_gap);
    pp.gap_free = spectral_gap(spectra.free, lambda);
    pp.gap_perturbed = spectral_gap(spectra.perturbed, lambda);
    return pp;
}

double idempotency_defect(const CMatrix& p) {
    return std::max((p * p - p).norm(), (p - p.adjoint()).norm());
}

double pairing_defect(const std::vector<double>& spectrum, double delta, int* count_mismatch) {
    int positive = 0, negative = 0;
    double worst = 0.0;
    for (double x : spectrum) {
        if (std::abs(x) < delta || std::abs(x) > 1.0 - delta) continue;
        (x > 0 ? positive : negative) += 1;
        auto it = std::lower_bound(spectrum.begin(), spectrum.end(), -x);
        double d = std::numeric_limits<double>::infinity();
        if (it != spectrum.end()) d = std::min(d, std::abs(*it + x));
        if (it != spectrum.begin()) d = std::min(d, std::abs(*(it - 1) + x));
        worst = std::max(worst, d);
    }
    if (count_mismatch) *count_mismatch = std::abs(positive - negative);
    return worst;
}

DifferenceReport projection_difference(const PairSpectra& spectra, double lambda,
                                       const DifferenceOptions& options) {
    const ProjectionPair pp = projection_pair(spectra, lambda, options.min_gap);
    const CMatrix d = pp.E - pp.E0;

    DifferenceReport r;
    r.probe = lambda;
    r.dim = static_cast<int>(d.rows());
    r.idempotency_defect = std::max(idempotency_defect(pp.E0), idempotency_defect(pp.E));
    r.trace = d.trace().real();
    const auto below = [lambda](const RVector& ev) {
        return static_cast<int>((ev.array() < lambda).count());
    };
    r.count_shift = below(spectra.free.eigenvalues) - below(spectra.perturbed.eigenvalues);

    const SpectralDecomposition dd = herm_eig(d);
    r.spectrum.assign(dd.eigenvalues.data(), dd.eigenvalues.data() + dd.dim());
    for (double x : r.spectrum) {
        if (x >= 1.0 - options.cluster_tol) {
            ++r.dim_plus;
        } else if (x <= -1.0 + options.cluster_tol) {
            ++r.dim_minus;
        } else {
            r.middle_spectrum.push_back(x);
        }
    }
    r.min_eig = r.spectrum.front();
    r.max_eig = r.spectrum.back();
    if (!r.middle_spectrum.empty()) {
        r.middle_min = r.middle_spectrum.front();
        r.middle_max = r.middle_spectrum.back();
    }
    r.pairing_defect = pairing_defect(r.spectrum, options.pairing_delta, &r.pairing_count_mismatch);
    r.fill = fill_metrics(r.middle_spectrum, options.target_lower, options.target_upper);
    return r;
}

DifferenceReport projection_difference(const OperatorPair& pair, double lambda,
                                       const DifferenceOptions& options) {
    return projection_difference(decompose(pair), lambda, options);
}

double dsq_block_check(const PairSpectra& spectra, double lambda, double min_gap) {
    const ProjectionPair pp = projection_pair(spectra, lambda, min_gap);
    const auto n = pp.E0.rows();
    const CMatrix eye = CMatrix::Identity(n, n);
    const CMatrix& e0_minus = pp.E0;
    const CMatrix e0_plus = eye - pp.E0;
    const CMatrix& e_minus = pp.E;
    const CMatrix e_plus = eye - pp.E;
    const CMatrix d = pp.E - pp.E0;
    const CMatrix blocks = e0_minus * e_plus * e0_minus + e0_plus * e_minus * e0_plus;
    return (d * d - blocks).norm();
}

double dsq_block_check(const OperatorPair& pair, double lambda, double min_gap) {
    return dsq_block_check(decompose(pair), lambda, min_gap);
}

CornerSpectrum corner_spectrum(const PairSpectra& spectra, double lambda, int sign,
                               std::optional<double> target_upper, double min_gap) {
    if (sign != 1 && sign != -1) throw InvalidInput("corner_spectrum: sign must be +1 or -1");
    const PairSpectra centred = shift_spectra(spectra, lambda);
    require_gap(centred.free, 0.0, min_gap, "corner_spectrum");
    require_gap(centred.perturbed, 0.0, min_gap, "corner_spectrum");

    // E0(R+) E(R-) E0(R+) on Ran E0(R+) equals W*W with W = P*Q, Q spanning
    // Ran E0(R+) and P spanning Ran E(R-); likewise with signs exchanged.
    const CMatrix q = eigenbasis(centred.free, 0.0, sign < 0);
    const CMatrix p = eigenbasis(centred.perturbed, 0.0, sign > 0);

    CornerSpectrum out;
    out.sign = sign;
    const auto k = q.cols();
    std::vector<double> ev(static_cast<std::size_t>(k), 0.0);
    if (k > 0 && p.cols() > 0) {
        const RVector s = singular_values(p.adjoint() * q);
        for (Eigen::Index i = 0; i < s.size(); ++i) ev[i] = std::min(1.0, s(i) * s(i));
    }
    std::sort(ev.begin(), ev.end());
    out.eigenvalues = std::move(ev);
    if (target_upper) out.fill = fill_metrics(out.eigenvalues, 0.0, *target_upper);
    return out;
}

CornerSpectrum corner_spectrum(const OperatorPair& pair, double lambda, int sign,
                               std::optional<double> target_upper, double min_gap) {
    return corner_spectrum(decompose(pair), lambda, sign, target_upper, min_gap);
}

}  // namespace specdiff
