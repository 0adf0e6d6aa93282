#include "specdiff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specdiff/errors.hpp"

#ifdef SPECDIFF_HAVE_LAPACKE
// Map LAPACKE's complex type to std::complex so that <complex.h> (and its
// `I` macro) stays out of the translation unit.
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

namespace specdiff {

namespace {

bool is_real(const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

// Eigenvalues ascending and, with `vectors`, orthonormal eigenvectors of a
// Hermitian matrix. Divide and conquer through LAPACK when available.
void real_symmetric_eig(RMatrix a, bool vectors, RVector& values, RMatrix* vecs) {
#ifdef SPECDIFF_HAVE_LAPACKE
    const auto n = static_cast<lapack_int>(a.rows());
    values.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, values.data());
    if (info != 0) throw Error("herm_eig: dsyevd failed (info " + std::to_string(info) + ")");
    if (vectors) *vecs = std::move(a);
#else
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(a, vectors ? Eigen::ComputeEigenvectors
                                                             : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("herm_eig: eigensolver failed");
    values = solver.eigenvalues();
    if (vectors) *vecs = solver.eigenvectors();
#endif
}

void complex_hermitian_eig(CMatrix a, bool vectors, RVector& values, CMatrix* vecs) {
#ifdef SPECDIFF_HAVE_LAPACKE
    const auto n = static_cast<lapack_int>(a.rows());
    values.resize(n);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, values.data());
    if (info != 0) throw Error("herm_eig: zheevd failed (info " + std::to_string(info) + ")");
    if (vectors) *vecs = std::move(a);
#else
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, vectors ? Eigen::ComputeEigenvectors
                                                             : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("herm_eig: eigensolver failed");
    values = solver.eigenvalues();
    if (vectors) *vecs = solver.eigenvectors();
#endif
}

RVector hermitian_eigenvalues(const CMatrix& m) {
    RVector values;
    if (is_real(m)) {
        real_symmetric_eig(0.5 * (m.real() + m.real().transpose()), false, values, nullptr);
    } else {
        complex_hermitian_eig(hermitian_part(m), false, values, nullptr);
    }
    return values;
}

}  // namespace

void require_finite(const CMatrix& m, const char* name) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw InvalidInput(std::string(name) + ": empty matrix");
    }
    if (!m.allFinite()) {
        throw InvalidInput(std::string(name) + ": non-finite entries");
    }
}

double hermitian_asymmetry(const CMatrix& m) {
    const double scale = m.norm();
    if (scale == 0.0) return 0.0;
    return (m - m.adjoint()).norm() / scale;
}

double op_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<CMatrix> solver(m);
    return solver.singularValues().size() > 0 ? solver.singularValues()(0) : 0.0;
}

double herm_op_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return hermitian_eigenvalues(m).cwiseAbs().maxCoeff();
}

SpectralDecomposition herm_eig(const CMatrix& m) {
    require_finite(m, "herm_eig");
    if (m.rows() != m.cols()) {
        throw InvalidInput("herm_eig: matrix is not square");
    }
    const double asym = hermitian_asymmetry(m);
    if (asym > kHermitianTol) {
        std::ostringstream os;
        os << "herm_eig: matrix is not Hermitian (relative asymmetry " << asym << ")";
        throw NotHermitian(os.str(), asym);
    }

    SpectralDecomposition out;
    if (is_real(m)) {
        RMatrix vecs;
        real_symmetric_eig(0.5 * (m.real() + m.real().transpose()), true, out.eigenvalues, &vecs);
        out.eigenvectors = vecs.cast<cplx>();
    } else {
        complex_hermitian_eig(hermitian_part(m), true, out.eigenvalues, &out.eigenvectors);
    }
    return out;
}

CMatrix spectral_function(const SpectralDecomposition& d, const std::function<double(double)>& f) {
    RVector fv(d.dim());
    for (Eigen::Index k = 0; k < d.dim(); ++k) fv(k) = f(d.eigenvalues(k));
    return d.eigenvectors * fv.asDiagonal() * d.eigenvectors.adjoint();
}

CMatrix spectral_function_c(const SpectralDecomposition& d, const std::function<cplx(double)>& f) {
    CVector fv(d.dim());
    for (Eigen::Index k = 0; k < d.dim(); ++k) fv(k) = f(d.eigenvalues(k));
    return d.eigenvectors * fv.asDiagonal() * d.eigenvectors.adjoint();
}

SingularValueDecomposition svd(const CMatrix& m) {
    require_finite(m, "svd");
    Eigen::BDCSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {solver.singularValues(), solver.matrixU(), solver.matrixV()};
}

RVector singular_values(const CMatrix& m) {
    require_finite(m, "singular_values");
    Eigen::BDCSVD<CMatrix> solver(m);
    return solver.singularValues();
}

CMatrix expm_apply(const CMatrix& m, double t, const CMatrix& x) {
    if (m.cols() != x.rows()) throw InvalidInput("expm_apply: dimension mismatch");
    if (!std::isfinite(t)) throw InvalidInput("expm_apply: non-finite t");
    const SpectralDecomposition d = herm_eig(m);
    return expm_apply(d, t, x, [](double) { return true; });
}

CMatrix expm_apply(const SpectralDecomposition& d, double t, const CMatrix& x,
                   const std::function<bool(double)>& keep) {
    if (d.dim() != x.rows()) throw InvalidInput("expm_apply: dimension mismatch");
    RVector factor = RVector::Zero(d.dim());
    for (Eigen::Index k = 0; k < d.dim(); ++k) {
        const double lam = d.eigenvalues(k);
        if (!keep(lam)) continue;
        const double exponent = t * lam;
        if (exponent > kExpGuard) {
            std::ostringstream os;
            os << "expm_apply: growing mode t*lambda = " << exponent << " exceeds guard";
            throw OverflowGuard(os.str(), exponent);
        }
        factor(k) = std::exp(exponent);
    }
    const CMatrix coeff = d.eigenvectors.adjoint() * x;
    return d.eigenvectors * (factor.asDiagonal() * coeff);
}

CMatrix sylvester_solve(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    require_finite(a, "sylvester_solve(A)");
    require_finite(b, "sylvester_solve(B)");
    require_finite(c, "sylvester_solve(C)");
    if (a.rows() != a.cols() || b.rows() != b.cols() || c.rows() != a.rows() ||
        c.cols() != b.rows()) {
        throw InvalidInput("sylvester_solve: dimension mismatch");
    }

    const double scale = std::max({a.norm(), b.norm(), std::numeric_limits<double>::min()});
    auto require_disjoint = [scale](const CVector& alpha, const CVector& beta) {
        double min_gap = std::numeric_limits<double>::infinity();
        double nearest = 0.0;
        for (Eigen::Index i = 0; i < alpha.size(); ++i) {
            for (Eigen::Index j = 0; j < beta.size(); ++j) {
                const double gap = std::abs(alpha(i) - beta(j));
                if (gap < min_gap) {
                    min_gap = gap;
                    nearest = alpha(i).real();
                }
            }
        }
        if (min_gap < 1e-8 * scale) {
            std::ostringstream os;
            os << "sylvester_solve: spectra of A and B collide (gap " << min_gap << ")";
            throw SpectralCollision(os.str(), nearest, min_gap);
        }
    };

    if (hermitian_asymmetry(a) <= kHermitianTol && hermitian_asymmetry(b) <= kHermitianTol) {
        // Schur forms of Hermitian matrices are diagonal.
        const SpectralDecomposition da = herm_eig(a), db = herm_eig(b);
        const CVector alpha = da.eigenvalues.cast<cplx>(), beta = db.eigenvalues.cast<cplx>();
        require_disjoint(alpha, beta);
        CMatrix y = da.eigenvectors.adjoint() * c * db.eigenvectors;
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, j) /= alpha(i) - beta(j);
        }
        return da.eigenvectors * y * db.eigenvectors.adjoint();
    }

    Eigen::ComplexSchur<CMatrix> sa(a), sb(b);
    const CMatrix& ta = sa.matrixT();
    const CMatrix& tb = sb.matrixT();
    require_disjoint(ta.diagonal(), tb.diagonal());

    const CMatrix f = sa.matrixU().adjoint() * c * sb.matrixU();
    const Eigen::Index n = tb.rows();
    CMatrix y(ta.rows(), n);
    const Eigen::Index m = ta.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        CVector rhs = f.col(j);
        if (j > 0) rhs.noalias() += y.leftCols(j) * tb.col(j).head(j);
        // Back substitution with (T_A - beta_j I), upper triangular.
        const cplx beta = tb(j, j);
        for (Eigen::Index i = m - 1; i >= 0; --i) {
            cplx acc = rhs(i);
            if (i + 1 < m) {
                acc -= ta.row(i).segment(i + 1, m - i - 1).transpose().cwiseProduct(
                           y.col(j).segment(i + 1, m - i - 1)).sum();
            }
            y(i, j) = acc / (ta(i, i) - beta);
        }
    }
    return sa.matrixU() * y * sb.matrixU().adjoint();
}

CMatrix psd_sqrt(const CMatrix& m, double clip) {
    const SpectralDecomposition d = herm_eig(hermitian_part(m));
    for (Eigen::Index k = 0; k < d.dim(); ++k) {
        if (d.eigenvalues(k) < -clip * std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff())) {
            std::ostringstream os;
            os << "psd_sqrt: eigenvalue " << d.eigenvalues(k) << " below clipping threshold";
            throw InvalidInput(os.str());
        }
    }
    return spectral_function(d, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

CMatrix imag_part(const CMatrix& m) { return (m - m.adjoint()) / cplx(0.0, 2.0); }

}  // namespace specdiff
