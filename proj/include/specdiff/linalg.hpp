#pragma once

// Dense numerical substrate: Hermitian eigendecomposition, SVD, semigroup
// action, Sylvester solver. Everything downstream is built on these.

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace specdiff {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Relative tolerances the eigensolver output is guaranteed to meet.
inline constexpr double kEigResidualTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

/// Eigenvalues ascending; eigenvectors as orthonormal columns.
struct SpectralDecomposition {
    RVector eigenvalues;
    CMatrix eigenvectors;

    Eigen::Index dim() const { return eigenvalues.size(); }
};

struct SingularValueDecomposition {
    RVector singular_values;  // descending
    CMatrix U;
    CMatrix V;
};

/// Throws InvalidInput when the matrix is empty or carries NaN/Inf.
void require_finite(const CMatrix& m, const char* name);

/// Frobenius norm of M - M*, relative to the Frobenius norm of M.
double hermitian_asymmetry(const CMatrix& m);

/// Operator (spectral) norm; exact via the largest singular value.
double op_norm(const CMatrix& m);

/// Operator norm of a Hermitian matrix: max |eigenvalue|.
double herm_op_norm(const CMatrix& m);

SpectralDecomposition herm_eig(const CMatrix& m);

/// Rebuild V diag(f(lambda)) V* from a decomposition.
CMatrix spectral_function(const SpectralDecomposition& d, const std::function<double(double)>& f);
CMatrix spectral_function_c(const SpectralDecomposition& d, const std::function<cplx(double)>& f);

SingularValueDecomposition svd(const CMatrix& m);
RVector singular_values(const CMatrix& m);

/// exp(tM) X for Hermitian M. Rejects when t*lambda exceeds the guard on a
/// growing mode.
CMatrix expm_apply(const CMatrix& m, double t, const CMatrix& x);

/// exp(tM) X restricted to the eigen-directions selected by keep(lambda);
/// the guard is applied only to kept modes.
CMatrix expm_apply(const SpectralDecomposition& d, double t, const CMatrix& x,
                   const std::function<bool(double)>& keep);

inline constexpr double kExpGuard = 700.0;

/// Solve A X - X B = C (Bartels-Stewart on complex Schur forms).
CMatrix sylvester_solve(const CMatrix& a, const CMatrix& b, const CMatrix& c);

/// Hermitian PSD square root with clipping of eigenvalues above -clip.
CMatrix psd_sqrt(const CMatrix& m, double clip = 1e-12);

/// (M - M*)/(2i).
CMatrix imag_part(const CMatrix& m);

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace specdiff
