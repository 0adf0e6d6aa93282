#pragma once

#include <array>

#include "specdiff/operator_models.hpp"

namespace specdiff {

/// Two-channel scattering data of -u'' + V u = lambda u on the line, with V
/// taken as zero outside [-X, X].
struct TransferMatrixResult {
    double lambda = 0.0;
    double k = 0.0;
    cplx t;            // transmission (left incidence)
    cplx t_right;      // transmission (right incidence); equals t by reciprocity
    cplx r_left;       // reflection of a wave incident from the left
    cplx r_right;      // reflection of a wave incident from the right
    Eigen::Matrix2cd S;           // [[t, r_right], [r_left, t]]
    std::array<cplx, 2> eigenvalues;
    std::array<double, 2> phases;  // in [0, 2 pi), by |e - 1| descending
    double flux_defect = 0.0;      // | |r|^2 + |t|^2 - 1 |
    double unitarity_defect = 0.0; // |S* S - I|
    double reciprocity_defect = 0.0;
    double a = 0.0;                // |S - I| / 2
};

struct TransferOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double boundary_tol = 1e-10;  // |V(+-X)| allowed at the box ends
};

TransferMatrixResult transfer_matrix_smatrix(const PotentialSpec& spec, double lambda,
                                             const TransferOptions& options = {});

/// Continuum F0'(lambda) on the auxiliary grid: h |V_i|^{1/2} |V_j|^{1/2}
/// cos(k (x_i - x_j)) / (2 pi k), the Gram matrix of the two plane-wave channels.
CMatrix fiber_density(const PotentialSpec& spec, double lambda);

/// Relative Frobenius distance between fiber_density and a smoothed F0'.
double fiber_consistency(const PotentialSpec& spec, double lambda, const CMatrix& f0prime);

}  // namespace specdiff
