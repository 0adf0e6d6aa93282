#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "specdiff/linalg.hpp"
#include "specdiff/quadrature.hpp"

namespace specdiff {

/// Model descriptor plus facts known exactly for the continuum model.
struct ModelFacts {
    std::string descriptor;
    std::map<std::string, double> exact;
};

/// H = H0 + G* V0 G with G : H-space -> K-space (rows index K).
struct OperatorPair {
    CMatrix H0;
    CMatrix H;
    CMatrix G;
    CMatrix V0;
    ModelFacts meta;

    Eigen::Index dim() const { return H0.rows(); }
    Eigen::Index aux_dim() const { return G.rows(); }
};

/// Eigendecompositions of both operators of a pair.
struct PairSpectra {
    SpectralDecomposition free;       // H0
    SpectralDecomposition perturbed;  // H
};

PairSpectra decompose(const OperatorPair& pair);

/// Relative residual |H - H0 - G*V0G| / (|H| + |H0|).
double factorization_residual(const OperatorPair& pair);

OperatorPair build_finite_pair(const CMatrix& h0, const CMatrix& g, const CMatrix& v0,
                               ModelFacts meta = {});

// ---------------------------------------------------------------------------
// Krein's half-line example

double krein_kernel_free(double x, double y);
double krein_kernel_perturbed(double x, double y);

struct KreinModel {
    QuadratureRule rule;         // Gauss-Legendre on [0, L]
    double truncation = 0.0;     // L
    std::vector<double> edges;   // cell boundaries, cumulative weights
    OperatorPair pair;
};

/// Cell-averaged (Galerkin) discretization on the cells induced by the
/// Gauss-Legendre rule: entries (w_i w_j)^{-1/2} times the exact kernel
/// integral over cell_i x cell_j.
KreinModel build_krein_model(int n, double truncation);
inline OperatorPair build_krein(int n, double truncation) {
    return build_krein_model(n, truncation).pair;
}

// ---------------------------------------------------------------------------
// One-dimensional Schrodinger operators on a Dirichlet box

struct PotentialSpec {
    std::string name;
    std::function<double(double)> potential;
    double bound_constant = 1.0;   // C in |V(x)| <= C (1+|x|)^{-rho}
    double decay_exponent = 2.0;   // rho
    double half_width = 40.0;      // X
    int grid_size = 800;           // interior points
    std::vector<double> breakpoints;  // discontinuities of V, if any
    /// Sites with |V| at or below cutoff * max|V| are dropped from the auxiliary space.
    double support_cutoff = 1e-12;
};

/// Throws BoundViolation at the first grid point breaking the declared bound.
void check_decay(const PotentialSpec& spec);

std::vector<double> schrodinger_grid(const PotentialSpec& spec);

/// Grid indices kept in the auxiliary space (|V| above the support cutoff).
std::vector<int> schrodinger_support(const PotentialSpec& spec);

OperatorPair build_schrodinger_1d(const PotentialSpec& spec);

// ---------------------------------------------------------------------------

/// Resolvent image of a pair: h = (H - a)^{-1}, h0 = (H0 - a)^{-1},
/// h - h0 = g* v0 g with g = G h0 and v0 = -V0 + V0 G h G* V0.
struct ResolventTransform {
    double shift = 0.0;
    OperatorPair transformed;

    double mu(double lambda) const { return 1.0 / (lambda - shift); }
    double lambda_of(double mu) const { return shift + 1.0 / mu; }
    /// |d mu / d lambda| at lambda.
    double jacobian(double lambda) const { return 1.0 / ((lambda - shift) * (lambda - shift)); }
};

ResolventTransform resolvent_transform(const OperatorPair& pair, double shift);

/// Translate both operators by -lambda0; G and V0 unchanged.
OperatorPair shift_pair(const OperatorPair& pair, double lambda0);
PairSpectra shift_spectra(const PairSpectra& spectra, double lambda0);

}  // namespace specdiff
