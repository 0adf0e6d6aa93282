#pragma once

#include <vector>

#include "specdiff/operator_models.hpp"

namespace specdiff {

/// T0(z) = G (H0 - z)^{-1} G*, T(z) = G (H - z)^{-1} G*.
struct ResolventSandwich {
    cplx z;
    CMatrix T0;
    CMatrix T;
    double resolvent_residual = 0.0;  // |T - T0 (I + V0 T0)^{-1}|, Frobenius
    double condition = 1.0;     // 2-norm condition number of I + V0 T0
    double imag_psd_defect = 0.0;  // most negative eigenvalue of Im T0, Im T (clipped at 0)
};

enum class SandwichRoute { Direct, Spectral };

/// Direct LU solves against H0 - z and H - z.
ResolventSandwich resolvent_sandwich(const OperatorPair& pair, cplx z, double cond_limit = 1e12);
/// Same quantities through precomputed eigendecompositions.
ResolventSandwich resolvent_sandwich(const OperatorPair& pair, const PairSpectra& spectra, cplx z,
                                     double cond_limit = 1e12);

struct SmoothedDensity {
    double lambda = 0.0;
    double eps = 0.0;
    CMatrix F0prime;  // Im T0(lambda + i eps) / pi
    CMatrix Fprime;   // Im T(lambda + i eps) / pi
};

SmoothedDensity smoothed_density(const OperatorPair& pair, double lambda, double eps);
SmoothedDensity smoothed_density(const OperatorPair& pair, const PairSpectra& spectra,
                                 double lambda, double eps);

struct ScatteringOptions {
    double retention_factor = 10.0;  // threshold = max(factor * unitarity defect, floor)
    double retention_floor = 0.0;
    double cond_limit = 1e12;
    SandwichRoute route = SandwichRoute::Spectral;
};

struct ScatteringBundle {
    double lambda = 0.0;
    double eps = 0.0;
    CMatrix F0prime;
    CMatrix Fprime;
    CMatrix Stilde;
    CMatrix A;
    std::vector<cplx> s_eigenvalues;  // all eigenvalues of Stilde, by |e - 1| descending
    std::vector<double> phases;       // retained phases in [0, 2 pi), same order
    double retention_threshold = 0.0;
    double unitarity_defect = 0.0;    // |Stilde* Stilde - I|, operator norm
    double a_from_s = 0.0;            // |Stilde - I| / 2
    double a_from_a = 0.0;            // |A|^{1/2}
    double a_norm = 0.0;              // |A|
    double a_identity_residual = 0.0; // |(Stilde - I)*(Stilde - I)/4 - A|, Frobenius
    double resolvent_residual = 0.0;
    double condition = 1.0;
    double xi_smoothed = 0.0;         // Poisson-smoothed spectral shift at (lambda, eps)

    int fiber_dim() const { return static_cast<int>(phases.size()); }
};

/// S~ and A at (lambda, eps), with eigenphases and all identity residuals.
ScatteringBundle scattering_bundle(const OperatorPair& pair, const PairSpectra& spectra,
                                   double lambda, double eps, const ScatteringOptions& options = {});
ScatteringBundle tilde_s(const OperatorPair& pair, double lambda, double eps,
                         const ScatteringOptions& options = {});
ScatteringBundle a_matrix(const OperatorPair& pair, double lambda, double eps,
                          const ScatteringOptions& options = {});

struct Predictions {
    double a = 0.0;
    std::vector<double> band_edges;  // sin(theta_n / 2), descending
};

Predictions phase_predictions(const std::vector<double>& phases);
Predictions phase_predictions(const ScatteringBundle& bundle);

/// (1/pi) sum_k [atan((lambda - mu0_k)/eps) - atan((lambda - mu_k)/eps)].
double smoothed_spectral_shift(const PairSpectra& spectra, double lambda, double eps);

// ---------------------------------------------------------------------------

struct LadderMember {
    double eps = 0.0;
    bool admissible = false;
    double unitarity_defect = 0.0;
    double retention_threshold = 0.0;
    double a_from_s = 0.0;
    double a_norm = 0.0;
    double a_identity_residual = 0.0;
    double resolvent_residual = 0.0;
    double condition = 1.0;
    double xi_smoothed = 0.0;
    std::vector<double> phases;
};

struct LadderOptions {
    ScatteringOptions scattering;
    double kappa = 1.0;                 // admissible when eps >= kappa * level spacing
    double monotone_slack = 1e-10;      // roundoff allowance for the unitarity diagnostic
    bool keep_densities = false;        // extrapolate F0', F' elementwise as well
};

struct ScatteringLadder {
    double lambda = 0.0;
    double level_spacing = 0.0;
    std::vector<LadderMember> members;
    std::vector<double> eps_used;       // admissible members entering extrapolation
    bool fallback = false;              // no member admissible; all members used
    std::vector<double> phases;         // extrapolated, by rank
    std::vector<double> phase_errors;
    double a = 0.0;                     // extrapolated |S~ - I| / 2
    double a_error = 0.0;
    double a_norm = 0.0;                // extrapolated |A|
    double xi_smoothed = 0.0;
    double xi_error = 0.0;
    bool unitarity_monotone = true;
    CMatrix F0prime;                    // only with keep_densities
    CMatrix Fprime;

    Predictions predictions() const { return phase_predictions(phases); }
};

ScatteringLadder scattering_ladder(const OperatorPair& pair, const PairSpectra& spectra,
                                   double lambda, const std::vector<double>& eps,
                                   const LadderOptions& options = {});

struct BirmanKreinResult {
    int xi = 0;                 // -trace D(lambda), an integer count
    cplx det_s;                 // product of extrapolated retained eigenvalues
    double defect = 0.0;        // |det S - exp(-2 pi i xi)|
    double xi_smoothed = 0.0;   // extrapolated smoothed shift
    double defect_smoothed = 0.0;
};

BirmanKreinResult birman_krein_check(const PairSpectra& spectra, double lambda,
                                     const ScatteringLadder& ladder);
BirmanKreinResult birman_krein_check(const OperatorPair& pair, double lambda,
                                     const std::vector<double>& eps,
                                     const LadderOptions& options = {});

}  // namespace specdiff
