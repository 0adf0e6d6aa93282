#pragma once

#include <optional>
#include <vector>

#include "specdiff/fill_metrics.hpp"
#include "specdiff/operator_models.hpp"

namespace specdiff {

/// Minimum distance between a probe and any eigenvalue of either operator.
inline constexpr double kProbeGap = 1e-8;

/// Distance from lambda to the nearest eigenvalue; `nearest` receives it.
double spectral_gap(const SpectralDecomposition& d, double lambda, double* nearest = nullptr);

/// Throws SpectralCollision if an eigenvalue lies within min_gap of lambda.
void require_gap(const SpectralDecomposition& d, double lambda, double min_gap, const char* who);

/// Orthogonal projection onto eigenvectors with eigenvalue < lambda.
CMatrix spectral_projection(const SpectralDecomposition& d, double lambda,
                            double min_gap = kProbeGap);

/// Eigenvectors with eigenvalue below (below = true) or above lambda.
CMatrix eigenbasis(const SpectralDecomposition& d, double lambda, bool below);

struct ProjectionPair {
    CMatrix E0;
    CMatrix E;
    double probe = 0.0;
    double gap_free = 0.0;
    double gap_perturbed = 0.0;
};

ProjectionPair projection_pair(const PairSpectra& spectra, double lambda,
                               double min_gap = kProbeGap);

/// max(|P^2 - P|, |P - P*|) in Frobenius norm.
double idempotency_defect(const CMatrix& p);

struct DifferenceOptions {
    double cluster_tol = 1e-6;    // eigenvalues within this of +-1 span H+ / H-
    double pairing_delta = 1e-6;  // exclusion window near 0 and +-1 for pairing
    double target_lower = -1.0;   // fill-in target interval for the middle spectrum
    double target_upper = 1.0;
    double min_gap = kProbeGap;
};

struct DifferenceReport {
    double probe = 0.0;
    int dim = 0;
    std::vector<double> spectrum;         // all eigenvalues of D, ascending
    std::vector<double> middle_spectrum;  // spectrum without the +-1 clusters
    int dim_plus = 0;
    int dim_minus = 0;
    int count_shift = 0;             // #{eig H0 < lambda} - #{eig H < lambda} = -trace D
    double trace = 0.0;              // numerical trace of D
    double pairing_defect = 0.0;
    int pairing_count_mismatch = 0;
    double idempotency_defect = 0.0; // worst of E0, E
    double min_eig = 0.0;
    double max_eig = 0.0;
    double middle_min = 0.0;
    double middle_max = 0.0;
    FillMetrics fill;                // middle spectrum vs target interval
};

DifferenceReport projection_difference(const PairSpectra& spectra, double lambda,
                                       const DifferenceOptions& options = {});
DifferenceReport projection_difference(const OperatorPair& pair, double lambda,
                                       const DifferenceOptions& options = {});

/// Pairing defect of a sorted spectrum: worst distance from -x to the spectrum
/// over x in (-1+delta, 1-delta) with |x| >= delta; counts mismatch on the side.
double pairing_defect(const std::vector<double>& spectrum, double delta, int* count_mismatch);

/// |D^2 - (E0- E+ E0- + E0+ E- E0+)| in Frobenius norm.
double dsq_block_check(const PairSpectra& spectra, double lambda, double min_gap = kProbeGap);
double dsq_block_check(const OperatorPair& pair, double lambda, double min_gap = kProbeGap);

struct CornerSpectrum {
    int sign = +1;
    std::vector<double> eigenvalues;  // ascending, in [0, 1]
    std::optional<FillMetrics> fill;  // against [0, target_upper] when supplied
};

/// Spectrum of E0(R+-) E(R-+) E0(R+-) compressed to Ran E0(R+-), with the
/// probe recentred to 0.
CornerSpectrum corner_spectrum(const PairSpectra& spectra, double lambda, int sign,
                               std::optional<double> target_upper = std::nullopt,
                               double min_gap = kProbeGap);
CornerSpectrum corner_spectrum(const OperatorPair& pair, double lambda, int sign,
                               std::optional<double> target_upper = std::nullopt,
                               double min_gap = kProbeGap);

}  // namespace specdiff
