#pragma once

#include <vector>

#include "specdiff/operator_models.hpp"
#include "specdiff/quadrature.hpp"

namespace specdiff {

/// Discrete Z0 = [e^{-t_i H0} E0(R+) G* sqrt(w_i)]_i and Z = [e^{t_i H} E(R-) G* sqrt(w_i)]_i,
/// columns ordered node-major (i * k + a).
struct ZOperators {
    QuadratureRule trule;
    CMatrix Z0;
    CMatrix Z;
    double gap = 0.0;        // distance from 0 to both spectra
    double radius = 0.0;     // largest |eigenvalue| of either operator
    Eigen::Index kdim = 0;
};

/// Log-uniform t-rule on [1e-10 / radius, 40 / gap].
QuadratureRule default_trule(double gap, double radius, int n = 120);

/// `pair` is recentred by -lambda0 before the build; the gap at 0 must exceed 1e-8.
ZOperators build_z_ops(const OperatorPair& pair, const QuadratureRule& trule, double lambda0 = 0.0);
ZOperators build_z_ops(const OperatorPair& pair, const PairSpectra& spectra,
                       const QuadratureRule& trule, double lambda0 = 0.0);

/// Operator norms of Z0 and Z.
std::pair<double, double> z_norms(const ZOperators& z);

struct ProductReport {
    double residual_direct = 0.0;  // |E(R-)E0(R+) + Z (V0 x I) Z0*|
    double residual_oracle = 0.0;  // |X + E(R-)E0(R+)|, X from the Sylvester equation
    double sylvester_residual = 0.0;
    double representation_residual = 0.0;  // |E0+ E- E0+ - (Z0 V0 Z*)(Z V0 Z0*)|
    bool direct_computed = false;          // false for the oracle-only route
    int t_nodes = 0;
    std::vector<double> direct_history;    // residual_direct per doubling
    double gap = 0.0;
};

struct ProductOptions {
    int initial_nodes = 120;
    int max_doublings = 4;
    double stabilize = 0.1;     // stop when consecutive residuals differ by less than 10%
    double floor = 1e-12;       // or when the residual is already at roundoff
};

/// Adaptive in the t-rule; the Sylvester route is quadrature-free.
ProductReport product_check(const OperatorPair& pair, double lambda0 = 0.0, const ProductOptions& options = {});
ProductReport product_check(const OperatorPair& pair, const PairSpectra& spectra, double lambda0,
                  const ProductOptions& options = {});
/// Fixed t-rule variant.
ProductReport product_check(const OperatorPair& pair, const QuadratureRule& trule, double lambda0 = 0.0);
/// Sylvester route only; for pairs whose Z matrices would be too large to form.
ProductReport product_oracle(const OperatorPair& pair, double lambda0 = 0.0);
ProductReport product_oracle(const OperatorPair& pair, const PairSpectra& spectra, double lambda0);

/// Largest dim * t-nodes * K-dimension for which Z and Z0 are formed.
inline constexpr double kZMaxEntries = 2e7;

struct GramComparisonReport {
    int t_nodes = 0;
    std::vector<double> eps_used;
    std::vector<double> free_singular_values;       // of Z0*Z0 - Gamma x F0'(0)
    std::vector<double> perturbed_singular_values;  // of Z*Z - Gamma x F'(0)
    double free_gram_norm = 0.0;                    // |Z0*Z0|
    double perturbed_gram_norm = 0.0;
    double free_ratio = 0.0;                        // sigma_1 / |Z0*Z0|
    double perturbed_ratio = 0.0;
    double free_decay_exponent = 0.0;               // slope of log sigma_k vs log k
    double perturbed_decay_exponent = 0.0;
    std::vector<double> free_partial_nuclear;       // cumulative sums of sigma_k
    std::vector<double> perturbed_partial_nuclear;
    double gram_psd_defect = 0.0;                   // most negative eigenvalue of either Gram
};

/// Largest t-nodes * K-dimension for which the Gram matrices are formed.
inline constexpr Eigen::Index kGramMaxColumns = 4000;

GramComparisonReport gram_comparison(const OperatorPair& pair, const QuadratureRule& trule,
                               const std::vector<double>& eps, double lambda0 = 0.0,
                               double kappa = 1.0);

/// Gamma_t(i, j) = sqrt(w_i w_j) (1 - e^{-(t_i + t_j)}) / (t_i + t_j).
CMatrix gamma_on_rule(const QuadratureRule& trule);

/// Least-squares slope of log sigma_k against log k over the leading `count` values.
double decay_exponent(const std::vector<double>& sigma, int count = 20);

}  // namespace specdiff
