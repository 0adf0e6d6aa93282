#pragma once

#include <functional>
#include <string>
#include <vector>

#include "specdiff/fill_metrics.hpp"
#include "specdiff/linalg.hpp"
#include "specdiff/quadrature.hpp"

namespace specdiff {

/// Hankel kernel t -> K(t), values kdim x kdim Hermitian matrices.
struct HankelKernel {
    std::string name;
    int kdim = 1;
    std::function<CMatrix(double)> value;
};

HankelKernel scalar_kernel(std::string name, std::function<double(double)> k);

HankelKernel gamma0_kernel();    // e^{-t} / t
HankelKernel gamma_kernel();     // (1 - e^{-t}) / t
HankelKernel carleman_kernel();  // 1 / t

/// Largest K-dimension accepted by build_hankel unless overridden.
inline constexpr int kDefaultMaxKdim = 32;

struct HankelDiscretization {
    QuadratureRule rule;
    HankelKernel kernel;
    CMatrix matrix;  // block (i, j) = sqrt(w_i w_j) K(t_i + t_j)
};

HankelDiscretization build_hankel(const HankelKernel& kernel, const QuadratureRule& rule,
                                  int max_kdim = kDefaultMaxKdim);

/// Reciprocal-symmetric log-uniform rule on [e^{-u}, e^{u}] (n even).
QuadratureRule reciprocal_rule(int n, double u);

/// Grid used for the Gamma pair spectra: u in [-u, u]. The top of both
/// spectra sits near pi - O(1/u^2), so the log-range matters more than n.
QuadratureRule gamma_rule(int n, double u = 150.0);

/// Grid used for the Laplace factorizations and the U identities.
inline QuadratureRule factorization_rule(int n) { return reciprocal_rule(n, 44.0); }

/// Grid used for the Carleman reference: t in [t_min, e^{u_hi}], t_min chosen so
/// that t + s never drops below 1e-12.
QuadratureRule carleman_rule(int n, double u_hi = 40.0);

std::vector<double> sorted_eigenvalues(const CMatrix& hermitian);

struct GammaPair {
    HankelDiscretization gamma;
    HankelDiscretization gamma0;
    std::vector<double> gamma_spectrum;   // ascending
    std::vector<double> gamma0_spectrum;
    FillMetrics gamma_fill;               // against [0, pi]
    FillMetrics gamma0_fill;
    double hausdorff = 0.0;               // between the two spectra
    double carleman_residual = 0.0;       // |Gamma + Gamma0 - Carleman| on the same rule
};

GammaPair gamma_pair(const QuadratureRule& rule);

struct FactorizationReport {
    int lambda_nodes = 0;
    double gamma_residual = 0.0;    // |Gamma - N chi(0,1) N|, Frobenius
    double gamma0_residual = 0.0;   // |Gamma0 - N chi(1,inf) N|
    bool reciprocal = false;        // U identities only on reciprocal-symmetric grids
    double u_involution = 0.0;      // |U^2 - I|
    double u_conjugation = 0.0;     // |U N^2 U - N^2| / |N^2|
};

/// Both lambda rules use `lambda_nodes` points: logistic on (0, 1), shifted
/// log-uniform on (1, inf).
FactorizationReport laplace_factorizations(const QuadratureRule& rule, int lambda_nodes);

struct HankelBoundReport {
    std::string kernel;
    double constant = 0.0;
    double norm = 0.0;             // operator norm of the discretization
    double bound = 0.0;            // pi * C
    bool bound_holds = false;      // norm <= pi C + 1e-6
    double worst_sample_ratio = 0.0;  // max over samples of t |K(t)| / C
    double tail_small_t = 0.0;     // t |K(t)| at the smallest sampled t
    double tail_large_t = 0.0;     // t |K(t)| at the largest sampled t
    std::vector<double> singular_values;  // descending decay curve
};

/// Throws BoundViolation if |K(t)| <= C/t fails at a sampled argument.
HankelBoundReport hankel_bound_suite(const HankelDiscretization& disc, double constant);

struct CarlemanReport {
    int n = 0;
    double norm = 0.0;
    double min_argument = 0.0;  // smallest sampled t + s
};

CarlemanReport carleman_reference(int n, double u_hi = 40.0);

struct TraceBoundData {
    std::string name;
    int kdim = 1;
    std::function<CMatrix(double)> M;  // trace-class (here: finite) Hermitian valued
    QuadratureRule lambda_rule;
};

struct TraceBoundReport {
    double c2 = 0.0;                // sum_i w_i |M(lambda_i)|_1 / lambda_i
    double nuclear_norm = 0.0;      // sum of singular values of the assembled Hankel matrix
    double bound = 0.0;             // C2 / 2
    bool within = false;            // nuclear <= bound * 1.05
    double endpoint_low = 0.0;      // |M|_1 at the smallest lambda node
    double endpoint_high = 0.0;
};

/// Log-uniform lambda rule suited to trace-bound data.
QuadratureRule trace_lambda_rule(int n = 400);

/// Assemble K(t + s) = int e^{-lambda (t+s)} M(lambda) d lambda on the t-rule
/// and compare its nuclear norm with C2 / 2. Throws Divergent when the
/// integrand |M(lambda)|_1 does not vanish at either end of the log-lambda rule.
TraceBoundReport trace_bound_check(const TraceBoundData& data, const QuadratureRule& trule);

}  // namespace specdiff
