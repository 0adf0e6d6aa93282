#pragma once

#include <vector>

#include "specdiff/linalg.hpp"

namespace specdiff {

/// Default smoothing ladder, strictly decreasing.
inline const std::vector<double> kStandardLadder = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

/// Lagrange weights w_i with sum_i w_i p(eps_i) = p(0) for polynomials of
/// degree < eps.size().
std::vector<double> lagrange_weights_at_zero(const std::vector<double>& eps);

struct Extrapolated {
    double value = 0.0;
    double error = 0.0;  // |full - extrapolation without the coarsest member|
    int used = 0;
};

/// Polynomial (Richardson) extrapolation of value(eps) to eps = 0.
Extrapolated extrapolate_to_zero(const std::vector<double>& eps, const std::vector<double>& values);

/// Elementwise version for matrices sharing a shape.
CMatrix extrapolate_to_zero(const std::vector<double>& eps, const std::vector<CMatrix>& values);

/// Shift each phase by a multiple of 2*pi to lie within pi of its predecessor.
std::vector<double> unwrap_phases(std::vector<double> phases);

/// Mean spacing of the `window` eigenvalues nearest to lambda (ascending input).
double local_level_spacing(const RVector& eigenvalues, double lambda, int window = 6);

/// Ladder members with eps >= kappa * spacing, in the original order.
std::vector<int> admissible_members(const std::vector<double>& eps, double spacing, double kappa);

/// Throws InvalidInput unless eps is positive and strictly decreasing.
void validate_ladder(const std::vector<double>& eps);

}  // namespace specdiff
