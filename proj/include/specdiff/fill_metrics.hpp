#pragma once

#include <vector>

namespace specdiff {

/// How well a finite eigenvalue set fills a target interval.
struct FillMetrics {
    double lower = 0.0;          // target interval
    double upper = 0.0;
    double max_gap = 0.0;        // largest gap between consecutive points inside [lower, upper]
    double coverage_gap = 0.0;   // sup over x in [lower, upper] of dist(x, points)
    double overshoot = 0.0;      // largest distance of a point outside [lower, upper]
    int points_inside = 0;
};

FillMetrics fill_metrics(std::vector<double> points, double lower, double upper);

/// Symmetric Hausdorff distance between two finite sets (+inf if exactly one is empty).
double hausdorff(const std::vector<double>& a, const std::vector<double>& b);

/// Largest distance from a point of `from` to the set `to`.
double directed_distance(const std::vector<double>& from, const std::vector<double>& to);

/// Least-squares two-segment fit of the counting function N(x) = #{p >= x} over
/// the points above `floor`; returns the breakpoint with the smallest residual.
double counting_breakpoint(std::vector<double> points, double floor);

}  // namespace specdiff
