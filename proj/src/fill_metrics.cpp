#include "specdiff/fill_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace specdiff {

FillMetrics fill_metrics(std::vector<double> points, double lower, double upper) {
    std::sort(points.begin(), points.end());
    FillMetrics m;
    m.lower = lower;
    m.upper = upper;

    std::vector<double> inside;
    for (double p : points) {
        if (p >= lower && p <= upper) {
            inside.push_back(p);
        } else {
            m.overshoot = std::max(m.overshoot, p < lower ? lower - p : p - upper);
        }
    }
    m.points_inside = static_cast<int>(inside.size());
    if (inside.empty()) {
        m.max_gap = upper - lower;
        m.coverage_gap = upper - lower;
        // Points outside still bound the coverage from the nearest side.
        for (double p : points) {
            const double d = std::max(std::abs(p - lower), std::abs(p - upper));
            m.coverage_gap = std::min(m.coverage_gap, d);
        }
        return m;
    }
    for (std::size_t i = 1; i < inside.size(); ++i) {
        m.max_gap = std::max(m.max_gap, inside[i] - inside[i - 1]);
    }
    // dist(x, points) over the interval is maximised at an endpoint or midway
    // between consecutive points.
    auto dist_to_set = [&points](double x) {
        auto it = std::lower_bound(points.begin(), points.end(), x);
        double d = std::numeric_limits<double>::infinity();
        if (it != points.end()) d = std::min(d, *it - x);
        if (it != points.begin()) d = std::min(d, x - *(it - 1));
        return d;
    };
    m.coverage_gap = std::max(dist_to_set(lower), dist_to_set(upper));
    m.coverage_gap = std::max(m.coverage_gap, 0.5 * m.max_gap);
    return m;
}

double directed_distance(const std::vector<double>& from, const std::vector<double>& to) {
    if (from.empty()) return 0.0;
    if (to.empty()) return std::numeric_limits<double>::infinity();
    std::vector<double> sorted(to);
    std::sort(sorted.begin(), sorted.end());
    double worst = 0.0;
    for (double x : from) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
        double d = std::numeric_limits<double>::infinity();
        if (it != sorted.end()) d = std::min(d, *it - x);
        if (it != sorted.begin()) d = std::min(d, x - *(it - 1));
        worst = std::max(worst, d);
    }
    return worst;
}

double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() && b.empty()) return 0.0;
    return std::max(directed_distance(a, b), directed_distance(b, a));
}

double counting_breakpoint(std::vector<double> points, double floor) {
    std::sort(points.begin(), points.end(), std::greater<>());
    std::vector<double> xs;
    for (double p : points) {
        if (p >= floor) xs.push_back(p);
    }
    const auto k = static_cast<Eigen::Index>(xs.size());
    if (k < 4) return std::numeric_limits<double>::quiet_NaN();

    Eigen::VectorXd y(k);
    for (Eigen::Index i = 0; i < k; ++i) y(i) = static_cast<double>(i + 1);

    double best_b = std::numeric_limits<double>::quiet_NaN();
    double best_sse = std::numeric_limits<double>::infinity();
    // Candidate breakpoints: every interior point and midpoints between them.
    std::vector<double> candidates;
    for (Eigen::Index i = 1; i + 1 < k; ++i) {
        candidates.push_back(xs[i]);
        candidates.push_back(0.5 * (xs[i] + xs[i + 1]));
    }
    for (double b : candidates) {
        Eigen::MatrixXd design(k, 3);
        for (Eigen::Index i = 0; i < k; ++i) {
            design(i, 0) = 1.0;
            design(i, 1) = xs[i];
            design(i, 2) = std::max(0.0, b - xs[i]);
        }
        const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
        const double sse = (design * coef - y).squaredNorm();
        if (sse < best_sse) {
            best_sse = sse;
            best_b = b;
        }
    }
    return best_b;
}

}  // namespace specdiff
