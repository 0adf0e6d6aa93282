#include "specdiff/extrapolation.hpp"

#include <algorithm>
#include <cmath>

#include "specdiff/errors.hpp"

namespace specdiff {

std::vector<double> lagrange_weights_at_zero(const std::vector<double>& eps) {
    const std::size_t m = eps.size();
    std::vector<double> w(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) w[i] *= eps[j] / (eps[j] - eps[i]);
        }
    }
    return w;
}

namespace {

double combine(const std::vector<double>& w, const std::vector<double>& v, std::size_t offset) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * v[i + offset];
    return acc;
}

}  // namespace

Extrapolated extrapolate_to_zero(const std::vector<double>& eps, const std::vector<double>& values) {
    if (eps.size() != values.size() || eps.empty()) {
        throw InvalidInput("extrapolate_to_zero: ladder and values differ in length");
    }
    Extrapolated out;
    out.used = static_cast<int>(eps.size());
    if (eps.size() == 1) {
        out.value = values[0];
        out.error = std::abs(values[0]);
        return out;
    }
    out.value = combine(lagrange_weights_at_zero(eps), values, 0);
    const std::vector<double> tail(eps.begin() + 1, eps.end());
    out.error = std::abs(out.value - combine(lagrange_weights_at_zero(tail), values, 1));
    return out;
}

CMatrix extrapolate_to_zero(const std::vector<double>& eps, const std::vector<CMatrix>& values) {
    if (eps.size() != values.size() || eps.empty()) {
        throw InvalidInput("extrapolate_to_zero: ladder and values differ in length");
    }
    const std::vector<double> w = lagrange_weights_at_zero(eps);
    CMatrix acc = CMatrix::Zero(values[0].rows(), values[0].cols());
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * values[i];
    return acc;
}

std::vector<double> unwrap_phases(std::vector<double> phases) {
    for (std::size_t i = 1; i < phases.size(); ++i) {
        const double jump = phases[i] - phases[i - 1];
        phases[i] -= 2.0 * M_PI * std::round(jump / (2.0 * M_PI));
    }
    return phases;
}

double local_level_spacing(const RVector& eigenvalues, double lambda, int window) {
    const auto n = eigenvalues.size();
    if (n < 2) return 0.0;
    const auto w = std::min<Eigen::Index>(std::max(window, 2), n);
    Eigen::Index split = 0;
    while (split < n && eigenvalues(split) < lambda) ++split;
    Eigen::Index lo = std::clamp<Eigen::Index>(split - w / 2, 0, n - w);
    return (eigenvalues(lo + w - 1) - eigenvalues(lo)) / static_cast<double>(w - 1);
}

std::vector<int> admissible_members(const std::vector<double>& eps, double spacing, double kappa) {
    std::vector<int> keep;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] >= kappa * spacing) keep.push_back(static_cast<int>(i));
    }
    return keep;
}

void validate_ladder(const std::vector<double>& eps) {
    if (eps.empty()) throw InvalidInput("epsilon ladder is empty");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) {
            throw InvalidInput("epsilon ladder entries must be positive and finite");
        }
        if (i > 0 && !(eps[i] < eps[i - 1])) {
            throw InvalidInput("epsilon ladder must be strictly decreasing");
        }
    }
}

}  // namespace specdiff
