#pragma once

#include <limits>
#include <string>
#include <vector>

namespace specdiff {

enum class QuadratureKind {
    BoundedLegendre,   // Gauss-Legendre on [a, b]
    HalflineExpMapped, // t = -scale*log(1-u), u Gauss-Legendre on [0, 1]
    HalflineLaguerre,  // Gauss-Laguerre, weights rescaled by exp(t/scale)
    HalflineLogUniform // midpoint rule in u = log t over [t_min, t_max]
};

std::string to_string(QuadratureKind kind);
QuadratureKind quadrature_kind_from_string(const std::string& name);

struct QuadratureParams {
    double a = 0.0;   // bounded rules
    double b = 1.0;
    double scale = 1.0;  // exp-mapped and Laguerre rules
    double t_min = 1e-8; // log-uniform rule
    double t_max = 1e8;
};

struct Interval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();

    bool bounded() const { return upper < std::numeric_limits<double>::infinity(); }
    double length() const { return upper - lower; }
};

struct QuadratureRule {
    std::vector<double> nodes;   // strictly increasing
    std::vector<double> weights; // positive
    Interval support;
    QuadratureKind kind = QuadratureKind::BoundedLegendre;

    std::size_t size() const { return nodes.size(); }

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

QuadratureRule make_quadrature(QuadratureKind kind, int n, const QuadratureParams& params = {});

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Nodes/weights on (0, 1) via lambda = 1/(1+exp(-v)), v uniform on [v_lo, v_hi].
QuadratureRule logistic_unit_rule(int n, double v_lo, double v_hi);

/// Nodes/weights on (shift, inf) via lambda = shift + exp(v), v uniform on [v_lo, v_hi].
QuadratureRule shifted_log_rule(int n, double shift, double v_lo, double v_hi);

/// Concatenate rules with disjoint, ordered supports.
QuadratureRule concatenate(const QuadratureRule& lo, const QuadratureRule& hi);

/// Throws InvalidInput if nodes are not increasing or a weight is not positive.
void validate(const QuadratureRule& rule);

}  // namespace specdiff
