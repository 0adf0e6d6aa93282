#include "specdiff/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "specdiff/errors.hpp"

namespace specdiff {

std::string to_string(QuadratureKind kind) {
    switch (kind) {
        case QuadratureKind::BoundedLegendre: return "bounded-legendre";
        case QuadratureKind::HalflineExpMapped: return "halfline-exp-mapped";
        case QuadratureKind::HalflineLaguerre: return "halfline-laguerre-like";
        case QuadratureKind::HalflineLogUniform: return "halfline-log-uniform";
    }
    return "unknown";
}

QuadratureKind quadrature_kind_from_string(const std::string& name) {
    if (name == "bounded-legendre") return QuadratureKind::BoundedLegendre;
    if (name == "halfline-exp-mapped") return QuadratureKind::HalflineExpMapped;
    if (name == "halfline-laguerre-like") return QuadratureKind::HalflineLaguerre;
    if (name == "halfline-log-uniform") return QuadratureKind::HalflineLogUniform;
    throw InvalidInput("unsupported quadrature kind: " + name);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

namespace {

QuadratureRule legendre_on(int n, double a, double b) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.kind = QuadratureKind::BoundedLegendre;
    rule.support = {a, b};
    const double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(a + half * (x[i] + 1.0));
        rule.weights.push_back(half * w[i]);
    }
    return rule;
}

QuadratureRule exp_mapped(int n, double scale) {
    if (!(scale > 0.0)) throw InvalidInput("halfline-exp-mapped: scale must be positive");
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.kind = QuadratureKind::HalflineExpMapped;
    rule.support = {0.0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (x[i] + 1.0);
        const double one_minus_u = 0.5 * (1.0 - x[i]);
        rule.nodes.push_back(-scale * std::log1p(-u));
        rule.weights.push_back(scale * 0.5 * w[i] / one_minus_u);
    }
    return rule;
}

QuadratureRule laguerre(int n, double scale) {
    if (!(scale > 0.0)) throw InvalidInput("halfline-laguerre-like: scale must be positive");
    if (n > 150) throw InvalidInput("halfline-laguerre-like: n > 150 loses weight accuracy");
    // Golub-Welsch on the Laguerre Jacobi matrix.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        jac(i, i) = 2.0 * i + 1.0;
        if (i + 1 < n) jac(i, i + 1) = jac(i + 1, i) = i + 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
    QuadratureRule rule;
    rule.kind = QuadratureKind::HalflineLaguerre;
    rule.support = {0.0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < n; ++i) {
        const double t = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.nodes.push_back(scale * t);
        rule.weights.push_back(scale * v0 * v0 * std::exp(t));
    }
    return rule;
}

QuadratureRule log_uniform(int n, double t_min, double t_max) {
    if (!(t_min > 0.0) || !(t_max > t_min)) {
        throw InvalidInput("halfline-log-uniform: need 0 < t_min < t_max");
    }
    const double u_lo = std::log(t_min);
    const double u_hi = std::log(t_max);
    const double h = (u_hi - u_lo) / n;
    QuadratureRule rule;
    rule.kind = QuadratureKind::HalflineLogUniform;
    rule.support = {0.0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < n; ++i) {
        const double t = std::exp(u_lo + (i + 0.5) * h);
        rule.nodes.push_back(t);
        rule.weights.push_back(h * t);
    }
    return rule;
}

}  // namespace

QuadratureRule make_quadrature(QuadratureKind kind, int n, const QuadratureParams& params) {
    if (n < 2) throw InvalidInput("make_quadrature: n must be at least 2");
    QuadratureRule rule;
    switch (kind) {
        case QuadratureKind::BoundedLegendre:
            if (!(params.b > params.a)) throw InvalidInput("bounded-legendre: need a < b");
            rule = legendre_on(n, params.a, params.b);
            break;
        case QuadratureKind::HalflineExpMapped: rule = exp_mapped(n, params.scale); break;
        case QuadratureKind::HalflineLaguerre: rule = laguerre(n, params.scale); break;
        case QuadratureKind::HalflineLogUniform:
            rule = log_uniform(n, params.t_min, params.t_max);
            break;
        default: throw InvalidInput("make_quadrature: unsupported kind");
    }
    validate(rule);
    return rule;
}

QuadratureRule logistic_unit_rule(int n, double v_lo, double v_hi) {
    if (n < 2 || !(v_hi > v_lo)) throw InvalidInput("logistic_unit_rule: bad parameters");
    const double h = (v_hi - v_lo) / n;
    QuadratureRule rule;
    rule.kind = QuadratureKind::HalflineLogUniform;
    rule.support = {0.0, 1.0};
    for (int i = 0; i < n; ++i) {
        const double v = v_lo + (i + 0.5) * h;
        // lambda and 1 - lambda computed without cancellation.
        const double lam = 1.0 / (1.0 + std::exp(-v));
        const double comp = 1.0 / (1.0 + std::exp(v));
        rule.nodes.push_back(lam);
        rule.weights.push_back(h * lam * comp);
    }
    validate(rule);
    return rule;
}

QuadratureRule shifted_log_rule(int n, double shift, double v_lo, double v_hi) {
    if (n < 2 || !(v_hi > v_lo)) throw InvalidInput("shifted_log_rule: bad parameters");
    const double h = (v_hi - v_lo) / n;
    QuadratureRule rule;
    rule.kind = QuadratureKind::HalflineLogUniform;
    rule.support = {shift, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < n; ++i) {
        const double e = std::exp(v_lo + (i + 0.5) * h);
        rule.nodes.push_back(shift + e);
        rule.weights.push_back(h * e);
    }
    validate(rule);
    return rule;
}

QuadratureRule concatenate(const QuadratureRule& lo, const QuadratureRule& hi) {
    QuadratureRule out = lo;
    out.nodes.insert(out.nodes.end(), hi.nodes.begin(), hi.nodes.end());
    out.weights.insert(out.weights.end(), hi.weights.begin(), hi.weights.end());
    out.support = {lo.support.lower, hi.support.upper};
    validate(out);
    return out;
}

void validate(const QuadratureRule& rule) {
    if (rule.nodes.size() != rule.weights.size() || rule.nodes.empty()) {
        throw InvalidInput("quadrature rule: nodes/weights size mismatch");
    }
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (!(rule.weights[i] > 0.0) || !std::isfinite(rule.weights[i])) {
            throw InvalidInput("quadrature rule: non-positive weight");
        }
        if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])) {
            throw InvalidInput("quadrature rule: nodes not strictly increasing");
        }
    }
}

}  // namespace specdiff
