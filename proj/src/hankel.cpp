#include "specdiff/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specdiff/errors.hpp"

namespace specdiff {

HankelKernel scalar_kernel(std::string name, std::function<double(double)> k) {
    HankelKernel kernel;
    kernel.name = std::move(name);
    kernel.kdim = 1;
    kernel.value = [k = std::move(k)](double t) { return CMatrix::Constant(1, 1, k(t)); };
    return kernel;
}

HankelKernel gamma0_kernel() {
    return scalar_kernel("gamma0", [](double t) { return std::exp(-t) / t; });
}

HankelKernel gamma_kernel() {
    return scalar_kernel("gamma", [](double t) { return -std::expm1(-t) / t; });
}

HankelKernel carleman_kernel() {
    return scalar_kernel("carleman", [](double t) { return 1.0 / t; });
}

HankelDiscretization build_hankel(const HankelKernel& kernel, const QuadratureRule& rule,
                                  int max_kdim) {
    if (!kernel.value) throw InvalidInput("build_hankel: kernel has no callable");
    if (kernel.kdim < 1 || kernel.kdim > max_kdim) {
        std::ostringstream os;
        os << "build_hankel: K-dimension " << kernel.kdim << " outside [1, " << max_kdim << "]";
        throw InvalidInput(os.str());
    }
    validate(rule);
    const int n = static_cast<int>(rule.size());
    const int m = kernel.kdim;
    HankelDiscretization disc;
    disc.rule = rule;
    disc.kernel = kernel;
    disc.matrix.resize(static_cast<Eigen::Index>(n) * m, static_cast<Eigen::Index>(n) * m);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double arg = rule.nodes[i] + rule.nodes[j];
            const CMatrix k = kernel.value(arg);
            if (k.rows() != m || k.cols() != m || !k.allFinite()) {
                std::ostringstream os;
                os << "build_hankel: kernel '" << kernel.name << "' singular or misshapen at t = "
                   << arg;
                throw InvalidInput(os.str());
            }
            const CMatrix block = std::sqrt(rule.weights[i] * rule.weights[j]) * k;
            disc.matrix.block(i * m, j * m, m, m) = block;
            if (j != i) disc.matrix.block(j * m, i * m, m, m) = block.adjoint();
        }
    }
    return disc;
}

QuadratureRule reciprocal_rule(int n, double u) {
    if (n % 2 != 0) throw InvalidInput("reciprocal_rule: n must be even");
    QuadratureParams p;
    p.t_min = std::exp(-u);
    p.t_max = std::exp(u);
    return make_quadrature(QuadratureKind::HalflineLogUniform, n, p);
}

QuadratureRule gamma_rule(int n, double u) { return reciprocal_rule(n, u); }

QuadratureRule carleman_rule(int n, double u_hi) {
    QuadratureParams p;
    p.t_min = 5e-13;
    p.t_max = std::exp(u_hi);
    return make_quadrature(QuadratureKind::HalflineLogUniform, n, p);
}

std::vector<double> sorted_eigenvalues(const CMatrix& hermitian) {
    const SpectralDecomposition d = herm_eig(hermitian);
    return {d.eigenvalues.data(), d.eigenvalues.data() + d.dim()};
}

GammaPair gamma_pair(const QuadratureRule& rule) {
    GammaPair gp;
    gp.gamma = build_hankel(gamma_kernel(), rule);
    gp.gamma0 = build_hankel(gamma0_kernel(), rule);
    gp.gamma_spectrum = sorted_eigenvalues(gp.gamma.matrix);
    gp.gamma0_spectrum = sorted_eigenvalues(gp.gamma0.matrix);
    gp.gamma_fill = fill_metrics(gp.gamma_spectrum, 0.0, M_PI);
    gp.gamma0_fill = fill_metrics(gp.gamma0_spectrum, 0.0, M_PI);
    gp.hausdorff = hausdorff(gp.gamma_spectrum, gp.gamma0_spectrum);
    const HankelDiscretization c = build_hankel(carleman_kernel(), rule);
    gp.carleman_residual = (gp.gamma.matrix + gp.gamma0.matrix - c.matrix).norm();
    return gp;
}

namespace {

// Columns k: sqrt(w_i) exp(-(shift + lambda_k) t_i) sqrt(w_k).
CMatrix laplace_matrix(const QuadratureRule& trule, const QuadratureRule& lrule,
                       double shift = 0.0) {
    CMatrix n(trule.size(), lrule.size());
    for (std::size_t i = 0; i < trule.size(); ++i) {
        for (std::size_t k = 0; k < lrule.size(); ++k) {
            n(i, k) = std::sqrt(trule.weights[i] * lrule.weights[k]) *
                      std::exp(-(shift + lrule.nodes[k]) * trule.nodes[i]);
        }
    }
    return n;
}

bool is_reciprocal(const QuadratureRule& rule) {
    const std::size_t n = rule.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(rule.nodes[i] * rule.nodes[n - 1 - i] - 1.0) > 1e-12) return false;
        // Weights h t must map to h / t under t -> 1/t: sqrt(w_i) / t_i = sqrt(w_j).
        const double lhs = rule.weights[i] / (rule.nodes[i] * rule.nodes[i]);
        if (std::abs(lhs - rule.weights[n - 1 - i]) > 1e-12 * rule.weights[n - 1 - i]) return false;
    }
    return true;
}

}  // namespace

FactorizationReport laplace_factorizations(const QuadratureRule& rule, int lambda_nodes) {
    FactorizationReport r;
    r.lambda_nodes = lambda_nodes;
    const double t_lo = rule.nodes.front();
    const double t_hi = rule.nodes.back();
    // Nodes reach far enough into both tails that e^{-lambda (t+s)} is resolved
    // for every sampled t + s.
    // The lower cut must be small against 1 / (h t_max) because the sqrt(w)
    // scaling amplifies tail errors by up to h t_max.
    const double v_lo = std::log(1e-10 / t_hi);
    const QuadratureRule below = logistic_unit_rule(lambda_nodes, std::min(v_lo, -4.0), 30.0);
    const double w_hi = std::log(60.0 / (2.0 * t_lo));
    // lambda = 1 + mu with mu log-uniform; the shift is applied exactly.
    const QuadratureRule above = shifted_log_rule(lambda_nodes, 0.0, std::min(-12.0, -w_hi), w_hi);

    const CMatrix n_lo = laplace_matrix(rule, below);
    const CMatrix n_hi = laplace_matrix(rule, above, 1.0);
    const CMatrix gamma = build_hankel(gamma_kernel(), rule).matrix;
    const CMatrix gamma0 = build_hankel(gamma0_kernel(), rule).matrix;
    r.gamma_residual = (gamma - n_lo * n_lo.transpose()).norm();
    r.gamma0_residual = (gamma0 - n_hi * n_hi.transpose()).norm();

    r.reciprocal = rule.size() % 2 == 0 && is_reciprocal(rule);
    if (r.reciprocal) {
        // On a reciprocal grid U is the index reversal in sqrt(w)-scaled coordinates.
        const auto n = static_cast<Eigen::Index>(rule.size());
        CMatrix u = CMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) u(i, n - 1 - i) = 1.0;
        r.u_involution = (u * u - CMatrix::Identity(n, n)).norm();
        // N^2 needs an inner rule reaching past both ends of the grid.
        const double reach = std::log(t_hi) + 12.0;
        const QuadratureRule inner = reciprocal_rule(2 * static_cast<int>(n), reach);
        const CMatrix nt = laplace_matrix(rule, inner);
        const CMatrix n2 = nt * nt.transpose();
        r.u_conjugation = (u * n2 * u - n2).norm() / std::max(n2.norm(), 1e-300);
    }
    return r;
}

HankelBoundReport hankel_bound_suite(const HankelDiscretization& disc, double constant) {
    if (!(constant > 0.0)) throw InvalidInput("hankel_bound_suite: C must be positive");
    HankelBoundReport r;
    r.kernel = disc.kernel.name;
    r.constant = constant;

    std::vector<double> samples;
    const auto& t = disc.rule.nodes;
    for (std::size_t i = 0; i < t.size(); ++i) {
        samples.push_back(2.0 * t[i]);
        if (i + 1 < t.size()) samples.push_back(t[i] + t[i + 1]);
    }
    std::sort(samples.begin(), samples.end());
    auto weighted = [&disc](double s) {
        const CMatrix k = disc.kernel.value(s);
        return s * (k.rows() == 1 ? std::abs(k(0, 0)) : op_norm(k));
    };
    for (double s : samples) {
        const double tk = weighted(s);
        r.worst_sample_ratio = std::max(r.worst_sample_ratio, tk / constant);
        if (tk > constant * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "hankel_bound_suite: |K(t)| <= C/t fails for kernel '" << disc.kernel.name << "' at t = " << s;
            throw BoundViolation(os.str(), s, tk - constant);
        }
    }
    r.tail_small_t = weighted(samples.front());
    r.tail_large_t = weighted(samples.back());

    const RVector s = singular_values(disc.matrix);
    r.singular_values.assign(s.data(), s.data() + s.size());
    r.norm = r.singular_values.empty() ? 0.0 : r.singular_values.front();
    r.bound = M_PI * constant;
    r.bound_holds = r.norm <= r.bound + 1e-6;
    return r;
}

CarlemanReport carleman_reference(int n, double u_hi) {
    const QuadratureRule rule = carleman_rule(n, u_hi);
    CarlemanReport r;
    r.n = n;
    r.min_argument = 2.0 * rule.nodes.front();
    const std::vector<double> ev = sorted_eigenvalues(build_hankel(carleman_kernel(), rule).matrix);
    r.norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    return r;
}

QuadratureRule trace_lambda_rule(int n) {
    QuadratureParams p;
    p.t_min = 1e-10;
    p.t_max = 1e3;
    return make_quadrature(QuadratureKind::HalflineLogUniform, n, p);
}

TraceBoundReport trace_bound_check(const TraceBoundData& data, const QuadratureRule& trule) {
    if (!data.M) throw InvalidInput("trace_bound_check: no M sampler");
    validate(data.lambda_rule);
    validate(trule);
    const auto& lam = data.lambda_rule.nodes;
    const auto& lw = data.lambda_rule.weights;
    const int m = data.kdim;

    TraceBoundReport r;
    std::vector<CMatrix> samples;
    std::vector<double> trace_norms;
    double peak = 0.0;
    for (std::size_t k = 0; k < lam.size(); ++k) {
        CMatrix mk = data.M(lam[k]);
        if (mk.rows() != m || mk.cols() != m || !mk.allFinite()) {
            throw InvalidInput("trace_bound_check: M(lambda) misshapen or non-finite");
        }
        if (hermitian_asymmetry(mk) > kHermitianTol) {
            throw NotHermitian("trace_bound_check: M(lambda) not Hermitian", hermitian_asymmetry(mk));
        }
        const RVector s = singular_values(mk);
        const double tn = s.sum();
        trace_norms.push_back(tn);
        peak = std::max(peak, tn);
        r.c2 += lw[k] * tn / lam[k];
        samples.push_back(std::move(mk));
    }
    r.endpoint_low = trace_norms.front();
    r.endpoint_high = trace_norms.back();
    // On a log-lambda rule the C2 integrand is |M(lambda)|_1 itself.
    const double tol = 1e-6 * std::max(peak, 1e-300);
    if (peak > 0.0 && (r.endpoint_low > tol || r.endpoint_high > tol)) {
        std::ostringstream os;
        os << "trace_bound_check: C2 integral diverges for '" << data.name
           << "' (|M|_1 = " << r.endpoint_low << " at lambda = " << lam.front() << ", "
           << r.endpoint_high << " at lambda = " << lam.back() << ")";
        throw Divergent(os.str());
    }
    r.bound = 0.5 * r.c2;

    const auto n = static_cast<Eigen::Index>(trule.size());
    CMatrix hankel = CMatrix::Zero(n * m, n * m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double ts = trule.nodes[i] + trule.nodes[j];
            CMatrix acc = CMatrix::Zero(m, m);
            for (std::size_t k = 0; k < lam.size(); ++k) {
                acc += lw[k] * std::exp(-lam[k] * ts) * samples[k];
            }
            acc *= std::sqrt(trule.weights[i] * trule.weights[j]);
            hankel.block(i * m, j * m, m, m) = acc;
            if (j != i) hankel.block(j * m, i * m, m, m) = acc.adjoint();
        }
    }
    r.nuclear_norm = singular_values(hankel).sum();
    r.within = r.nuclear_norm <= r.bound * 1.05 + 1e-14;
    return r;
}

}  // namespace specdiff
