// odeint goes first: the LAPACKE headers pulled in through Eigen define
// macros that break Boost.Fusion's preprocessor code.
#include <boost/numeric/odeint.hpp>

#include "specdiff/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specdiff/errors.hpp"

namespace specdiff {

namespace {

// (Re u, Re u', Im u, Im u'); V is real so the two halves decouple.
using State = std::array<double, 4>;

struct Stationary {
    const std::function<double(double)>* potential;
    double lambda;

    void operator()(const State& y, State& dy, double x) const {
        const double q = (*potential)(x) - lambda;
        dy[0] = y[1];
        dy[1] = q * y[0];
        dy[2] = y[3];
        dy[3] = q * y[2];
    }
};

State to_state(cplx u, cplx du) { return {u.real(), du.real(), u.imag(), du.imag()}; }

// Integrate from `from` to `to`, stopping at every breakpoint in between.
State propagate(const PotentialSpec& spec, double lambda, State y, double from, double to,
                const TransferOptions& options) {
    namespace odeint = boost::numeric::odeint;
    std::vector<double> stops;
    for (double b : spec.breakpoints) {
        if (b > std::min(from, to) && b < std::max(from, to)) stops.push_back(b);
    }
    if (to > from) {
        std::sort(stops.begin(), stops.end());
    } else {
        std::sort(stops.begin(), stops.end(), std::greater<>());
    }
    stops.push_back(to);

    Stationary system{&spec.potential, lambda};
    const double k = std::sqrt(lambda);
    double x = from;
    for (double stop : stops) {
        const double span = stop - x;
        const double dx = std::copysign(std::min(std::abs(span), 0.05 / std::max(k, 1.0)), span);
        auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                               odeint::runge_kutta_dopri5<State>());
        odeint::integrate_adaptive(stepper, system, y, x, stop, dx);
        x = stop;
    }
    return y;
}

}  // namespace

TransferMatrixResult transfer_matrix_smatrix(const PotentialSpec& spec, double lambda,
                                             const TransferOptions& options) {
    if (!(lambda > 0.0)) throw InvalidInput("transfer_matrix_smatrix: lambda must be positive");
    if (!spec.potential) throw InvalidInput("transfer_matrix_smatrix: no potential");
    const double X = spec.half_width;
    for (double end : {-X, X}) {
        const double v = std::abs(spec.potential(end));
        if (v > options.boundary_tol) {
            std::ostringstream os;
            os << "transfer_matrix_smatrix: |V(" << end << ")| = " << v
               << " does not vanish at the box end";
            throw BoundViolation(os.str(), end, v - options.boundary_tol);
        }
    }

    TransferMatrixResult r;
    r.lambda = lambda;
    r.k = std::sqrt(lambda);
    const double k = r.k;
    const cplx ik(0.0, k);
    auto wave = [k](double x, double sign) { return std::polar(1.0, sign * k * x); };

    {
        // Left incidence: u = e^{ikx} for x > X, u = A e^{ikx} + B e^{-ikx} for x < -X.
        const cplx u0 = wave(X, 1.0);
        const State y = propagate(spec, lambda, to_state(u0, ik * u0), X, -X, options);
        const cplx u(y[0], y[2]), du(y[1], y[3]);
        const cplx a = 0.5 * (u + du / ik) * wave(-X, -1.0);
        const cplx b = 0.5 * (u - du / ik) * wave(-X, 1.0);
        r.t = 1.0 / a;
        r.r_left = b / a;
    }
    {
        // Right incidence: u = e^{-ikx} for x < -X, u = C e^{-ikx} + D e^{ikx} for x > X.
        const cplx u0 = wave(-X, -1.0);
        const State y = propagate(spec, lambda, to_state(u0, -ik * u0), -X, X, options);
        const cplx u(y[0], y[2]), du(y[1], y[3]);
        const cplx c = 0.5 * (u - du / ik) * wave(X, 1.0);
        const cplx d = 0.5 * (u + du / ik) * wave(X, -1.0);
        r.t_right = 1.0 / c;
        r.r_right = d / c;
    }

    r.S << r.t, r.r_right, r.r_left, r.t;
    r.flux_defect = std::abs(std::norm(r.r_left) + std::norm(r.t) - 1.0);
    r.unitarity_defect = op_norm(r.S.adjoint() * r.S - Eigen::Matrix2cd::Identity());
    r.reciprocity_defect = std::abs(r.t - r.t_right);
    r.a = 0.5 * op_norm(r.S - Eigen::Matrix2cd::Identity());

    const cplx root = std::sqrt(r.r_right * r.r_left);
    std::array<cplx, 2> ev = {r.t + root, r.t - root};
    if (std::abs(ev[1] - 1.0) > std::abs(ev[0] - 1.0)) std::swap(ev[0], ev[1]);
    r.eigenvalues = ev;
    for (int i = 0; i < 2; ++i) {
        double th = std::arg(ev[i]);
        if (th < 0.0) th += 2.0 * M_PI;
        r.phases[i] = th;
    }
    return r;
}

CMatrix fiber_density(const PotentialSpec& spec, double lambda) {
    if (!(lambda > 0.0)) throw InvalidInput("fiber_density: lambda must be positive");
    const std::vector<double> x = schrodinger_grid(spec);
    const std::vector<int> support = schrodinger_support(spec);
    const double h = x[1] - x[0];
    const double k = std::sqrt(lambda);
    const auto m = static_cast<Eigen::Index>(support.size());
    std::vector<double> root(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        root[i] = std::sqrt(std::abs(spec.potential(x[support[i]])));
    }
    CMatrix f(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            f(i, j) = h * root[i] * root[j] * std::cos(k * (x[support[i]] - x[support[j]])) /
                      (2.0 * M_PI * k);
        }
    }
    return f;
}

double fiber_consistency(const PotentialSpec& spec, double lambda, const CMatrix& f0prime) {
    const CMatrix f = fiber_density(spec, lambda);
    if (f.rows() != f0prime.rows() || f.cols() != f0prime.cols()) {
        throw InvalidInput("fiber_consistency: F0' shape does not match the potential support");
    }
    return (f - f0prime).norm() / std::max(f.norm(), 1e-300);
}

}  // namespace specdiff
