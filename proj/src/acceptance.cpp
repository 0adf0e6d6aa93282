#include "specdiff/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "specdiff/config.hpp"
#include "specdiff/errors.hpp"
#include "specdiff/hankel.hpp"
#include "specdiff/harness.hpp"
#include "specdiff/presets.hpp"
#include "specdiff/projections.hpp"
#include "specdiff/scattering.hpp"
#include "specdiff/transfer_matrix.hpp"
#include "specdiff/zops.hpp"

namespace specdiff {

using nlohmann::json;

namespace {

// Thresholds, one block per criterion.
namespace th {
constexpr double resolvent = 1e-9;
constexpr double dsq_block_per_dim = 1e-10;
constexpr double a_identity = 1e-9;
constexpr double product_per_dim = 1e-8;
constexpr double identity_runtime = 120.0;

constexpr double krein_extreme = 0.05;
constexpr double krein_gap = 0.1;
constexpr double krein_gap_window = 0.95;

constexpr double krein_xi = 0.1;
constexpr double krein_phase = 0.1;
constexpr double birman_krein = 0.1;

constexpr double support = 0.05;
constexpr double oracle_a = 0.02;

constexpr double band_edge = 0.05;

constexpr double spectrum_slack = 1e-8;
constexpr double top_eig = 0.1;
constexpr double gamma_hausdorff = 0.05;
constexpr double laplace = 1e-6;
constexpr double carleman = 0.05;

constexpr double pairing = 1e-6;

constexpr double invariance_phase = 2e-2;
constexpr double invariance_projection = 1e-12;

constexpr double budget = 600.0;
}  // namespace th

constexpr double kKreinProbe = 0.5;
constexpr double kSchrodingerProbe = 1.0;
constexpr int kRandomPairs = 20;
constexpr int kHankelNodes = 300;
constexpr int kLaplaceNodes = 400;
// Eigenvalues this close to 1 in the corner operator are finite-rank (bound
// state) contributions, not part of the band.
constexpr double kCornerCluster = 1e-6;
constexpr double kCornerFloor = 1e-2;

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::isfinite(x) ? std::max(m, x) : std::numeric_limits<double>::infinity();
    return m;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x, int precision = 3) {
    std::ostringstream os;
    os << std::setprecision(precision) << x;
    return os.str();
}

LadderOptions ladder_options(const Preset& p, bool densities = false) {
    LadderOptions lo;
    lo.kappa = p.kappa;
    lo.scattering.retention_floor = p.retention_floor;
    lo.keep_densities = densities;
    return lo;
}

struct Clause {
    ClauseResult result;
    std::vector<double> pairing;  // pairing defects of every D computed
};

Clause base(int id, const char* title, const char* field) {
    Clause c;
    c.result.id = id;
    c.result.title = title;
    c.result.field = field;
    return c;
}

// 1 ------------------------------------------------------------------------

Clause identity_suite(std::uint64_t seed) {
    Clause c = base(1, "exact-identity suite", "acceptance.identity_suite");
    const auto start = std::chrono::steady_clock::now();
    double resolvent = 0.0, a_identity = 0.0, dsq_block_ratio = 0.0, product_ratio = 0.0;
    int cases = 0;
    auto check_pair = [&](const OperatorPair& pair, const std::vector<double>& probes) {
        const PairSpectra spectra = decompose(pair);
        const double n = static_cast<double>(pair.dim());
        for (double lambda : probes) {
            for (double eps : {1e-1, 1e-2}) {
                const ScatteringBundle b = scattering_bundle(pair, spectra, lambda, eps);
                resolvent = std::max(resolvent, b.resolvent_residual);
                a_identity = std::max(a_identity, b.a_identity_residual);
            }
            dsq_block_ratio = std::max(dsq_block_ratio, dsq_block_check(spectra, lambda) / n);
            product_ratio = std::max(product_ratio, product_oracle(pair, spectra, lambda).residual_oracle / n);
            c.pairing.push_back(projection_difference(spectra, lambda).pairing_defect);
            ++cases;
        }
    };
    const std::vector<double> probes = {-0.25, 0.25};
    std::vector<int> dims;
    for (int s = 0; s < kRandomPairs; ++s) {
        const int n = 4 + (s * 5) % 21;
        const int rank = std::min(n, 1 + s % 4);
        dims.push_back(n);
        check_pair(random_finite_pair(n, rank, seed + s, probes), probes);
    }
    check_pair(build_krein(200, 40.0), {kKreinProbe});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < th::identity_runtime;

    auto& r = c.result;
    r.measured = {{"cases", cases},
                  {"random_dims", dims},
                  {"resolvent_max", resolvent},
                  {"a_identity_max", a_identity},
                  {"dsq_block_max_per_dim", dsq_block_ratio},
                  {"product_oracle_max_per_dim", product_ratio},
                  {"runtime_within_budget", in_time}};
    r.thresholds = {{"resolvent", th::resolvent},
                    {"a_identity", th::a_identity},
                    {"dsq_block_per_dim", th::dsq_block_per_dim},
                    {"product_oracle_per_dim", th::product_per_dim},
                    {"runtime_seconds", th::identity_runtime}};
    r.pass = resolvent <= th::resolvent && a_identity <= th::a_identity &&
             dsq_block_ratio <= th::dsq_block_per_dim && product_ratio <= th::product_per_dim && in_time;
    r.summary = "resolvent " + fmt(resolvent) + ", A identity " + fmt(a_identity) + ", D^2 blocks/dim " +
                fmt(dsq_block_ratio) + ", product oracle/dim " + fmt(product_ratio) + " over " +
                std::to_string(cases) + " cases";
    return c;
}

// 2 ------------------------------------------------------------------------

Clause krein_headline() {
    Clause c = base(2, "krein difference spectrum fills [-1, 1]", "acceptance.krein_headline");
    json rows = json::array();
    std::vector<double> extreme, gap;
    for (int n : {200, 400}) {
        const DifferenceReport d = projection_difference(build_krein(n, 40.0), kKreinProbe);
        const double e = std::max(std::abs(d.min_eig + 1.0), std::abs(d.max_eig - 1.0));
        const double g = fill_metrics(d.spectrum, -th::krein_gap_window, th::krein_gap_window).max_gap;
        extreme.push_back(e);
        gap.push_back(g);
        c.pairing.push_back(d.pairing_defect);
        rows.push_back({{"n", n}, {"min_eig", d.min_eig}, {"max_eig", d.max_eig},
                        {"extreme_distance", e}, {"max_gap", g}});
    }
    const bool improves = extreme[1] < extreme[0] && gap[1] < gap[0];
    auto& r = c.result;
    r.measured = {{"grids", rows}, {"both_improve", improves}};
    r.thresholds = {{"extreme_distance", th::krein_extreme},
                    {"max_gap", th::krein_gap},
                    {"gap_window", th::krein_gap_window}};
    r.pass = extreme[1] <= th::krein_extreme && gap[1] <= th::krein_gap && improves;
    r.summary = "n=400: extreme distance " + fmt(extreme[1]) + ", max gap " + fmt(gap[1]) +
                "; n=200 -> 400 improves: " + (improves ? "yes" : "no");
    return c;
}

// 3 ------------------------------------------------------------------------

Clause krein_scattering() {
    Clause c = base(3, "krein spectral shift and scattering phase", "acceptance.krein_scattering");
    const Preset p = find_preset("krein");
    const OperatorPair pair = build_krein(p.model.n, p.model.truncation);
    const PairSpectra spectra = decompose(pair);
    const ScatteringLadder L = scattering_ladder(pair, spectra, kKreinProbe, p.ladder, ladder_options(p));
    const DifferenceReport d = projection_difference(spectra, kKreinProbe);
    const BirmanKreinResult bk = birman_krein_check(spectra, kKreinProbe, L);
    c.pairing.push_back(d.pairing_defect);

    const double xi = -d.trace;
    const double xi_err = std::abs(xi - 0.5);
    const double phase_err = L.phases.empty() ? std::numeric_limits<double>::infinity()
                                              : std::abs(std::polar(1.0, L.phases.front()) + 1.0);
    auto& r = c.result;
    r.measured = {{"n", p.model.n},
                  {"eps_used", L.eps_used},
                  {"minus_trace_d", xi},
                  {"xi_error", xi_err},
                  {"phases", L.phases},
                  {"phase_error", finite_or_null(phase_err)},
                  {"birman_krein_defect", bk.defect},
                  {"xi_smoothed", bk.xi_smoothed},
                  {"birman_krein_defect_smoothed", bk.defect_smoothed}};
    r.thresholds = {{"xi", th::krein_xi}, {"phase", th::krein_phase}, {"birman_krein", th::birman_krein}};
    r.pass = xi_err <= th::krein_xi && phase_err <= th::krein_phase && bk.defect <= th::birman_krein;
    r.summary = "-tr D " + fmt(xi) + " (smoothed xi " + fmt(bk.xi_smoothed) + "), |e^{i theta}+1| " +
                fmt(phase_err) + ", Birman-Krein defect " + fmt(bk.defect);
    return c;
}

// 4 ------------------------------------------------------------------------

Clause fill_in_clause() {
    Clause c = base(4, "fill-in of [-a, a] for the sech^2 well", "acceptance.fill_in");
    const Preset p = find_preset("schrodinger:sech2");
    json rows = json::array();
    std::vector<double> hausdorff;
    double support_err = 0.0, a_fine = 0.0, a_oracle = 0.0;
    // Grid doubling: box and point count doubled at fixed step.
    for (int k : {0, 1}) {
        ModelParams model = p.model;
        model.truncation = p.model.truncation / (k == 0 ? 2.0 : 1.0);
        model.n = p.model.n / (k == 0 ? 2 : 1);
        const OperatorPair pair = build_model(model);
        const PairSpectra spectra = decompose(pair);
        const ScatteringLadder L =
            scattering_ladder(pair, spectra, kSchrodingerProbe, p.ladder, ladder_options(p));
        const DifferenceReport d = projection_difference(spectra, kSchrodingerProbe);
        c.pairing.push_back(d.pairing_defect);
        const double a = std::max(L.a, 0.0);
        const double h = hausdorff_to_interval(d.middle_spectrum, -a, a);
        hausdorff.push_back(h);
        const double err = std::max(std::abs(d.middle_min + a), std::abs(d.middle_max - a));
        rows.push_back({{"half_width", model.truncation}, {"n", model.n}, {"eps_used", L.eps_used},
                        {"a", L.a}, {"middle_min", d.middle_min}, {"middle_max", d.middle_max},
                        {"support_error", err}, {"hausdorff", h}});
        if (k == 1) {
            support_err = err;
            a_fine = L.a;
            a_oracle = transfer_matrix_smatrix(preset_potential(model), kSchrodingerProbe).a;
        }
    }
    const double oracle_diff = std::abs(a_oracle - a_fine);
    const bool decreases = hausdorff[1] < hausdorff[0];
    auto& r = c.result;
    r.measured = {{"grids", rows},
                  {"a_stilde", a_fine},
                  {"a_transfer", a_oracle},
                  {"a_difference", oracle_diff},
                  {"support_error", support_err},
                  {"hausdorff_decreases", decreases}};
    r.thresholds = {{"support", th::support}, {"oracle_a", th::oracle_a}};
    r.pass = support_err <= th::support && oracle_diff <= th::oracle_a && decreases;
    r.summary = "a(S~) " + fmt(a_fine, 4) + " vs transfer " + fmt(a_oracle, 4) + ", support error " +
                fmt(support_err) + ", Hausdorff " + fmt(hausdorff[0]) + " -> " + fmt(hausdorff[1]);
    return c;
}

// 5 ------------------------------------------------------------------------

Clause band_edge_clause() {
    Clause c = base(5, "band edges sin^2(theta_n/2) in the corner spectrum", "acceptance.band_edges");
    const Preset p = find_preset("schrodinger:two-phase");
    const OperatorPair pair = build_model(p.model);
    const PairSpectra spectra = decompose(pair);
    const ScatteringLadder L =
        scattering_ladder(pair, spectra, kSchrodingerProbe, p.ladder, ladder_options(p));
    const CornerSpectrum cs = corner_spectrum(spectra, kSchrodingerProbe, +1);
    std::vector<double> band;
    int cluster = 0;
    for (double e : cs.eigenvalues) {
        if (e >= 1.0 - kCornerCluster) {
            ++cluster;
        } else {
            band.push_back(e);
        }
    }
    const auto edges = L.predictions().band_edges;
    const double top = edges.size() > 0 ? edges[0] * edges[0] : std::numeric_limits<double>::quiet_NaN();
    const double edge = edges.size() > 1 ? edges[1] * edges[1] : std::numeric_limits<double>::quiet_NaN();
    const double max_eig = band.empty() ? 0.0 : band.back();
    const double bp = counting_breakpoint(band, kCornerFloor);
    const double top_err = std::abs(max_eig - top);
    const double edge_err = std::abs(bp - edge);
    int above_floor = 0;
    for (double e : band) above_floor += e > kCornerFloor;

    auto& r = c.result;
    r.measured = {{"n", p.model.n},
                  {"half_width", p.model.truncation},
                  {"phases", L.phases},
                  {"predicted_top", finite_or_null(top)},
                  {"predicted_edge", finite_or_null(edge)},
                  {"max_eig", max_eig},
                  {"breakpoint", finite_or_null(bp)},
                  {"eigenvalues_above_floor", above_floor},
                  {"unit_cluster", cluster},
                  {"top_error", finite_or_null(top_err)},
                  {"edge_error", finite_or_null(edge_err)}};
    r.thresholds = {{"band_edge", th::band_edge}, {"counting_floor", kCornerFloor}};
    r.pass = top_err <= th::band_edge && edge_err <= th::band_edge;
    r.summary = "max eig " + fmt(max_eig) + " vs sin^2(theta1/2) " + fmt(top) + ", breakpoint " +
                fmt(bp) + " vs sin^2(theta2/2) " + fmt(edge) + " (" + std::to_string(above_floor) +
                " eigenvalues above " + fmt(kCornerFloor) + ")";
    return c;
}

// 6 ------------------------------------------------------------------------

HankelKernel rotating_kernel() {
    // U(t) diag(e^{-t}, 1 - e^{-t}) U(t)^* / t with U(t) a rotation by atan(t):
    // |K(t)| = max(e^{-t}, 1 - e^{-t}) / t <= 1/t.
    HankelKernel k;
    k.name = "rotating 2x2";
    k.kdim = 2;
    k.value = [](double t) {
        const double phi = std::atan(t);
        Eigen::Matrix2cd u;
        u << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
        Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
        d(0, 0) = std::exp(-t) / t;
        d(1, 1) = -std::expm1(-t) / t;
        return CMatrix(u * d * u.adjoint());
    };
    return k;
}

Clause hankel_suite() {
    Clause c = base(6, "hankel suite", "acceptance.hankel_suite");
    const QuadratureRule rule = gamma_rule(kHankelNodes);
    const GammaPair gp = gamma_pair(rule);
    const double lo = std::min(gp.gamma_spectrum.front(), gp.gamma0_spectrum.front());
    const double hi = std::max(gp.gamma_spectrum.back(), gp.gamma0_spectrum.back());
    const bool inside = lo >= -th::spectrum_slack && hi <= M_PI + th::spectrum_slack;
    const double top = std::min(gp.gamma_spectrum.back(), gp.gamma0_spectrum.back());
    const FactorizationReport f = laplace_factorizations(factorization_rule(kHankelNodes), kLaplaceNodes);
    const CarlemanReport carl = carleman_reference(kHankelNodes);

    json corpus = json::array();
    bool bound_ok = true;
    const std::vector<std::pair<HankelKernel, double>> kernels = {
        {scalar_kernel("exp(-t)", [](double t) { return std::exp(-t); }), std::exp(-1.0)},
        {scalar_kernel("1/(1+t)", [](double t) { return 1.0 / (1.0 + t); }), 1.0},
        {gamma0_kernel(), 1.0},
        {gamma_kernel(), 1.0},
        {carleman_kernel(), 1.0},
        {rotating_kernel(), 1.0},
    };
    for (const auto& [kernel, constant] : kernels) {
        try {
            const HankelBoundReport bound = hankel_bound_suite(build_hankel(kernel, rule), constant);
            bound_ok = bound_ok && bound.bound_holds;
            corpus.push_back({{"kernel", kernel.name}, {"constant", constant}, {"norm", bound.norm},
                              {"bound", bound.bound}, {"holds", bound.bound_holds}});
        } catch (const BoundViolation& e) {
            bound_ok = false;
            corpus.push_back({{"kernel", kernel.name}, {"constant", constant}, {"holds", false}, {"error", e.what()}});
        }
    }
    const double laplace = std::max(f.gamma_residual, f.gamma0_residual);
    const bool carl_ok = carl.norm >= M_PI - th::carleman && carl.norm <= M_PI;

    auto& r = c.result;
    r.measured = {{"nodes", kHankelNodes},
                  {"spectrum_min", lo},
                  {"spectrum_max", hi},
                  {"gamma_top", gp.gamma_spectrum.back()},
                  {"gamma0_top", gp.gamma0_spectrum.back()},
                  {"hausdorff", gp.hausdorff},
                  {"laplace_gamma", f.gamma_residual},
                  {"laplace_gamma0", f.gamma0_residual},
                  {"carleman_norm", carl.norm},
                  {"bound_corpus", corpus}};
    r.thresholds = {{"spectrum_slack", th::spectrum_slack}, {"top", M_PI - th::top_eig},
                    {"hausdorff", th::gamma_hausdorff},     {"laplace", th::laplace},
                    {"carleman", {M_PI - th::carleman, M_PI}}};
    r.pass = inside && top >= M_PI - th::top_eig && gp.hausdorff <= th::gamma_hausdorff &&
             laplace <= th::laplace && carl_ok && bound_ok;
    r.summary = "spectra in [" + fmt(lo) + ", " + fmt(hi, 6) + "], Hausdorff " + fmt(gp.hausdorff) +
                ", Laplace " + fmt(laplace) + ", Carleman " + fmt(carl.norm, 6) +
                ", norm bound " + (bound_ok ? "holds" : "violated");
    return c;
}

// 8 ------------------------------------------------------------------------

Clause invariance() {
    Clause c = base(8, "invariance under the resolvent map", "acceptance.invariance");
    const Preset p = find_preset("krein");
    const OperatorPair pair = build_krein(p.model.n, p.model.truncation);
    const PairSpectra spectra = decompose(pair);
    const ResolventTransform tr = resolvent_transform(pair, p.resolvent_shift);
    const PairSpectra ts = decompose(tr.transformed);
    const double mu = tr.mu(kKreinProbe);

    const ProjectionPair a = projection_pair(spectra, kKreinProbe);
    const ProjectionPair b = projection_pair(ts, mu);
    const double proj = herm_op_norm(hermitian_part((a.E - a.E0) + (b.E - b.E0)));
    c.pairing.push_back(projection_difference(spectra, kKreinProbe).pairing_defect);
    c.pairing.push_back(projection_difference(ts, mu).pairing_defect);

    std::vector<double> eps_mu;
    for (double e : p.ladder) eps_mu.push_back(e * tr.jacobian(kKreinProbe));
    const ScatteringLadder la = scattering_ladder(pair, spectra, kKreinProbe, p.ladder, ladder_options(p));
    const ScatteringLadder lb = scattering_ladder(tr.transformed, ts, mu, eps_mu, ladder_options(p));
    double mismatch = la.phases.size() == lb.phases.size() && !la.phases.empty()
                          ? 0.0
                          : std::numeric_limits<double>::infinity();
    std::vector<double> conj;
    for (double t : lb.phases) conj.push_back(std::fmod(2.0 * M_PI - t, 2.0 * M_PI));
    std::vector<double> sa = la.phases, sb = conj;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    for (std::size_t i = 0; i < std::min(sa.size(), sb.size()); ++i) {
        mismatch = std::max(mismatch, std::abs(std::polar(1.0, sa[i]) - std::polar(1.0, sb[i])));
    }

    auto& r = c.result;
    r.measured = {{"n", p.model.n},
                  {"shift", p.resolvent_shift},
                  {"mu", mu},
                  {"phases", la.phases},
                  {"transformed_phases_conjugated", conj},
                  {"phase_mismatch", finite_or_null(mismatch)},
                  {"projection_residual", proj}};
    r.thresholds = {{"phase", th::invariance_phase}, {"projection", th::invariance_projection}};
    r.pass = mismatch <= th::invariance_phase && proj <= th::invariance_projection;
    r.summary = "phase mismatch " + fmt(mismatch) + ", projection residual " + fmt(proj);
    return c;
}

bool run_is_deterministic(std::uint64_t seed) {
    ExperimentConfig cfg = default_config("finite:random(" + std::to_string(seed) + ")");
    return run_experiment(cfg).json.dump() == run_experiment(cfg).json.dump();
}

}  // namespace

std::string format_clause(const ClauseResult& clause) {
    std::ostringstream os;
    os << (clause.pass ? "[PASS] " : "[FAIL] ") << clause.id << ' ' << clause.title << ": "
       << clause.summary;
    return os.str();
}

AcceptanceReport verify_all(const AcceptanceOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::function<Clause()>> tasks = {
        [&] { return identity_suite(options.seed); },
        krein_headline,
        krein_scattering,
        fill_in_clause,
        band_edge_clause,
        hankel_suite,
        invariance,
    };
    std::vector<Clause> done(tasks.size());
    run_indexed(tasks.size(), options.jobs, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        done[i] = tasks[i]();
        done[i].result.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });

    AcceptanceReport report;
    std::vector<double> pairing;
    for (auto& d : done) {
        pairing.insert(pairing.end(), d.pairing.begin(), d.pairing.end());
        report.clauses.push_back(d.result);
    }

    {
        Clause c = base(7, "pairing symmetry of D", "acceptance.pairing");
        const double worst = max_of(pairing);
        c.result.measured = {{"operators", pairing.size()}, {"max_pairing_defect", worst}};
        c.result.thresholds = {{"pairing", th::pairing}};
        c.result.pass = !pairing.empty() && worst <= th::pairing;
        c.result.summary = "max defect " + fmt(worst) + " over " + std::to_string(pairing.size()) +
                           " difference operators";
        report.clauses.push_back(c.result);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        Clause c = base(9, "budget and determinism", "acceptance.budget");
        const bool deterministic = run_is_deterministic(options.seed);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed < th::budget;
        c.result.measured = {{"deterministic", deterministic}, {"within_budget", in_budget}};
        c.result.thresholds = {{"budget_seconds", th::budget}};
        c.result.pass = deterministic && in_budget;
        c.result.summary = "elapsed " + fmt(elapsed) + " s (budget " + fmt(th::budget) +
                           " s), repeated run identical: " + (deterministic ? "yes" : "no");
        c.result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.clauses.push_back(c.result);
    }
    std::sort(report.clauses.begin(), report.clauses.end(),
              [](const ClauseResult& a, const ClauseResult& b) { return a.id < b.id; });

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.pass = std::all_of(report.clauses.begin(), report.clauses.end(),
                              [](const ClauseResult& c) { return c.pass; });
    report.json["schema"] = 1;
    report.json["kind"] = "verify-all";
    report.json["seed"] = options.seed;
    report.json["clauses"] = json::array();
    report.timing = json::object();
    for (const auto& c : report.clauses) {
        report.json["clauses"].push_back({{"id", c.id},
                                          {"title", c.title},
                                          {"field", c.field},
                                          {"pass", c.pass},
                                          {"measured", c.measured},
                                          {"thresholds", c.thresholds}});
        report.timing[std::to_string(c.id)] = c.seconds;
    }
    report.timing["total"] = report.seconds;
    report.json["pass"] = report.pass;
    return report;
}

}  // namespace specdiff
