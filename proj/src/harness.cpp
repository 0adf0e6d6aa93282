#include "specdiff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "specdiff/errors.hpp"
#include "specdiff/extrapolation.hpp"
#include "specdiff/operator_models.hpp"
#include "specdiff/projections.hpp"
#include "specdiff/scattering.hpp"
#include "specdiff/transfer_matrix.hpp"
#include "specdiff/zops.hpp"

namespace specdiff {

using nlohmann::json;

void run_indexed(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

SequenceFlags sequence_flags(const std::vector<double>& values) {
    SequenceFlags f;
    f.strictly_decreasing = values.size() >= 2;
    f.strictly_increasing = values.size() >= 2;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        f.first_differences.push_back(d);
        f.strictly_decreasing = f.strictly_decreasing && d < 0.0;
        f.strictly_increasing = f.strictly_increasing && d > 0.0;
    }
    return f;
}

double hausdorff_to_interval(const std::vector<double>& points, double lower, double upper) {
    const FillMetrics m = fill_metrics(points, lower, upper);
    return std::max(m.coverage_gap, m.overshoot);
}

StudyAxis study_axis_from_string(const std::string& name) {
    if (name == "n") return StudyAxis::N;
    if (name == "eps") return StudyAxis::Eps;
    if (name == "trule") return StudyAxis::TRule;
    throw InvalidInput("unknown study axis '" + name + "' (expected n, eps or trule)");
}

std::string to_string(StudyAxis axis) {
    switch (axis) {
        case StudyAxis::N: return "n";
        case StudyAxis::Eps: return "eps";
        case StudyAxis::TRule: return "trule";
    }
    return "?";
}

namespace {

std::string error_type(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const NotHermitian*>(&e)) return "NotHermitian";
    if (dynamic_cast<const SpectralCollision*>(&e)) return "SpectralCollision";
    if (dynamic_cast<const OverflowGuard*>(&e)) return "OverflowGuard";
    if (dynamic_cast<const SingularInverse*>(&e)) return "SingularInverse";
    if (dynamic_cast<const BoundViolation*>(&e)) return "BoundViolation";
    if (dynamic_cast<const Divergent*>(&e)) return "Divergent";
    if (dynamic_cast<const InvalidInput*>(&e)) return "InvalidInput";
    return "Error";
}

json fill_json(const FillMetrics& m) {
    return {{"lower", m.lower},           {"upper", m.upper},
            {"max_gap", m.max_gap},       {"coverage_gap", m.coverage_gap},
            {"overshoot", m.overshoot},   {"points_inside", m.points_inside}};
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Largest |e^{i a} - e^{i b}| over rank-matched phase lists.
double phase_mismatch(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        worst = std::max(worst, std::abs(std::polar(1.0, a[i]) - std::polar(1.0, b[i])));
    }
    return worst;
}

std::vector<double> sorted_by_distance_from_one(std::vector<double> phases) {
    std::sort(phases.begin(), phases.end(), [](double x, double y) {
        return std::abs(std::polar(1.0, x) - 1.0) > std::abs(std::polar(1.0, y) - 1.0);
    });
    return phases;
}

struct Check {
    std::string name;
    double probe = 0.0;
    int n = 0;
    double eps = 0.0;   // 0 when the check does not involve smoothing
    double value = 0.0;
    double threshold = 0.0;

    bool pass() const { return std::isfinite(value) && value <= threshold; }
    json to_json() const {
        return {{"check", name}, {"probe", probe},     {"n", n},          {"eps", eps},
                {"value", value}, {"threshold", threshold}, {"pass", pass()}};
    }
};

struct ModelContext {
    const ExperimentConfig* config = nullptr;
    OperatorPair pair;
    PairSpectra spectra;
    bool schrodinger = false;
    PotentialSpec potential;
};

LadderOptions ladder_options(const ExperimentConfig& c, bool keep_densities) {
    LadderOptions lo;
    lo.kappa = c.kappa;
    lo.scattering.retention_floor = c.retention_floor;
    lo.keep_densities = keep_densities;
    return lo;
}

json ladder_json(const ScatteringLadder& L) {
    json members = json::array();
    for (const auto& m : L.members) {
        members.push_back({{"eps", m.eps},
                           {"admissible", m.admissible},
                           {"unitarity_defect", m.unitarity_defect},
                           {"retention_threshold", m.retention_threshold},
                           {"a_from_s", m.a_from_s},
                           {"a_norm", m.a_norm},
                           {"a_identity_residual", m.a_identity_residual},
                           {"resolvent_residual", m.resolvent_residual},
                           {"condition", m.condition},
                           {"xi_smoothed", m.xi_smoothed},
                           {"phases", m.phases}});
    }
    const Predictions pred = L.predictions();
    return {{"lambda", L.lambda},
            {"level_spacing", L.level_spacing},
            {"members", members},
            {"eps_used", L.eps_used},
            {"fallback", L.fallback},
            {"phases", L.phases},
            {"phase_errors", L.phase_errors},
            {"a", L.a},
            {"a_error", L.a_error},
            {"a_norm", L.a_norm},
            {"xi_smoothed", L.xi_smoothed},
            {"xi_error", L.xi_error},
            {"unitarity_monotone", L.unitarity_monotone},
            {"band_edges", pred.band_edges}};
}

json difference_json(const DifferenceReport& d) {
    return {{"probe", d.probe},
            {"n", d.dim},
            {"dim_plus", d.dim_plus},
            {"dim_minus", d.dim_minus},
            {"count_shift", d.count_shift},
            {"trace", d.trace},
            {"pairing_defect", d.pairing_defect},
            {"pairing_count_mismatch", d.pairing_count_mismatch},
            {"idempotency_defect", d.idempotency_defect},
            {"min_eig", d.min_eig},
            {"max_eig", d.max_eig},
            {"middle_min", d.middle_min},
            {"middle_max", d.middle_max},
            {"middle_count", d.middle_spectrum.size()},
            {"fill", fill_json(d.fill)},
            {"hausdorff", hausdorff_to_interval(d.middle_spectrum, d.fill.lower, d.fill.upper)}};
}

struct ProbeResult {
    json data;
    std::vector<Check> checks;
    std::map<std::string, std::vector<double>> series;
    json fill_row;
    bool error = false;
};

// D(lambda; H, H0) + D(mu; h, h0) vanishes because mu = 1/(lambda - a) reverses order.
json invariance_json(const ModelContext& ctx, double lambda, const ScatteringLadder* ladder,
                     std::vector<Check>& checks) {
    const ExperimentConfig& c = *ctx.config;
    const ResolventTransform tr = resolvent_transform(ctx.pair, c.resolvent_shift);
    const double mu = tr.mu(lambda);
    const PairSpectra ts = decompose(tr.transformed);
    const ProjectionPair p = projection_pair(ctx.spectra, lambda);
    const ProjectionPair q = projection_pair(ts, mu);
    const double residual = herm_op_norm(hermitian_part((p.E - p.E0) + (q.E - q.E0)));
    const int n = static_cast<int>(ctx.pair.dim());
    checks.push_back({"invariance_projection", lambda, n, 0.0, residual, c.tolerances.invariance_projection});

    json j = {{"shift", c.resolvent_shift},
              {"mu", mu},
              {"jacobian", tr.jacobian(lambda)},
              {"projection_residual", residual},
              {"factorization_residual", factorization_residual(tr.transformed)}};
    if (ladder != nullptr) {
        std::vector<double> eps_mu;
        for (double e : c.ladder) eps_mu.push_back(e * tr.jacobian(lambda));
        const ScatteringLadder lt =
            scattering_ladder(tr.transformed, ts, mu, eps_mu, ladder_options(c, false));
        std::vector<double> conj;
        for (double th : lt.phases) conj.push_back(std::fmod(2.0 * M_PI - th, 2.0 * M_PI));
        const auto a = sorted_by_distance_from_one(ladder->phases);
        const auto b = sorted_by_distance_from_one(conj);
        double mismatch = phase_mismatch(a, b);
        if (a.size() != b.size()) mismatch = std::numeric_limits<double>::infinity();
        j["eps_mu"] = eps_mu;
        j["transformed_phases"] = lt.phases;
        j["conjugated_phases"] = b;
        j["phase_mismatch"] = std::isfinite(mismatch) ? json(mismatch) : json(nullptr);
        j["retained_counts"] = {a.size(), b.size()};
        checks.push_back({"invariance_phase", lambda, n, c.ladder.back(), mismatch,
                          c.tolerances.invariance_phase});
    }
    return j;
}

ProbeResult run_probe(const ModelContext& ctx, double lambda, std::size_t index) {
    const ExperimentConfig& c = *ctx.config;
    ProbeResult r;
    const int n = static_cast<int>(ctx.pair.dim());
    r.data["probe"] = lambda;
    r.data["n"] = n;
    const std::string tag = "_p" + std::to_string(index);
    try {
        require_gap(ctx.spectra.free, lambda, kProbeGap, "probe (H0)");
        require_gap(ctx.spectra.perturbed, lambda, kProbeGap, "probe (H)");

        std::optional<ScatteringLadder> ladder;
        if (c.checks.scattering) {
            const bool densities = ctx.schrodinger || c.checks.gram;
            ladder = scattering_ladder(ctx.pair, ctx.spectra, lambda, c.ladder, ladder_options(c, densities));
            r.data["scattering"] = ladder_json(*ladder);
            for (const auto& m : ladder->members) {
                r.checks.push_back({"resolvent", lambda, n, m.eps, m.resolvent_residual, c.tolerances.resolvent});
                r.checks.push_back({"a_identity", lambda, n, m.eps, m.a_identity_residual, c.tolerances.a_identity});
            }
            const BirmanKreinResult bk = birman_krein_check(ctx.spectra, lambda, *ladder);
            r.data["birman_krein"] = {{"xi", bk.xi},
                                      {"det_s", cplx_json(bk.det_s)},
                                      {"defect", bk.defect},
                                      {"xi_smoothed", bk.xi_smoothed},
                                      {"defect_smoothed", bk.defect_smoothed}};
            r.series["phases" + tag] = ladder->phases;
        }

        DifferenceOptions dopt;
        const auto& exact = ctx.pair.meta.exact;
        if (exact.count("difference_lower") && exact.count("difference_upper")) {
            dopt.target_lower = exact.at("difference_lower");
            dopt.target_upper = exact.at("difference_upper");
        } else if (ladder && ctx.schrodinger) {
            dopt.target_lower = -std::max(ladder->a, 0.0);
            dopt.target_upper = std::max(ladder->a, 0.0);
        }
        const DifferenceReport d = projection_difference(ctx.spectra, lambda, dopt);
        r.data["difference"] = difference_json(d);
        r.series["d_spectrum" + tag] = d.spectrum;
        r.checks.push_back({"pairing", lambda, n, 0.0, d.pairing_defect, c.tolerances.pairing});
        const double dsq_block = dsq_block_check(ctx.spectra, lambda);
        r.data["dsq_block_residual"] = dsq_block;
        r.checks.push_back({"dsq_block", lambda, n, 0.0, dsq_block, c.tolerances.dsq_block_per_dim * n});
        r.fill_row = {{"probe", lambda},
                      {"n", n},
                      {"eps", ladder ? json(ladder->eps_used) : json::array()},
                      {"target", {dopt.target_lower, dopt.target_upper}},
                      {"min_eig", d.middle_min},
                      {"max_eig", d.middle_max},
                      {"max_gap", d.fill.max_gap},
                      {"coverage_gap", d.fill.coverage_gap},
                      {"overshoot", d.fill.overshoot},
                      {"hausdorff", hausdorff_to_interval(d.middle_spectrum, dopt.target_lower,
                                                          dopt.target_upper)}};

        if (c.checks.corner) {
            std::optional<double> top;
            double second = std::numeric_limits<double>::quiet_NaN();
            if (ladder && !ladder->phases.empty()) {
                const auto edges = ladder->predictions().band_edges;
                top = edges[0] * edges[0];
                if (edges.size() > 1) second = edges[1] * edges[1];
            }
            const CornerSpectrum cs = corner_spectrum(ctx.spectra, lambda, +1, top);
            json cj = {{"max_eig", cs.eigenvalues.empty() ? 0.0 : cs.eigenvalues.back()},
                       {"count", cs.eigenvalues.size()}};
            if (top) cj["predicted_top"] = *top;
            if (std::isfinite(second)) cj["predicted_edge"] = second;
            if (cs.fill) cj["fill"] = fill_json(*cs.fill);
            const double bp = counting_breakpoint(cs.eigenvalues, 1e-2);
            cj["breakpoint"] = std::isfinite(bp) ? json(bp) : json(nullptr);
            r.data["corner"] = cj;
            r.series["corner_spectrum" + tag] = cs.eigenvalues;
        }

        if (c.checks.zops) {
            const double entries = static_cast<double>(n) * ctx.pair.aux_dim() * ProductOptions{}.initial_nodes;
            const ProductReport product = entries <= kZMaxEntries ? product_check(ctx.pair, ctx.spectra, lambda)
                                                        : product_oracle(ctx.pair, ctx.spectra, lambda);
            json bj = {{"residual_oracle", product.residual_oracle},
                       {"sylvester_residual", product.sylvester_residual},
                       {"gap", product.gap},
                       {"direct_computed", product.direct_computed}};
            if (product.direct_computed) {
                bj["residual_direct"] = product.residual_direct;
                bj["representation_residual"] = product.representation_residual;
                bj["t_nodes"] = product.t_nodes;
                bj["direct_history"] = product.direct_history;
            }
            r.data["product"] = bj;
            r.checks.push_back({"product_oracle", lambda, n, 0.0, product.residual_oracle,
                                c.tolerances.product_oracle_per_dim * n});
        }

        if (c.checks.invariance) {
            r.data["invariance"] = invariance_json(ctx, lambda, ladder ? &*ladder : nullptr, r.checks);
        }

        if (c.checks.transfer && ctx.schrodinger && ladder) {
            const TransferMatrixResult tm = transfer_matrix_smatrix(ctx.potential, lambda);
            const std::vector<double> oracle(tm.phases.begin(), tm.phases.end());
            json tj = {{"t", cplx_json(tm.t)},
                       {"r_left", cplx_json(tm.r_left)},
                       {"r_right", cplx_json(tm.r_right)},
                       {"phases", oracle},
                       {"a", tm.a},
                       {"a_difference", std::abs(tm.a - ladder->a)},
                       {"flux_defect", tm.flux_defect},
                       {"unitarity_defect", tm.unitarity_defect},
                       {"reciprocity_defect", tm.reciprocity_defect}};
            if (ladder->phases.size() == oracle.size()) {
                tj["phase_mismatch"] = phase_mismatch(ladder->phases, oracle);
            }
            if (ladder->F0prime.size() > 0) {
                tj["fiber_consistency"] = fiber_consistency(ctx.potential, lambda, ladder->F0prime);
            }
            r.data["transfer"] = tj;
        }

        if (c.checks.gram) {
            const PairSpectra s = shift_spectra(ctx.spectra, lambda);
            const double gap = std::min(spectral_gap(s.free, 0.0), spectral_gap(s.perturbed, 0.0));
            double radius = gap;
            for (const auto* d : {&s.free, &s.perturbed}) {
                radius = std::max({radius, std::abs(d->eigenvalues(0)),
                                   std::abs(d->eigenvalues(d->dim() - 1))});
            }
            const int nodes = c.trule_sizes.empty() ? 120 : c.trule_sizes[c.trule_sizes.size() / 2];
            const GramComparisonReport gram =
                gram_comparison(ctx.pair, default_trule(gap, radius, nodes), c.ladder, lambda, c.kappa);
            const auto ratio10 = [](const std::vector<double>& s) {
                return s.size() >= 10 && s[0] > 0 ? s[9] / s[0] : 0.0;
            };
            r.data["gram"] = {{"t_nodes", gram.t_nodes},
                                {"eps_used", gram.eps_used},
                                {"free_ratio", gram.free_ratio},
                                {"perturbed_ratio", gram.perturbed_ratio},
                                {"free_sigma1", gram.free_singular_values.front()},
                                {"perturbed_sigma1", gram.perturbed_singular_values.front()},
                                {"free_sigma10_over_sigma1", ratio10(gram.free_singular_values)},
                                {"perturbed_sigma10_over_sigma1", ratio10(gram.perturbed_singular_values)},
                                {"free_decay_exponent", gram.free_decay_exponent},
                                {"perturbed_decay_exponent", gram.perturbed_decay_exponent},
                                {"gram_psd_defect", gram.gram_psd_defect}};
            r.series["gram_free_sigma" + tag] = gram.free_singular_values;
            r.series["gram_perturbed_sigma" + tag] = gram.perturbed_singular_values;
        }
        r.data["status"] = "ok";
    } catch (const std::exception& e) {
        r.error = true;
        r.data["status"] = "error";
        r.data["error"] = {{"type", error_type(e)}, {"message", e.what()}};
    }
    return r;
}

ModelContext make_context(const ExperimentConfig& c, const ModelParams& model) {
    ModelContext ctx;
    ctx.config = &c;
    ctx.pair = build_model(model);
    ctx.spectra = decompose(ctx.pair);
    ctx.schrodinger = model.kind == ModelKind::Schrodinger;
    if (ctx.schrodinger) ctx.potential = preset_potential(model);
    return ctx;
}

json model_json(const ModelContext& ctx) {
    json exact = json::object();
    for (const auto& [k, v] : ctx.pair.meta.exact) exact[k] = v;
    return {{"descriptor", ctx.pair.meta.descriptor},
            {"n", ctx.pair.dim()},
            {"aux_dim", ctx.pair.aux_dim()},
            {"factorization_residual", factorization_residual(ctx.pair)},
            {"facts", exact}};
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
    validate_ladder(config.ladder);
    Report report;
    json& j = report.json;
    j["schema"] = 1;
    j["kind"] = "run";
    j["config"] = to_json(config);
    j["probes"] = json::array();
    j["identity_table"] = json::array();
    j["fill_table"] = json::array();
    if (config.probes.empty()) {
        j["pass"] = true;
        j["probe_errors"] = 0;
        return report;
    }

    const ModelContext ctx = make_context(config, config.model);
    j["model"] = model_json(ctx);

    const std::vector<ProbeResult> results = parallel_map<ProbeResult>(
        config.probes.size(), config.jobs,
        [&](std::size_t i) { return run_probe(ctx, config.probes[i], i); });

    for (const auto& r : results) {
        j["probes"].push_back(r.data);
        if (r.error) {
            ++report.probe_errors;
            report.pass = false;
            continue;
        }
        for (const auto& chk : r.checks) {
            j["identity_table"].push_back(chk.to_json());
            report.pass = report.pass && chk.pass();
        }
        j["fill_table"].push_back(r.fill_row);
        for (const auto& [name, values] : r.series) report.series[name] = values;
    }
    j["pass"] = report.pass;
    j["probe_errors"] = report.probe_errors;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;  // one row per axis point, aligned with names
};

json table_json(const std::string& axis, const std::vector<double>& points, const Table& t,
                std::map<std::string, std::vector<double>>& series) {
    json metrics = json::object();
    for (std::size_t m = 0; m < t.names.size(); ++m) {
        std::vector<double> values;
        for (const auto& row : t.rows) values.push_back(row[m]);
        const SequenceFlags f = sequence_flags(values);
        metrics[t.names[m]] = {{"values", values},
                               {"first_differences", f.first_differences},
                               {"strictly_decreasing", f.strictly_decreasing},
                               {"strictly_increasing", f.strictly_increasing}};
        series["study_" + axis + "_" + t.names[m]] = values;
    }
    return {{"axis", axis}, {"points", points}, {"metrics", metrics}};
}

std::vector<double> n_row(const ExperimentConfig& c, int size, double lambda) {
    ModelParams model = c.model;
    model.n = size;
    const ModelContext ctx = make_context(c, model);
    require_gap(ctx.spectra.free, lambda, kProbeGap, "study probe (H0)");
    require_gap(ctx.spectra.perturbed, lambda, kProbeGap, "study probe (H)");
    double a = std::numeric_limits<double>::quiet_NaN();
    double phase = std::numeric_limits<double>::quiet_NaN();
    DifferenceOptions dopt;
    const auto& exact = ctx.pair.meta.exact;
    if (c.checks.scattering) {
        const ScatteringLadder L = scattering_ladder(ctx.pair, ctx.spectra, lambda, c.ladder, ladder_options(c, false));
        a = L.a;
        if (!L.phases.empty()) phase = L.phases.front();
        if (ctx.schrodinger) {
            dopt.target_lower = -std::max(a, 0.0);
            dopt.target_upper = std::max(a, 0.0);
        }
    }
    if (exact.count("difference_lower") && exact.count("difference_upper")) {
        dopt.target_lower = exact.at("difference_lower");
        dopt.target_upper = exact.at("difference_upper");
    }
    const DifferenceReport d = projection_difference(ctx.spectra, lambda, dopt);
    const double extreme = std::max(std::abs(d.min_eig - dopt.target_lower), std::abs(d.max_eig - dopt.target_upper));
    return {d.min_eig,
            d.max_eig,
            extreme,
            d.fill.max_gap,
            hausdorff_to_interval(d.middle_spectrum, dopt.target_lower, dopt.target_upper),
            d.pairing_defect,
            a,
            phase};
}

}  // namespace

Report convergence_study(const ExperimentConfig& config, StudyAxis axis) {
    validate_ladder(config.ladder);
    if (config.probes.empty()) throw InvalidInput("convergence_study: needs a probe");
    const double lambda = config.probes.front();
    Report report;
    json& j = report.json;
    j["schema"] = 1;
    j["kind"] = "study";
    j["config"] = to_json(config);
    j["probe"] = lambda;

    Table t;
    std::vector<double> points;
    if (axis == StudyAxis::N) {
        if (config.sizes.size() < 3) throw InvalidInput("convergence_study: axis n needs at least 3 sizes");
        t.names = {"d_min", "d_max", "d_extreme_distance", "d_max_gap", "d_hausdorff", "pairing_defect",
                   "a", "phase_1"};
        for (int s : config.sizes) points.push_back(s);
        t.rows = parallel_map<std::vector<double>>(config.sizes.size(), config.jobs, [&](std::size_t i) {
            return n_row(config, config.sizes[i], lambda);
        });
    } else if (axis == StudyAxis::Eps) {
        if (config.ladder.size() < 3) throw InvalidInput("convergence_study: axis eps needs at least 3 ladder members");
        const ModelContext ctx = make_context(config, config.model);
        require_gap(ctx.spectra.free, lambda, kProbeGap, "study probe (H0)");
        require_gap(ctx.spectra.perturbed, lambda, kProbeGap, "study probe (H)");
        j["model"] = model_json(ctx);
        t.names = {"a_from_s", "unitarity_defect", "xi_smoothed", "a_identity_residual", "resolvent_residual",
                   "phase_1", "condition"};
        points = config.ladder;
        ScatteringOptions so;
        so.retention_floor = config.retention_floor;
        t.rows = parallel_map<std::vector<double>>(config.ladder.size(), config.jobs, [&](std::size_t i) {
            const ScatteringBundle b = scattering_bundle(ctx.pair, ctx.spectra, lambda, config.ladder[i], so);
            double phase = std::arg(b.s_eigenvalues.front());
            if (phase < 0.0) phase += 2.0 * M_PI;
            return std::vector<double>{b.a_from_s,        b.unitarity_defect, b.xi_smoothed,
                                       b.a_identity_residual, b.resolvent_residual,      phase,
                                       b.condition};
        });
    } else {
        if (config.trule_sizes.size() < 3) throw InvalidInput("convergence_study: axis trule needs at least 3 sizes");
        const ModelContext ctx = make_context(config, config.model);
        const double entries = static_cast<double>(ctx.pair.dim()) * ctx.pair.aux_dim() *
                               *std::max_element(config.trule_sizes.begin(), config.trule_sizes.end());
        if (entries > kZMaxEntries) throw InvalidInput("convergence_study: Z matrices too large for this model");
        j["model"] = model_json(ctx);
        const PairSpectra s = shift_spectra(ctx.spectra, lambda);
        require_gap(s.free, 0.0, kProbeGap, "study probe (H0)");
        require_gap(s.perturbed, 0.0, kProbeGap, "study probe (H)");
        const double gap = std::min(spectral_gap(s.free, 0.0), spectral_gap(s.perturbed, 0.0));
        double radius = gap;
        for (const auto* d : {&s.free, &s.perturbed}) {
            radius = std::max({radius, std::abs(d->eigenvalues(0)), std::abs(d->eigenvalues(d->dim() - 1))});
        }
        t.names = {"residual_direct", "residual_oracle", "representation_residual", "z0_norm", "z_norm"};
        for (int s : config.trule_sizes) points.push_back(s);
        t.rows = parallel_map<std::vector<double>>(config.trule_sizes.size(), config.jobs, [&](std::size_t i) {
            const QuadratureRule rule = default_trule(gap, radius, config.trule_sizes[i]);
            const ProductReport b = product_check(ctx.pair, rule, lambda);
            const auto norms = z_norms(build_z_ops(ctx.pair, ctx.spectra, rule, lambda));
            return std::vector<double>{b.residual_direct, b.residual_oracle, b.representation_residual,
                                       norms.first, norms.second};
        });
    }
    j["table"] = table_json(to_string(axis), points, t, report.series);
    j["pass"] = true;
    return report;
}

}  // namespace specdiff
