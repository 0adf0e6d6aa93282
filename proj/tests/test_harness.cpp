#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "specdiff/config.hpp"
#include "specdiff/csv.hpp"
#include "specdiff/harness.hpp"
#include "specdiff/presets.hpp"

using namespace specdiff;
using nlohmann::json;

namespace {

std::string config_error_path(const json& j) {
    try {
        config_from_json(j);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<accepted>";
}

}  // namespace

TEST_CASE("config validation reports the offending field path") {
    CHECK(config_error_path({{"preset", "krein"}, {"model", {{"nn", 3}}}}) == "model.nn");
    CHECK(config_error_path({{"preset", "krein"}, {"ladder", {0.1, 0.2}}}) == "ladder[1]");
    CHECK(config_error_path({{"preset", "krein"}, {"ladder", {0.1, -0.2}}}) == "ladder[1]");
    CHECK(config_error_path({{"preset", "krein"}, {"tolerances", {{"c2", 1e-9}}}}) == "tolerances.c2");
    CHECK(config_error_path({{"preset", "krein"}, {"checks", {{"gram", 1}}}}) == "checks.gram");
    CHECK(config_error_path({{"preset", "krein"}, {"jobs", 0}}) == "jobs");
    CHECK(config_error_path({{"preset", "krein"}, {"probes", {0.5, "x"}}}) == "probes[1]");
    CHECK(config_error_path({{"preset", "krein"}, {"schema", 2}}) == "schema");
    CHECK(config_error_path({{"preset", "nowhere"}}) == "preset");
    CHECK(config_error_path({{"ladder", {0.1}}}) == "preset");
    CHECK(config_error_path({{"preset", "krein"}, {"colour", "red"}}) == "colour");
    CHECK(config_error_path(json::array()) == "config");
    CHECK(config_error_path({{"preset", "krein"}}) == "<accepted>");
}

TEST_CASE("config round trip and seed handling") {
    json j = {{"schema", 1},
              {"preset", "finite:random(3)"},
              {"probes", {0.1}},
              {"ladder", {0.1, 0.05, 0.02}},
              {"seed", 42},
              {"jobs", 2},
              {"output", "somewhere"}};
    const auto c = config_from_json(j);
    CHECK(c.model.kind == ModelKind::FiniteRandom);
    CHECK(c.model.seed == 42);
    CHECK(c.seed == 42);
    CHECK(c.jobs == 2);
    CHECK(c.output == "somewhere");
    CHECK(c.model.probes == std::vector<double>{0.1});

    const auto again = config_from_json(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK_FALSE(to_json(c).contains("jobs"));
}

TEST_CASE("preset lookup") {
    const auto names = preset_names();
    CHECK(std::find(names.begin(), names.end(), "krein") != names.end());
    CHECK(find_preset("finite:random(12)").model.seed == 12);
    CHECK(find_preset("schrodinger:sech2").model.kind == ModelKind::Schrodinger);
    CHECK_THROWS_AS(find_preset("finite:random(x)"), InvalidInput);
    CHECK_THROWS_AS(find_preset("finite:random()"), InvalidInput);
    CHECK_THROWS_AS(find_preset("harmonic"), InvalidInput);
}

TEST_CASE("seeded generator is reproducible and roughly standard normal") {
    SeededRng a(99);
    SeededRng b(99);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        sum += x;
        sum2 += x * x;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.05));
    SeededRng c(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform(-1.0, 1.0);
        CHECK(u >= -1.0);
        CHECK(u < 1.0);
        CHECK(std::abs(c.sign()) == 1.0);
    }
}

TEST_CASE("series CSV has an index,value header and round-trips doubles") {
    std::ostringstream out;
    write_series_csv(out, {0.1, -2.5e-17});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,value");
    std::getline(in, line);
    CHECK(line.rfind("0,", 0) == 0);
    CHECK(std::stod(line.substr(2)) == 0.1);
    std::getline(in, line);
    CHECK(std::stod(line.substr(2)) == -2.5e-17);
}

TEST_CASE("worker pool covers every index and forwards exceptions") {
    std::vector<std::atomic<int>> hits(50);
    run_indexed(50, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);

    const auto squares = parallel_map<int>(10, 3, [](std::size_t i) { return static_cast<int>(i * i); });
    for (int i = 0; i < 10; ++i) CHECK(squares[i] == i * i);

    CHECK_THROWS_AS(run_indexed(8, 2,
                                [](std::size_t i) {
                                    if (i == 5) throw std::runtime_error("boom");
                                }),
                    std::runtime_error);
}

TEST_CASE("sequence flags and Hausdorff distance to an interval") {
    const auto f = sequence_flags({3.0, 2.0, 1.5});
    CHECK(f.strictly_decreasing);
    CHECK_FALSE(f.strictly_increasing);
    CHECK(f.first_differences == std::vector<double>{-1.0, -0.5});
    CHECK_FALSE(sequence_flags({1.0, 1.0, 2.0}).strictly_increasing);

    // Coverage gap 0.5 at x = 1 dominates the overshoot 0.1 at -1.1.
    CHECK(hausdorff_to_interval({-1.1, 0.0, 0.5}, -1.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("run_experiment is deterministic for a fixed seed") {
    auto config = default_config("finite:random(7)");
    config.checks.gram = true;
    const auto first = run_experiment(config);
    config.jobs = 3;
    const auto second = run_experiment(config);
    CHECK(first.json.dump() == second.json.dump());
    CHECK(first.series == second.series);
    CHECK(first.json["schema"] == 1);
    CHECK(first.pass);
    CHECK(first.probe_errors == 0);
}

TEST_CASE("empty probe list yields empty tables and a passing report") {
    auto config = default_config("finite:random(5)");
    config.probes.clear();
    const auto r = run_experiment(config);
    CHECK(r.pass);
    CHECK(r.json["probes"].empty());
    CHECK(r.json["identity_table"].empty());
    CHECK(r.json["fill_table"].empty());
}

TEST_CASE("a probe on an eigenvalue is recorded as a per-probe error") {
    auto config = default_config("finite:random(5)");
    config.model.probes = {0.25};
    const double on_eigenvalue = decompose(build_model(config.model)).perturbed.eigenvalues(3);
    config.probes = {on_eigenvalue, 0.25};
    const auto r = run_experiment(config);
    CHECK(r.probe_errors == 1);
    CHECK_FALSE(r.pass);
    CHECK(r.json["probes"][0]["status"] == "error");
    CHECK(r.json["probes"][0]["error"]["type"] == "SpectralCollision");
    CHECK(r.json["probes"][1]["status"] == "ok");
}

TEST_CASE("Krein n-study: table layout and monotonicity flags") {
    auto config = default_config("krein");
    config.sizes = {100, 200, 400};
    const auto r = convergence_study(config, StudyAxis::N);
    CHECK(r.json["table"]["points"] == json({100.0, 200.0, 400.0}));
    for (const auto& [name, metric] : r.json["table"]["metrics"].items()) {
        const auto values = metric["values"].get<std::vector<double>>();
        REQUIRE(values.size() == 3);
        const auto flags = sequence_flags(values);
        CHECK(metric["strictly_decreasing"].get<bool>() == flags.strictly_decreasing);
        CHECK(metric["first_differences"].get<std::vector<double>>() == flags.first_differences);
        CHECK(r.series.count("study_n_" + name) == 1);
    }
    // D has an exact -1 eigenvalue (one level crosses 1/2) and a pairing-symmetric middle.
    for (double v : r.json["table"]["metrics"]["d_min"]["values"]) CHECK(v == doctest::Approx(-1.0).epsilon(1e-10));
    for (double v : r.json["table"]["metrics"]["pairing_defect"]["values"]) CHECK(v < 1e-6);
}

TEST_CASE("eps and trule studies on a random pair") {
    const auto config = default_config("finite:random(7)");
    const auto eps = convergence_study(config, StudyAxis::Eps);
    for (double v : eps.json["table"]["metrics"]["a_identity_residual"]["values"]) CHECK(v < 1e-9);
    const auto trule = convergence_study(config, StudyAxis::TRule);
    const auto& direct = trule.json["table"]["metrics"]["residual_direct"]["values"];
    const auto& oracle = trule.json["table"]["metrics"]["residual_oracle"]["values"];
    CHECK(direct.back().get<double>() < direct.front().get<double>());
    CHECK(oracle.back().get<double>() < 1e-8 * config.model.n);

    auto short_axis = config;
    short_axis.sizes = {6, 12};
    CHECK_THROWS_AS(convergence_study(short_axis, StudyAxis::N), InvalidInput);
    CHECK(study_axis_from_string("trule") == StudyAxis::TRule);
    CHECK_THROWS_AS(study_axis_from_string("time"), InvalidInput);
}
