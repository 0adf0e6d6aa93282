#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "specdiff/acceptance.hpp"
#include "specdiff/config.hpp"
#include "specdiff/csv.hpp"
#include "specdiff/harness.hpp"
#include "specdiff/presets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

struct Overrides {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

/// A config argument is a JSON file path, or a bare preset name as a shortcut.
specdiff::ExperimentConfig resolve_config(const std::string& arg) {
    if (!fs::exists(arg)) {
        for (const auto& name : specdiff::preset_names()) {
            if (name == arg) return specdiff::default_config(arg);
        }
        if (arg.rfind("finite:random(", 0) == 0) return specdiff::default_config(arg);
    }
    return specdiff::load_config(arg);
}

void apply(specdiff::ExperimentConfig& config, const Overrides& o) {
    if (o.out) config.output = *o.out;
    if (o.seed) specdiff::apply_seed(config, *o.seed);
    if (o.jobs) config.jobs = *o.jobs;
}

fs::path prepare_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw specdiff::InvalidInput("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw specdiff::InvalidInput("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

void write_report(const specdiff::Report& report, const std::string& dir) {
    const fs::path root = prepare_dir(dir);
    write_json(root / "report.json", report.json);
    for (const auto& [name, values] : report.series) {
        specdiff::write_series_csv((root / (name + ".csv")).string(), values);
    }
}

int cmd_run(const std::string& config_arg, const Overrides& o) {
    auto config = resolve_config(config_arg);
    apply(config, o);
    const auto report = specdiff::run_experiment(config);
    write_report(report, config.output);
    for (const auto& row : report.json["identity_table"]) {
        if (!row.value("pass", true)) std::cout << "[FAIL] " << row.dump() << '\n';
    }
    std::cout << (report.pass ? "[PASS]" : "[FAIL]") << " run " << config.preset << ": "
              << report.json["probes"].size() << " probe(s), " << report.probe_errors
              << " probe error(s); report in " << config.output << '\n';
    return report.pass ? kExitPass : kExitFail;
}

int cmd_study(const std::string& config_arg, const std::string& axis_name, const Overrides& o) {
    auto config = resolve_config(config_arg);
    apply(config, o);
    const auto axis = specdiff::study_axis_from_string(axis_name);
    const auto report = specdiff::convergence_study(config, axis);
    write_report(report, config.output);
    std::cout << (report.pass ? "[PASS]" : "[FAIL]") << " study " << config.preset << " axis "
              << specdiff::to_string(axis) << "; report in " << config.output << '\n';
    return report.pass ? kExitPass : kExitFail;
}

int cmd_verify_all(const std::optional<std::string>& config_path, const Overrides& o) {
    specdiff::AcceptanceOptions options;
    std::string out = "out";
    if (config_path) {
        const auto config = specdiff::load_config(*config_path);
        options.seed = config.seed;
        options.jobs = config.jobs;
        out = config.output;
    }
    if (o.out) out = *o.out;
    if (o.seed) options.seed = *o.seed;
    if (o.jobs) options.jobs = *o.jobs;

    const auto report = specdiff::verify_all(options);
    for (const auto& clause : report.clauses) std::cout << specdiff::format_clause(clause) << '\n';
    const fs::path root = prepare_dir(out);
    write_json(root / "report.json", report.json);
    write_json(root / "timing.json", report.timing);
    std::cout << (report.pass ? "[PASS]" : "[FAIL]") << " verify-all in " << report.seconds
              << " s; report in " << out << '\n';
    return report.pass ? kExitPass : kExitFail;
}

int cmd_presets() {
    for (const auto& name : specdiff::preset_names()) {
        // The seeded family is listed as a pattern; describe it through one member.
        const bool family = name.find('<') != std::string::npos;
        const auto preset = specdiff::find_preset(family ? "finite:random(7)" : name);
        std::cout << name << "  " << preset.summary << '\n';
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional spectral projection difference experiments"};
    app.require_subcommand(1);

    Overrides o;
    std::string out;
    std::uint64_t seed = 0;
    int jobs = 1;
    auto* out_opt = app.add_option("--out", out, "Output directory")->type_name("DIR");
    auto* seed_opt = app.add_option("--seed", seed, "Random seed")->type_name("INT");
    auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads")
                         ->type_name("INT")
                         ->check(CLI::Range(1, 1024));
    app.fallthrough();

    std::string config_arg;
    auto* run = app.add_subcommand("run", "Run every check of a config at its default sizes");
    run->add_option("config", config_arg, "Config file (JSON) or preset name")->required();

    std::string axis;
    auto* study = app.add_subcommand("study", "Convergence study along one axis");
    study->add_option("config", config_arg, "Config file (JSON) or preset name")->required();
    study->add_option("--axis", axis, "Study axis")->required()->check(CLI::IsMember({"n", "eps", "trule"}));

    std::string verify_config;
    auto* verify = app.add_subcommand("verify-all", "Run the acceptance suite");
    auto* verify_config_opt = verify->add_option("--config", verify_config, "Config supplying seed, jobs and output");

    auto* presets = app.add_subcommand("presets", "List model presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInvalid;
    }
    if (*out_opt) o.out = out;
    if (*seed_opt) o.seed = seed;
    if (*jobs_opt) o.jobs = jobs;

    try {
        if (*run) return cmd_run(config_arg, o);
        if (*study) return cmd_study(config_arg, axis, o);
        if (*verify) {
            std::optional<std::string> path;
            if (*verify_config_opt) path = verify_config;
            return cmd_verify_all(path, o);
        }
        if (*presets) return cmd_presets();
    } catch (const specdiff::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const specdiff::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitInvalid;
}
