#include "specdiff/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace specdiff {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
        }
    }
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

double get_positive(const json& j, const std::string& path) {
    const double v = get_number(j, path);
    if (!(v > 0.0)) throw ConfigError(path, "must be positive");
    return v;
}

int get_count(const json& j, const std::string& path, int minimum) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < minimum || v > 100000) {
        throw ConfigError(path, "must lie in [" + std::to_string(minimum) + ", 100000]");
    }
    return static_cast<int>(v);
}

std::uint64_t get_seed(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        throw ConfigError(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

std::vector<double> get_reals(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<int> get_counts(const json& j, const std::string& path, int minimum) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_count(j[i], path + "[" + std::to_string(i) + "]", minimum));
    }
    return out;
}

void check_ladder(const std::vector<double>& eps) {
    if (eps.empty()) throw ConfigError("ladder", "needs at least one member");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const std::string path = "ladder[" + std::to_string(i) + "]";
        if (!(eps[i] > 0.0)) throw ConfigError(path, "must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError(path, "ladder must be strictly decreasing");
    }
}

void read_model(const json& j, ExperimentConfig& c) {
    require_object(j, "model");
    reject_unknown(j, "model", {"n", "truncation", "seed", "rank", "min_gap"});
    const int min_n = c.model.kind == ModelKind::FiniteRandom ? 1 : 3;
    if (j.contains("n")) c.model.n = get_count(j["n"], "model.n", min_n);
    if (j.contains("truncation")) c.model.truncation = get_positive(j["truncation"], "model.truncation");
    if (j.contains("seed")) c.model.seed = get_seed(j["seed"], "model.seed");
    if (j.contains("rank")) c.model.rank = get_count(j["rank"], "model.rank", 1);
    if (j.contains("min_gap")) {
        const double g = get_positive(j["min_gap"], "model.min_gap");
        if (g >= 0.1) throw ConfigError("model.min_gap", "must be below 0.1");
        c.model.min_gap = g;
    }
}

void read_tolerances(const json& j, Tolerances& t) {
    require_object(j, "tolerances");
    const std::map<std::string, double*> fields = {
        {"resolvent", &t.resolvent},
        {"a_identity", &t.a_identity},
        {"dsq_block_per_dim", &t.dsq_block_per_dim},
        {"product_oracle_per_dim", &t.product_oracle_per_dim},
        {"pairing", &t.pairing},
        {"invariance_projection", &t.invariance_projection},
        {"invariance_phase", &t.invariance_phase},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = fields.find(key);
        if (it == fields.end()) throw ConfigError("tolerances." + key, "unknown tolerance");
        *it->second = get_positive(value, "tolerances." + key);
    }
}

void read_checks(const json& j, CheckToggles& t) {
    require_object(j, "checks");
    const std::map<std::string, bool*> fields = {
        {"scattering", &t.scattering}, {"corner", &t.corner},
        {"zops", &t.zops},             {"invariance", &t.invariance},
        {"gram", &t.gram},             {"transfer", &t.transfer},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = fields.find(key);
        if (it == fields.end()) throw ConfigError("checks." + key, "unknown check");
        *it->second = get_bool(value, "checks." + key);
    }
}

}  // namespace

ExperimentConfig default_config(const std::string& preset) {
    const Preset p = find_preset(preset);
    ExperimentConfig c;
    c.preset = p.name;
    c.model = p.model;
    c.probes = p.probes;
    c.ladder = p.ladder;
    c.kappa = p.kappa;
    c.retention_floor = p.retention_floor;
    c.resolvent_shift = p.resolvent_shift;
    c.sizes = p.sizes;
    c.trule_sizes = p.trule_sizes;
    if (p.model.kind == ModelKind::FiniteRandom) c.seed = p.model.seed;
    return c;
}

void apply_seed(ExperimentConfig& config, std::uint64_t seed) {
    config.seed = seed;
    if (config.model.kind == ModelKind::FiniteRandom) config.model.seed = seed;
}

ExperimentConfig config_from_json(const json& j) {
    require_object(j, "config");
    reject_unknown(j, "", {"schema", "preset", "model", "probes", "ladder", "kappa", "retention_floor",
                           "resolvent_shift", "sizes", "trule_sizes", "tolerances", "checks", "output",
                           "seed", "jobs"});
    if (j.contains("schema") && !(j["schema"].is_number_integer() && j["schema"].get<int>() == 1)) {
        throw ConfigError("schema", "only schema 1 is supported");
    }
    if (!j.contains("preset")) throw ConfigError("preset", "missing required field");
    if (!j["preset"].is_string()) throw ConfigError("preset", "expected a string");
    ExperimentConfig c;
    try {
        c = default_config(j["preset"].get<std::string>());
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ConfigError("preset", e.what());
    }

    if (j.contains("model")) read_model(j["model"], c);
    if (j.contains("probes")) c.probes = get_reals(j["probes"], "probes");
    if (j.contains("ladder")) c.ladder = get_reals(j["ladder"], "ladder");
    check_ladder(c.ladder);
    if (j.contains("kappa")) {
        c.kappa = get_number(j["kappa"], "kappa");
        if (c.kappa < 0.0) throw ConfigError("kappa", "must be non-negative");
    }
    if (j.contains("retention_floor")) {
        c.retention_floor = get_number(j["retention_floor"], "retention_floor");
        if (c.retention_floor < 0.0) throw ConfigError("retention_floor", "must be non-negative");
    }
    if (j.contains("resolvent_shift")) c.resolvent_shift = get_number(j["resolvent_shift"], "resolvent_shift");
    const int min_size = c.model.kind == ModelKind::FiniteRandom ? 1 : 3;
    if (j.contains("sizes")) c.sizes = get_counts(j["sizes"], "sizes", min_size);
    if (j.contains("trule_sizes")) c.trule_sizes = get_counts(j["trule_sizes"], "trule_sizes", 2);
    if (j.contains("tolerances")) read_tolerances(j["tolerances"], c.tolerances);
    if (j.contains("checks")) read_checks(j["checks"], c.checks);
    if (j.contains("output")) {
        if (!j["output"].is_string() || j["output"].get<std::string>().empty()) {
            throw ConfigError("output", "expected a non-empty path");
        }
        c.output = j["output"].get<std::string>();
    }
    if (j.contains("seed")) apply_seed(c, get_seed(j["seed"], "seed"));
    if (j.contains("jobs")) c.jobs = get_count(j["jobs"], "jobs", 1);
    if (c.model.kind == ModelKind::FiniteRandom) c.model.probes = c.probes;
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["preset"] = c.preset;
    j["model"] = {{"n", c.model.n},
                  {"truncation", c.model.truncation},
                  {"seed", c.model.seed},
                  {"rank", c.model.rank},
                  {"min_gap", c.model.min_gap}};
    j["probes"] = c.probes;
    j["ladder"] = c.ladder;
    j["kappa"] = c.kappa;
    j["retention_floor"] = c.retention_floor;
    j["resolvent_shift"] = c.resolvent_shift;
    j["sizes"] = c.sizes;
    j["trule_sizes"] = c.trule_sizes;
    j["tolerances"] = {{"resolvent", c.tolerances.resolvent},
                       {"a_identity", c.tolerances.a_identity},
                       {"dsq_block_per_dim", c.tolerances.dsq_block_per_dim},
                       {"product_oracle_per_dim", c.tolerances.product_oracle_per_dim},
                       {"pairing", c.tolerances.pairing},
                       {"invariance_projection", c.tolerances.invariance_projection},
                       {"invariance_phase", c.tolerances.invariance_phase}};
    j["checks"] = {{"scattering", c.checks.scattering}, {"corner", c.checks.corner},
                   {"zops", c.checks.zops},             {"invariance", c.checks.invariance},
                   {"gram", c.checks.gram},         {"transfer", c.checks.transfer}};
    j["output"] = c.output;
    j["seed"] = c.seed;
    return j;
}

}  // namespace specdiff
