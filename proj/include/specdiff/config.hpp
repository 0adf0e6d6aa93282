#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "specdiff/errors.hpp"
#include "specdiff/presets.hpp"

namespace specdiff {

/// Invalid configuration; `path` names the offending field, e.g. "ladder[2]".
class ConfigError : public InvalidInput {
public:
    ConfigError(const std::string& path, const std::string& message)
        : InvalidInput(path + ": " + message), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Threshold names accepted under "tolerances".
struct Tolerances {
    double resolvent = 1e-9;           // T = T0 (I + V0 T0)^{-1}, absolute Frobenius
    double a_identity = 1e-9;          // (S~ - I)*(S~ - I)/4 = A, absolute Frobenius
    double dsq_block_per_dim = 1e-10;  // D^2 block decomposition, times dim
    double product_oracle_per_dim = 1e-8;
    double pairing = 1e-6;
    double invariance_projection = 1e-12;
    double invariance_phase = 2e-2;
};

struct CheckToggles {
    bool scattering = true;
    bool corner = true;
    bool zops = true;
    bool invariance = true;
    bool gram = false;
    bool transfer = true;   // Schrodinger presets only
};

struct ExperimentConfig {
    std::string preset;
    ModelParams model;
    std::vector<double> probes;
    std::vector<double> ladder;
    double kappa = 1.0;
    double retention_floor = 2e-2;
    double resolvent_shift = -1.0;
    std::vector<int> sizes;
    std::vector<int> trule_sizes;
    Tolerances tolerances;
    CheckToggles checks;
    std::string output = "out";
    std::uint64_t seed = 7;
    int jobs = 1;
};

/// Preset defaults with no overrides.
ExperimentConfig default_config(const std::string& preset);

/// Validates every field; unknown keys are rejected so typos surface.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Re-seeds the random model; keeps the model's probe conditioning in sync.
void apply_seed(ExperimentConfig& config, std::uint64_t seed);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace specdiff
