#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "specdiff/operator_models.hpp"

namespace specdiff {

/// Deterministic generator. mt19937_64 output is fixed by the standard; the
/// distributions are not, so the mapping to doubles is done here.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
    double normal();                     // Box-Muller
    double sign();                       // +1 or -1

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class ModelKind { Krein, Schrodinger, FiniteRandom };

struct ModelParams {
    ModelKind kind = ModelKind::Krein;
    std::string preset;        // canonical preset name
    int n = 400;               // matrix size (grid points for Schrodinger)
    double truncation = 40.0;  // Krein L, Schrodinger half width X
    std::uint64_t seed = 7;    // finite:random
    int rank = 3;              // finite:random auxiliary dimension
    double min_gap = 1e-3;     // finite:random spectral gap kept at every probe
    std::vector<double> probes;  // finite:random conditions its draw on these
};

/// Everything a run needs beyond the matrices.
struct Preset {
    std::string name;
    std::string summary;
    ModelParams model;
    std::vector<double> probes;
    std::vector<double> ladder;
    double kappa = 1.0;              // eps admissibility factor (eps >= kappa * spacing)
    double retention_floor = 2e-2;
    double resolvent_shift = -1.0;   // a of the resolvent transform, below both spectra
    std::vector<int> sizes;          // default n axis of convergence studies
    std::vector<int> trule_sizes;    // default t-rule axis
};

/// Canonical names; finite:random takes a seed argument, e.g. "finite:random(7)".
std::vector<std::string> preset_names();

/// Throws InvalidInput for unknown names or a malformed seed.
Preset find_preset(const std::string& name);

/// The potential behind a Schrodinger preset at the given size and half width.
PotentialSpec preset_potential(const ModelParams& model);

/// Random gapped pair: H0 = diag(uniform[-1, 1]), G Gaussian (rank x n) scaled
/// by 1/sqrt(n), V0 = diag(+-1). Redrawn until both spectra keep min_gap at
/// every probe.
OperatorPair random_finite_pair(int n, int rank, std::uint64_t seed,
                                const std::vector<double>& probes, double min_gap = 1e-3);

OperatorPair build_model(const ModelParams& model);

}  // namespace specdiff
