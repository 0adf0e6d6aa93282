#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "specdiff/config.hpp"

namespace specdiff {

/// Runs task(i) for i in [0, count) on `jobs` workers; results come back in
/// index order whatever the scheduling.
template <typename T>
std::vector<T> parallel_map(std::size_t count, int jobs, const std::function<T(std::size_t)>& task);

/// Runs fn on `jobs` threads pulling indices from a shared counter.
void run_indexed(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

template <typename T>
std::vector<T> parallel_map(std::size_t count, int jobs, const std::function<T(std::size_t)>& task) {
    std::vector<T> out(count);
    run_indexed(count, jobs, [&](std::size_t i) { out[i] = task(i); });
    return out;
}

struct Report {
    nlohmann::json json;
    /// Plot-ready series, written as `<name>.csv`.
    std::map<std::string, std::vector<double>> series;
    bool pass = true;          // every thresholded check passed and no probe failed
    int probe_errors = 0;
};

/// Deterministic for fixed config; module errors are recorded per probe.
Report run_experiment(const ExperimentConfig& config);

enum class StudyAxis { N, Eps, TRule };
StudyAxis study_axis_from_string(const std::string& name);
std::string to_string(StudyAxis axis);

/// Needs at least three points on the axis. Each metric carries its values,
/// first differences and monotonicity flags.
Report convergence_study(const ExperimentConfig& config, StudyAxis axis);

/// Monotonicity summary of a sequence.
struct SequenceFlags {
    std::vector<double> first_differences;
    bool strictly_decreasing = false;
    bool strictly_increasing = false;
};
SequenceFlags sequence_flags(const std::vector<double>& values);

/// Distance from a finite set to an interval in the Hausdorff sense.
double hausdorff_to_interval(const std::vector<double>& points, double lower, double upper);

}  // namespace specdiff
