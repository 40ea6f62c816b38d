/*
 Copyright 2026 The pathreg Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pathreg/pendulum.hpp"
#include "pathreg/signal.hpp"

namespace pathreg::experiments {

enum class Domain { Control, Filter };

[[nodiscard]] std::string_view to_string(Domain d) noexcept;

struct ExperimentInfo {
    std::string name;
    Domain domain = Domain::Control;
    std::string description;
    /// w for control experiments, v for filter experiments.
    signal::DisturbanceSpec disturbance;
    long default_horizon = 100000;
    std::vector<std::string> algorithms;
};

[[nodiscard]] const std::vector<ExperimentInfo>& registry();
/// Throws Config for unknown names.
[[nodiscard]] const ExperimentInfo& find(std::string_view name);

/// Everything a run needs. Unset optionals fall back to the registry entry.
struct RunSettings {
    std::string experiment;
    std::optional<long> horizon;
    std::uint64_t seed = 0;
    std::optional<double> gamma;
    double gamma_margin = 1.05;
    long decimate = 100;
    std::optional<signal::DisturbanceSpec> disturbance;
    /// Filter experiments: driving noise, standard Gaussian by default.
    std::optional<signal::DisturbanceSpec> process;
    std::vector<std::string> algorithms;
    pendulum::PendulumParams pendulum;
    double quantization = 1e-3;
    bool linear_dynamics = false;
    std::optional<std::filesystem::path> output;
};

/// The disturbance actually used: registry entry, then overrides, then the seed.
[[nodiscard]] signal::DisturbanceSpec resolved_disturbance(const RunSettings& s);
[[nodiscard]] long resolved_horizon(const RunSettings& s);

struct AlgorithmSummary {
    std::string name;
    double total = 0.0;
    /// γ actually used (at the origin linearization for the pendulum).
    std::optional<double> gamma;
    std::optional<double> gamma_star;
    /// Riccati residual of the origin design (control only).
    std::optional<double> residual;
    std::optional<double> sigma_zpi;
};

struct RunResult {
    std::string experiment;
    Domain domain = Domain::Control;
    /// Sampled steps; every `decimate`-th step plus the last one.
    std::vector<long> steps;
    std::vector<std::string> columns;
    /// rows = steps, cols = columns (cumulative cost or error).
    Matrix values;
    std::vector<AlgorithmSummary> summaries;
    double disturbance_energy = 0.0;
    double disturbance_pathlength = 0.0;
};

[[nodiscard]] RunResult run(const RunSettings& settings);

void write_csv(const RunResult& result, std::ostream& os);
[[nodiscard]] std::string metadata_json(const RunResult& result, const RunSettings& settings);

/// Writes `path` and `path` with a .meta.json suffix.
void write_outputs(const RunResult& result, const RunSettings& settings,
                   const std::filesystem::path& path);

}  // namespace pathreg::experiments
