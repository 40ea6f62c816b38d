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

#include <optional>
#include <string_view>

#include "pathreg/control.hpp"
#include "pathreg/plant.hpp"

namespace pathreg::pendulum {

/// J θ̈ = m g ℓ sin θ + ℓ cos θ (u + w), sampled with forward Euler at dt.
struct PendulumParams {
    double m = 1.0;
    double l = 1.0;
    double g = 1.0;
    double J = 1.0;
    double dt = 0.001;
};

enum class ControllerFamily { H2, Hinf, Pathlength, Offline };

[[nodiscard]] std::string_view to_string(ControllerFamily f) noexcept;
[[nodiscard]] ControllerFamily family_from_string(std::string_view name);

struct MpcOptions {
    /// γ = margin·γ* per linearization when `gamma` is unset.
    double gamma_margin = 1.05;
    std::optional<double> gamma;
    /// Linearization cache grid in radians.
    double quantization = 1e-3;
    control::Mode mode = control::Mode::Causal;
    /// Use the origin linearization as the true dynamics.
    bool linear_dynamics = false;
    double blowup_threshold = 1e6;
};

struct MpcResult {
    Signal states;    // 2 × (T+1): θ, θ̇
    Signal controls;  // 1 × T
    Vector cumulative_cost;
    double cost = 0.0;
    int syntheses = 0;
    int synthesis_failures = 0;
    /// γ used at the origin linearization (0 for H2 and offline).
    double gamma_at_origin = 0.0;
};

/// Discrete linearization at angle θ with Q = R = I.
[[nodiscard]] ControlPlant linearize(const PendulumParams& params, double theta);

/// Throws NumericalBlowup when |θ̇| exceeds the threshold.
[[nodiscard]] MpcResult simulate_pendulum_mpc(const PendulumParams& params,
                                              ControllerFamily family, const Signal& w,
                                              const MpcOptions& options = {});

}  // namespace pathreg::pendulum
