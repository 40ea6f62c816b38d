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

#include "pathreg/control.hpp"
#include "pathreg/filter.hpp"
#include "pathreg/plant.hpp"

namespace pathreg::sim {

struct ControlTrajectory {
    Signal states;    // n × (T+1), x_0 = 0
    Signal controls;  // m × T
    /// cumulative_cost(t) = Σ_{k<=t} u_k*Ru_k + x_{k+1}*Qx_{k+1}
    Vector cumulative_cost;
    double cost = 0.0;
};

/// One LTI step; shared by every simulator so linear runs agree bit for bit.
[[nodiscard]] Vector step_linear(const Matrix& A, const Matrix& B_u, const Matrix& B_w,
                                 const Vector& x, const Vector& u, const Vector& w);

/// Stage cost u*Ru + x'*Qx' for the transition ending in x'.
[[nodiscard]] double stage_cost(const Matrix& Q, const Matrix& R, const Vector& u,
                                const Vector& x_next);

/// Closed loop from x_0 = 0; the policy is reset first.
[[nodiscard]] ControlTrajectory simulate_control(const ControlPlant& plant,
                                                 control::CausalPolicy& policy, const Signal& w);

/// Clairvoyant run under the same cost accounting.
[[nodiscard]] ControlTrajectory simulate_offline(const ControlPlant& plant, const Signal& w);

struct FilterTrajectory {
    Signal estimates;
    Signal targets;
    Vector cumulative_error;
    double error = 0.0;
};

[[nodiscard]] FilterTrajectory simulate_filter(const FilterPlant& plant,
                                               filter::Estimator& estimator, const Signal& w,
                                               const Signal& v);

/// Cumulative squared error of the smoothed oracle on the same data.
[[nodiscard]] FilterTrajectory simulate_smoother(const FilterPlant& plant, const Signal& w,
                                                 const Signal& v);

}  // namespace pathreg::sim
