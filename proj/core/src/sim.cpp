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

#include "pathreg/sim.hpp"

namespace pathreg::sim {

Vector step_linear(const Matrix& A, const Matrix& B_u, const Matrix& B_w, const Vector& x,
                   const Vector& u, const Vector& w) {
    return A * x + B_u * u + B_w * w;
}

double stage_cost(const Matrix& Q, const Matrix& R, const Vector& u, const Vector& x_next) {
    return u.dot(R * u) + x_next.dot(Q * x_next);
}

ControlTrajectory simulate_control(const ControlPlant& plant, control::CausalPolicy& policy,
                                   const Signal& w) {
    detail::require_rows(w, plant.disturbances(), "w");
    const auto T = w.cols();
    ControlTrajectory tr;
    tr.states = Signal::Zero(plant.states(), T + 1);
    tr.controls = Signal::Zero(plant.controls(), T);
    tr.cumulative_cost = Vector::Zero(T);
    policy.reset();
    double total = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        const Vector x = tr.states.col(t);
        const Vector wt = w.col(t);
        const Vector u = policy.step(x, wt);
        const Vector next = step_linear(plant.A, plant.B_u, plant.B_w, x, u, wt);
        detail::require(next.allFinite(), ErrorKind::NumericalBlowup, "closed loop diverged");
        tr.controls.col(t) = u;
        tr.states.col(t + 1) = next;
        total += stage_cost(plant.Q, plant.R, u, next);
        tr.cumulative_cost(t) = total;
    }
    tr.cost = total;
    return tr;
}

ControlTrajectory simulate_offline(const ControlPlant& plant, const Signal& w) {
    detail::require_rows(w, plant.disturbances(), "w");
    const control::OfflinePlan plan(plant, w);
    const auto T = w.cols();
    ControlTrajectory tr;
    tr.states = Signal::Zero(plant.states(), T + 1);
    tr.controls = Signal::Zero(plant.controls(), T);
    tr.cumulative_cost = Vector::Zero(T);
    double total = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        const Vector x = tr.states.col(t);
        const Vector u = plan.control(t, x);
        const Vector next = step_linear(plant.A, plant.B_u, plant.B_w, x, u, w.col(t));
        tr.controls.col(t) = u;
        tr.states.col(t + 1) = next;
        total += stage_cost(plant.Q, plant.R, u, next);
        tr.cumulative_cost(t) = total;
    }
    tr.cost = total;
    return tr;
}

namespace {

FilterTrajectory accumulate(Signal estimates, Signal targets) {
    FilterTrajectory tr;
    const auto T = targets.cols();
    tr.cumulative_error = Vector::Zero(T);
    double total = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        total += (estimates.col(t) - targets.col(t)).squaredNorm();
        tr.cumulative_error(t) = total;
    }
    tr.error = total;
    tr.estimates = std::move(estimates);
    tr.targets = std::move(targets);
    return tr;
}

}  // namespace

FilterTrajectory simulate_filter(const FilterPlant& plant, filter::Estimator& estimator,
                                 const Signal& w, const Signal& v) {
    auto resp = filter::plant_response(plant, w, v);
    estimator.reset();
    Signal est = filter::run_estimator(estimator, resp.y);
    if (est.cols() == 0) {
        est = Signal::Zero(plant.targets(), 0);
    }
    return accumulate(std::move(est), std::move(resp.s));
}

FilterTrajectory simulate_smoother(const FilterPlant& plant, const Signal& w, const Signal& v) {
    auto resp = filter::plant_response(plant, w, v);
    return accumulate(filter::smoothed_oracle(plant, resp.y), std::move(resp.s));
}

}  // namespace pathreg::sim
