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

#include "pathreg/pendulum.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "pathreg/sim.hpp"

namespace pathreg::pendulum {

using control::AffineGains;
using control::CausalPolicy;

std::string_view to_string(ControllerFamily f) noexcept {
    switch (f) {
        case ControllerFamily::H2: return "h2";
        case ControllerFamily::Hinf: return "hinf";
        case ControllerFamily::Pathlength: return "pathlength";
        case ControllerFamily::Offline: return "offline";
    }
    return "unknown";
}

ControllerFamily family_from_string(std::string_view name) {
    for (const auto f : {ControllerFamily::H2, ControllerFamily::Hinf,
                         ControllerFamily::Pathlength, ControllerFamily::Offline}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    detail::fail(ErrorKind::Config, fmt::format("unknown controller '{}'", name));
}

ControlPlant linearize(const PendulumParams& p, double theta) {
    Matrix A(2, 2);
    A << 1.0, p.dt, p.dt * p.m * p.g * p.l * std::cos(theta) / p.J, 1.0;
    Matrix B(2, 1);
    B << 0.0, p.dt * p.l * std::cos(theta) / p.J;
    return {A, B, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1), false};
}

namespace {

struct Synthesized {
    AffineGains gains;
    double gamma = 0.0;
};

Synthesized synthesize(const ControlPlant& plant, ControllerFamily family,
                       const MpcOptions& opt) {
    switch (family) {
        case ControllerFamily::H2:
            return {control::h2_synthesize(plant, opt.mode).gains(), 0.0};
        case ControllerFamily::Hinf: {
            const double g = opt.gamma ? *opt.gamma
                                       : opt.gamma_margin *
                                             control::bisect_gamma(
                                                 control::hinf_predicate(plant, opt.mode))
                                                 .gamma_star;
            auto s = control::hinf_synthesize(plant, g, opt.mode);
            detail::require(s.feasible(), ErrorKind::Infeasible, s.report.diagnostics);
            return {s.value->gains(), g};
        }
        case ControllerFamily::Pathlength: {
            const double g = opt.gamma ? *opt.gamma
                                       : opt.gamma_margin *
                                             control::bisect_gamma(
                                                 control::pathlength_predicate(plant, opt.mode))
                                                 .gamma_star;
            auto s = control::pathlength_synthesize(plant, g, opt.mode);
            detail::require(s.feasible(), ErrorKind::Infeasible, s.report.diagnostics);
            return {s.value->gains(), g};
        }
        case ControllerFamily::Offline:
            break;
    }
    detail::fail(ErrorKind::InvalidArgument, "offline controller has no causal gains");
}

}  // namespace

MpcResult simulate_pendulum_mpc(const PendulumParams& params, ControllerFamily family,
                                const Signal& w, const MpcOptions& opt) {
    detail::require(params.dt > 0.0, ErrorKind::InvalidArgument, "dt must be positive");
    detail::require_rows(w, 1, "w");
    const auto T = w.cols();
    const ControlPlant origin = linearize(params, 0.0);
    const Matrix I2 = Matrix::Identity(2, 2);
    const Matrix I1 = Matrix::Identity(1, 1);

    MpcResult res;
    res.states = Signal::Zero(2, T + 1);
    res.controls = Signal::Zero(1, T);
    res.cumulative_cost = Vector::Zero(T);

    std::optional<control::OfflinePlan> plan;
    std::optional<CausalPolicy> policy;
    std::map<long, AffineGains> cache;
    long active_key = 0;

    auto gains_for = [&](long key) -> const AffineGains* {
        if (auto it = cache.find(key); it != cache.end()) {
            return &it->second;
        }
        const double theta = static_cast<double>(key) * opt.quantization;
        try {
            auto s = synthesize(opt.linear_dynamics ? origin : linearize(params, theta), family,
                                opt);
            ++res.syntheses;
            if (key == 0) {
                res.gamma_at_origin = s.gamma;
            }
            return &cache.emplace(key, std::move(s.gains)).first->second;
        } catch (const Error&) {
            ++res.synthesis_failures;
            if (cache.empty()) {
                throw;
            }
            return nullptr;
        }
    };

    if (family == ControllerFamily::Offline) {
        plan.emplace(origin, w);
    } else {
        policy.emplace(std::string(to_string(family)), opt.mode, *gains_for(0));
    }

    double total = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        const Vector x = res.states.col(t);
        const Vector wt = w.col(t);
        Vector u;
        if (plan) {
            u = plan->control(t, x);
        } else {
            const long key = opt.linear_dynamics ? 0 : std::lround(x(0) / opt.quantization);
            if (key != active_key) {
                if (const auto* g = gains_for(key)) {
                    policy->set_gains(*g);
                    active_key = key;
                }
            }
            u = policy->step(x, wt);
        }

        Vector next;
        if (opt.linear_dynamics) {
            next = sim::step_linear(origin.A, origin.B_u, origin.B_w, x, u, wt);
        } else {
            const double theta = x(0);
            const double omega = x(1);
            const double accel = (params.m * params.g * params.l * std::sin(theta) +
                                  params.l * std::cos(theta) * (u(0) + wt(0))) /
                                 params.J;
            next.resize(2);
            next << theta + params.dt * omega, omega + params.dt * accel;
        }
        if (!next.allFinite() || std::abs(next(1)) > opt.blowup_threshold) {
            detail::fail(ErrorKind::NumericalBlowup,
                         fmt::format("{} controller diverged at step {}", to_string(family), t));
        }
        res.controls.col(t) = u;
        res.states.col(t + 1) = next;
        total += sim::stage_cost(I2, I1, u, next);
        res.cumulative_cost(t) = total;
    }
    res.cost = total;
    return res;
}

}  // namespace pathreg::pendulum
