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

#include "pathreg/experiments.hpp"

#include <fstream>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "pathreg/filter.hpp"
#include "pathreg/sim.hpp"

namespace pathreg::experiments {

using detail::fail;
using detail::require;

namespace {

constexpr double kPi = std::numbers::pi;

signal::DisturbanceSpec sine(double period, double time_step) {
    signal::DisturbanceSpec s;
    s.kind = signal::Kind::Sinusoid;
    s.period = period;
    s.time_step = time_step;
    return s;
}

signal::DisturbanceSpec of_kind(signal::Kind k) {
    signal::DisturbanceSpec s;
    s.kind = k;
    return s;
}

std::vector<ExperimentInfo> build_registry() {
    const std::vector<std::string> ctl{"h2", "hinf", "pathlength", "offline"};
    const std::vector<std::string> est{"kalman", "pathlength", "smoother"};
    const double dt = pendulum::PendulumParams{}.dt;
    std::vector<ExperimentInfo> r;
    r.push_back({"pendulum-gaussian", Domain::Control,
                 "Inverted pendulum under MPC, i.i.d. standard Gaussian w",
                 of_kind(signal::Kind::Gaussian), 100000, ctl});
    auto step = of_kind(signal::Kind::Step);
    step.switch_times = {500};
    r.push_back({"pendulum-step", Domain::Control,
                 "Inverted pendulum under MPC, w = +1 for 500 steps then -1", step, 1000, ctl});
    r.push_back({"pendulum-constant", Domain::Control, "Inverted pendulum under MPC, w = 1",
                 of_kind(signal::Kind::Constant), 100000, ctl});
    r.push_back({"pendulum-sine", Domain::Control,
                 "Inverted pendulum under MPC, unit sinusoid w with period 20pi (time units)",
                 sine(20 * kPi, dt), 100000, ctl});
    r.push_back({"pendulum-sine-2000pi", Domain::Control,
                 "Inverted pendulum under MPC, unit sinusoid w with period 2000pi",
                 sine(2000 * kPi, dt), 100000, ctl});
    r.push_back({"pendulum-sine-200pi", Domain::Control,
                 "Inverted pendulum under MPC, unit sinusoid w with period 200pi",
                 sine(200 * kPi, dt), 100000, ctl});
    r.push_back({"pendulum-sine-2pi", Domain::Control,
                 "Inverted pendulum under MPC, unit sinusoid w with period 2pi",
                 sine(2 * kPi, dt), 100000, ctl});
    r.push_back({"tracking-constant-v", Domain::Filter,
                 "Position tracking, Gaussian acceleration, constant measurement noise v = 1",
                 of_kind(signal::Kind::Constant), 100000, est});
    r.push_back({"tracking-sine-200pi", Domain::Filter,
                 "Position tracking, sinusoidal v with period 200pi steps",
                 sine(200 * kPi, 1.0), 100000, est});
    r.push_back({"tracking-sine-20pi", Domain::Filter,
                 "Position tracking, sinusoidal v with period 20pi steps", sine(20 * kPi, 1.0),
                 100000, est});
    r.push_back({"tracking-sine-2pi", Domain::Filter,
                 "Position tracking, sinusoidal v with period 2pi steps", sine(2 * kPi, 1.0),
                 100000, est});
    return r;
}

std::string column_suffix(Domain d) { return d == Domain::Control ? "_cumcost" : "_cumerror"; }

std::vector<long> sample_steps(long T, long decimate) {
    require(decimate >= 1, ErrorKind::Config, "decimate must be at least 1");
    std::vector<long> out;
    for (long t = decimate - 1; t < T; t += decimate) {
        out.push_back(t);
    }
    if (T > 0 && (out.empty() || out.back() != T - 1)) {
        out.push_back(T - 1);
    }
    return out;
}

void check_algorithms(const std::vector<std::string>& algos, const ExperimentInfo& info) {
    require(!algos.empty(), ErrorKind::Config, "no algorithms selected");
    for (const auto& a : algos) {
        bool known = false;
        for (const auto& b : info.algorithms) {
            known = known || a == b;
        }
        require(known, ErrorKind::Config,
                fmt::format("algorithm '{}' is not available for {}", a, info.name));
    }
}

RunResult run_control(const RunSettings& s, const std::vector<std::string>& algos) {
    const long T = resolved_horizon(s);
    const Signal w = signal::generate(resolved_disturbance(s), T);
    RunResult out;
    out.disturbance_energy = signal::energy(w);
    out.disturbance_pathlength = signal::pathlength(w);
    const auto steps = sample_steps(T, s.decimate);
    out.values.resize(static_cast<Eigen::Index>(steps.size()),
                      static_cast<Eigen::Index>(algos.size()));
    pendulum::MpcOptions opt;
    opt.gamma_margin = s.gamma_margin;
    opt.gamma = s.gamma;
    opt.quantization = s.quantization;
    opt.linear_dynamics = s.linear_dynamics;
    for (std::size_t j = 0; j < algos.size(); ++j) {
        const auto family = pendulum::family_from_string(algos[j]);
        const auto res = pendulum::simulate_pendulum_mpc(s.pendulum, family, w, opt);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                res.cumulative_cost(steps[i]);
        }
        AlgorithmSummary sum{algos[j], res.cost, {}, {}, {}, {}};
        if (family == pendulum::ControllerFamily::Hinf ||
            family == pendulum::ControllerFamily::Pathlength) {
            const auto lin = pendulum::linearize(s.pendulum, 0.0);
            const bool hinf = family == pendulum::ControllerFamily::Hinf;
            const auto pred = hinf ? control::hinf_predicate(lin, opt.mode)
                                   : control::pathlength_predicate(lin, opt.mode);
            sum.gamma = res.gamma_at_origin;
            sum.gamma_star = control::bisect_gamma(pred).gamma_star;
            const auto syn = hinf ? control::hinf_synthesize(lin, res.gamma_at_origin, opt.mode)
                                  : control::pathlength_synthesize(lin, res.gamma_at_origin, opt.mode);
            sum.residual = syn.report.residual_norm;
        }
        out.summaries.push_back(sum);
    }
    out.steps = steps;
    return out;
}

RunResult run_filter(const RunSettings& s, const std::vector<std::string>& algos) {
    const long T = resolved_horizon(s);
    auto process = s.process.value_or(signal::DisturbanceSpec{});
    if (!s.process) {
        process.kind = signal::Kind::Gaussian;
    }
    process.seed = signal::derive_seed(s.seed, 0);
    const Signal w = signal::generate(process, T);
    const Signal v = signal::generate(resolved_disturbance(s), T);
    const auto plant = plants::tracking_filter();

    RunResult out;
    out.disturbance_energy = signal::energy(v);
    out.disturbance_pathlength = signal::pathlength(v);
    out.steps = sample_steps(T, s.decimate);
    out.values.resize(static_cast<Eigen::Index>(out.steps.size()),
                      static_cast<Eigen::Index>(algos.size()));
    for (std::size_t j = 0; j < algos.size(); ++j) {
        sim::FilterTrajectory traj;
        AlgorithmSummary sum{algos[j], 0.0, {}, {}, {}, {}};
        if (algos[j] == "kalman") {
            auto kf = filter::kalman_synthesize(plant);
            traj = sim::simulate_filter(plant, *kf, w, v);
        } else if (algos[j] == "smoother") {
            traj = sim::simulate_smoother(plant, w, v);
        } else {
            const double gamma_star =
                control::bisect_gamma(filter::pathlength_filter_predicate(plant)).gamma_star;
            const double gamma = s.gamma ? *s.gamma : s.gamma_margin * gamma_star;
            auto syn = filter::pathlength_filter_synthesize(plant, gamma);
            require(syn.feasible(), ErrorKind::Infeasible,
                    fmt::format("pathlength filter infeasible: {}", syn.report.diagnostics));
            traj = sim::simulate_filter(plant, *syn.filter, w, v);
            sum.gamma = gamma;
            sum.gamma_star = gamma_star;
            sum.sigma_zpi = syn.report.sigma_zpi;
        }
        for (std::size_t i = 0; i < out.steps.size(); ++i) {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                traj.cumulative_error(out.steps[i]);
        }
        sum.total = traj.error;
        out.summaries.push_back(sum);
    }
    return out;
}

}  // namespace

std::string_view to_string(Domain d) noexcept {
    return d == Domain::Control ? "control" : "filter";
}

const std::vector<ExperimentInfo>& registry() {
    static const std::vector<ExperimentInfo> r = build_registry();
    return r;
}

const ExperimentInfo& find(std::string_view name) {
    for (const auto& e : registry()) {
        if (e.name == name) {
            return e;
        }
    }
    fail(ErrorKind::Config, fmt::format("unknown experiment '{}'", name));
}

signal::DisturbanceSpec resolved_disturbance(const RunSettings& s) {
    const auto& info = find(s.experiment);
    auto spec = s.disturbance.value_or(info.disturbance);
    spec.seed = signal::derive_seed(s.seed, info.domain == Domain::Control ? 0 : 1);
    return spec;
}

long resolved_horizon(const RunSettings& s) {
    const long T = s.horizon.value_or(find(s.experiment).default_horizon);
    require(T > 0, ErrorKind::Config, "horizon must be positive");
    return T;
}

RunResult run(const RunSettings& settings) {
    const auto& info = find(settings.experiment);
    const auto algos = settings.algorithms.empty() ? info.algorithms : settings.algorithms;
    check_algorithms(algos, info);
    require(settings.gamma_margin > 1.0, ErrorKind::Config, "gamma margin must exceed 1");
    RunResult out = info.domain == Domain::Control ? run_control(settings, algos)
                                                   : run_filter(settings, algos);
    out.experiment = info.name;
    out.domain = info.domain;
    for (const auto& a : algos) {
        out.columns.push_back(a + column_suffix(info.domain));
    }
    return out;
}

void write_csv(const RunResult& result, std::ostream& os) {
    os << "t";
    for (const auto& c : result.columns) {
        os << ',' << c;
    }
    os << '\n';
    for (std::size_t i = 0; i < result.steps.size(); ++i) {
        os << result.steps[i];
        for (Eigen::Index j = 0; j < result.values.cols(); ++j) {
            os << fmt::format(",{:.12g}", result.values(static_cast<Eigen::Index>(i), j));
        }
        os << '\n';
    }
}

std::string metadata_json(const RunResult& result, const RunSettings& settings) {
    using nlohmann::json;
    const auto spec = resolved_disturbance(settings);
    json meta;
    meta["experiment"] = result.experiment;
    meta["domain"] = std::string(to_string(result.domain));
    meta["description"] = find(settings.experiment).description;
    meta["horizon"] = resolved_horizon(settings);
    meta["seed"] = settings.seed;
    meta["decimate"] = settings.decimate;
    meta["disturbance"] = {{"kind", std::string(signal::to_string(spec.kind))},
                           {"amplitude", spec.amplitude},
                           {"period", spec.period},
                           {"time_step", spec.time_step},
                           {"switch_times", spec.switch_times},
                           {"zero_tail", spec.zero_tail},
                           {"energy", result.disturbance_energy},
                           {"pathlength", result.disturbance_pathlength}};
    json algos = json::array();
    for (const auto& a : result.summaries) {
        json entry{{"name", a.name}, {"total", a.total}};
        const std::pair<const char*, const std::optional<double>*> extras[] = {
            {"gamma", &a.gamma},
            {"gamma_star", &a.gamma_star},
            {"riccati_residual", &a.residual},
            {"sigma_zpi", &a.sigma_zpi}};
        for (const auto& [key, value] : extras) {
            if (value->has_value()) {
                entry[key] = **value;
            }
        }
        algos.push_back(entry);
    }
    meta["algorithms"] = algos;
    meta["columns"] = result.columns;
    return meta.dump(2) + "\n";
}

void write_outputs(const RunResult& result, const RunSettings& settings,
                   const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream csv(path, std::ios::binary);
    require(static_cast<bool>(csv), ErrorKind::Config,
            fmt::format("cannot open '{}' for writing", path.string()));
    write_csv(result, csv);
    auto meta_path = path;
    meta_path += ".meta.json";
    std::ofstream meta(meta_path, std::ios::binary);
    require(static_cast<bool>(meta), ErrorKind::Config,
            fmt::format("cannot open '{}' for writing", meta_path.string()));
    meta << metadata_json(result, settings);
}

}  // namespace pathreg::experiments
