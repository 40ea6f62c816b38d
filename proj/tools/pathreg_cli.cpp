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

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pathreg/config.hpp"
#include "pathreg/control.hpp"
#include "pathreg/experiments.hpp"
#include "pathreg/factor.hpp"
#include "pathreg/filter.hpp"
#include "pathreg/pendulum.hpp"

namespace {

using namespace pathreg;

enum Exit : int { kOk = 0, kOther = 1, kConfig = 2, kInfeasible = 3, kNumerical = 4 };

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config:
        case ErrorKind::InvalidArgument:
        case ErrorKind::DimensionMismatch:
            return kConfig;
        case ErrorKind::Infeasible:
        case ErrorKind::NoFeasiblePoint:
        case ErrorKind::GammaTooSmall:
            return kInfeasible;
        default:
            return kNumerical;
    }
}

std::string show(const Matrix& m) {
    const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");
    std::ostringstream ss;
    ss << m.format(fmt);
    return ss.str();
}

struct RunArgs {
    std::string experiment;
    std::string config;
    std::optional<long> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma;
    std::optional<double> margin;
    std::optional<long> decimate;
    std::optional<double> period;
    std::vector<std::string> algorithms;
    std::string output;
};

int cmd_run(const RunArgs& a) {
    experiments::RunSettings s;
    if (!a.config.empty()) {
        s = config::load(a.config);
    }
    if (!a.experiment.empty()) {
        s.experiment = a.experiment;
    }
    detail::require(!s.experiment.empty(), ErrorKind::Config,
                    "no experiment given (use --experiment or a config file)");
    const auto& info = experiments::find(s.experiment);
    if (a.horizon) {
        s.horizon = *a.horizon;
    }
    if (a.seed) {
        s.seed = *a.seed;
    }
    if (a.gamma) {
        s.gamma = *a.gamma;
    }
    if (a.margin) {
        s.gamma_margin = *a.margin;
    }
    if (a.decimate) {
        s.decimate = *a.decimate;
    }
    if (a.period) {
        auto spec = s.disturbance.value_or(info.disturbance);
        detail::require(spec.kind == signal::Kind::Sinusoid, ErrorKind::Config,
                        "--period only applies to sinusoidal disturbances");
        spec.period = *a.period;
        s.disturbance = spec;
    }
    if (!a.algorithms.empty()) {
        s.algorithms = a.algorithms;
    }
    if (!a.output.empty()) {
        s.output = a.output;
    }

    const auto result = experiments::run(s);
    if (s.output) {
        experiments::write_outputs(result, s, *s.output);
        std::cout << fmt::format("wrote {} ({} rows)\n", s.output->string(), result.steps.size());
    } else {
        experiments::write_csv(result, std::cout);
    }
    auto& log = s.output ? std::cout : std::cerr;
    for (const auto& sum : result.summaries) {
        log << fmt::format("{:<12} total {:.6g}", sum.name, sum.total);
        if (sum.gamma) {
            log << fmt::format("  gamma {:.6g}", *sum.gamma);
        }
        if (sum.gamma_star) {
            log << fmt::format("  gamma* {:.6g}", *sum.gamma_star);
        }
        log << '\n';
    }
    return kOk;
}

int cmd_list() {
    for (const auto& e : experiments::registry()) {
        std::cout << fmt::format("{:<22} {:<8} T={:<7} {}\n", e.name, experiments::to_string(e.domain),
                                 e.default_horizon, e.description);
    }
    return kOk;
}

int cmd_validate(const std::string& path) {
    const auto s = config::load(path);
    if (!s.experiment.empty()) {
        (void)experiments::resolved_horizon(s);
    }
    std::cout << config::to_toml(s);
    return kOk;
}

struct SynthArgs {
    std::string plant = "tracking";
    std::string controller = "pathlength";
    std::string gamma = "auto";
    std::string mode = "causal";
    double margin = 1.0;
};

std::optional<double> parse_gamma(const std::string& g) {
    if (g == "auto") {
        return std::nullopt;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(g, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    detail::require(used == g.size() && v > 0.0, ErrorKind::Config,
                    fmt::format("--gamma expects 'auto' or a positive number, got '{}'", g));
    return v;
}

double pick_gamma(const std::optional<double>& fixed, const control::FeasibilityPredicate& pred,
                  double margin) {
    if (fixed) {
        return *fixed;
    }
    const auto b = control::bisect_gamma(pred);
    std::cout << fmt::format("gamma*      {:.6g}  (bracket [{:.6g}, {:.6g}], {} evaluations{})\n",
                             b.gamma_star, b.lo, b.hi, b.evaluations,
                             b.non_monotone_warning ? ", non-monotone warning" : "");
    return margin * b.gamma_star;
}

int synth_filter(const FilterPlant& plant, const SynthArgs& a, std::optional<double> fixed) {
    if (a.controller == "kalman") {
        const auto io = factor::factor_io(plant.A, plant.B, plant.C);
        std::cout << "kalman gain K2\n" << show(io.K2) << "\ninnovation Sigma2\n"
                  << show(io.Sigma2) << '\n';
        return kOk;
    }
    detail::require(a.controller == "pathlength", ErrorKind::Config,
                    fmt::format("filter plants accept 'pathlength' or 'kalman', not '{}'",
                                a.controller));
    const double gamma = pick_gamma(fixed, filter::pathlength_filter_predicate(plant), a.margin);
    const auto syn = filter::pathlength_filter_synthesize(plant, gamma);
    std::cout << fmt::format("gamma       {:.6g}\nsigma(ZPi)  {:.6g}\nfeasible    {}\n", gamma,
                             syn.report.sigma_zpi, syn.feasible());
    std::cout << "diagnostics " << syn.report.diagnostics << '\n';
    if (!syn.feasible()) {
        return kInfeasible;
    }
    const auto& d = syn.filter->data();
    std::cout << "F_gamma\n" << show(d.nehari.F_gamma) << "\nK_gamma\n" << show(d.nehari.K_gamma)
              << "\nK3\n" << show(d.center.K3) << '\n';
    return kOk;
}

int synth_control(const ControlPlant& plant, const SynthArgs& a, std::optional<double> fixed) {
    detail::require(a.mode == "causal" || a.mode == "strict", ErrorKind::Config,
                    "--mode expects 'causal' or 'strict'");
    const auto mode = a.mode == "causal" ? control::Mode::Causal : control::Mode::StrictlyCausal;
    std::optional<control::Synthesis<control::CausalPolicy>> syn;
    if (a.controller == "h2") {
        const auto pol = control::h2_synthesize(plant, mode);
        std::cout << "Kx\n" << show(pol.gains().Kx) << "\nKw\n" << show(pol.gains().Kw) << '\n';
        return kOk;
    }
    if (a.controller == "hinf") {
        const double g = pick_gamma(fixed, control::hinf_predicate(plant, mode), a.margin);
        syn = control::hinf_synthesize(plant, g, mode);
    } else {
        detail::require(a.controller == "pathlength", ErrorKind::Config,
                        fmt::format("control plants accept pathlength, hinf or h2, not '{}'",
                                    a.controller));
        const double g = pick_gamma(fixed, control::pathlength_predicate(plant, mode), a.margin);
        syn = control::pathlength_synthesize(plant, g, mode);
    }
    std::cout << fmt::format("gamma       {:.6g}\nfeasible    {}\nfailed      {}\n",
                             syn->report.gamma, syn->feasible(),
                             control::to_string(syn->report.failed));
    std::cout << "diagnostics " << syn->report.diagnostics << '\n';
    if (!syn->feasible()) {
        return kInfeasible;
    }
    const auto& g = syn->value->gains();
    std::cout << "Kx\n" << show(g.Kx) << "\nKw\n" << show(g.Kw) << '\n';
    if (g.Keta.size() > 0) {
        std::cout << "Keta\n" << show(g.Keta) << "\nAeta\n" << show(g.Aeta) << "\nBeta\n"
                  << show(g.Beta) << '\n';
    }
    return kOk;
}

int cmd_synth(const SynthArgs& a) {
    const auto fixed = parse_gamma(a.gamma);
    detail::require(a.margin >= 1.0, ErrorKind::Config, "--margin must be at least 1");
    std::cout << fmt::format("plant       {}\ncontroller  {}\n", a.plant, a.controller);
    if (a.plant == "tracking" || a.plant == "tracking-filter") {
        return synth_filter(plants::tracking_filter(), a, fixed);
    }
    if (a.plant == "scalar-filter") {
        return synth_filter(plants::scalar_filter(), a, fixed);
    }
    if (a.plant == "scalar-control") {
        return synth_control(plants::scalar_control(), a, fixed);
    }
    if (a.plant == "tracking-control") {
        return synth_control(plants::tracking_control(), a, fixed);
    }
    if (a.plant == "pendulum") {
        return synth_control(pendulum::linearize({}, 0.0), a, fixed);
    }
    detail::fail(ErrorKind::Config, fmt::format("unknown plant '{}'", a.plant));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pathlength-regret control and filtering experiments"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a registered experiment and write a CSV");
    run_cmd->add_option("-e,--experiment", run.experiment, "Experiment name (see `list`)");
    run_cmd->add_option("-c,--config", run.config, "TOML run description")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--horizon", run.horizon, "Number of steps")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--gamma", run.gamma, "Fixed gamma instead of margin * gamma*")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--margin", run.margin, "gamma = margin * gamma* when --gamma is unset");
    run_cmd->add_option("--decimate", run.decimate, "Keep every n-th step in the CSV")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--period", run.period, "Override the sinusoid period")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--algorithms", run.algorithms, "Subset of algorithms to run");
    run_cmd->add_option("-o,--output", run.output, "CSV path; a .meta.json sidecar is written too");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize one design and print it");
    synth_cmd
        ->add_option("--plant", synth.plant,
                     "tracking | scalar-filter | scalar-control | tracking-control | pendulum")
        ->capture_default_str();
    synth_cmd->add_option("--controller", synth.controller, "pathlength | hinf | h2 | kalman")
        ->capture_default_str();
    synth_cmd->add_option("--gamma", synth.gamma, "'auto' bisects for gamma*")
        ->capture_default_str();
    synth_cmd->add_option("--mode", synth.mode, "causal | strict")->capture_default_str();
    synth_cmd->add_option("--margin", synth.margin, "Multiplier on gamma* with --gamma auto")
        ->capture_default_str();

    app.add_subcommand("list", "List registered experiments");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Parse a config and print it resolved");
    validate_cmd->add_option("config", validate_path, "TOML file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run);
        }
        if (synth_cmd->parsed()) {
            return cmd_synth(synth);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(validate_path);
        }
        return cmd_list();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
}
