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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "pathreg/config.hpp"
#include "pathreg/experiments.hpp"
#include "pathreg/pendulum.hpp"
#include "pathreg/signal.hpp"
#include "pathreg/sim.hpp"

using namespace pathreg;
using control::Mode;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no exception");
    return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

struct Captured {
    int status = -1;
    std::string out;
};

Captured shell(const std::string& args) {
    const std::string cmd = std::string("\"") + PATHREG_CLI_PATH + "\" " + args + " 2>&1";
    Captured c;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        c.out.append(buf, n);
    }
    const int raw = pclose(pipe);
    c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return c;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pathreg-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

control::CausalPolicy zero_policy(const ControlPlant& p) {
    control::AffineGains g;
    g.Kx = Matrix::Zero(p.controls(), p.states());
    g.Keta = Matrix::Zero(p.controls(), 0);
    g.Kw = Matrix::Zero(p.controls(), p.disturbances());
    g.Aeta = Matrix::Zero(0, 0);
    g.Beta = Matrix::Zero(0, p.disturbances());
    return {"zero", Mode::Causal, std::move(g)};
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("energy and pathlength") {
    Signal w(2, 1);
    w << 3, 4;
    CHECK(signal::energy(w) == 25.0);
    CHECK(signal::pathlength(w) == 25.0);
    CHECK(signal::pathlength(Signal::Constant(1, 50, 2.0), signal::PathlengthMode::InteriorOnly) ==
          0.0);
    CHECK(signal::pathlength(Signal::Constant(1, 50, 2.0)) == 4.0);

    signal::DisturbanceSpec s;
    s.kind = signal::Kind::Step;
    const Signal step = signal::generate(s, 1000);
    CHECK(signal::pathlength(step, signal::PathlengthMode::InteriorOnly) == 4.0);
    CHECK(step(0, 499) == 1.0);
    CHECK(step(0, 500) == -1.0);
}

TEST_CASE("generation is deterministic in the seed") {
    signal::DisturbanceSpec s;
    s.kind = signal::Kind::Gaussian;
    s.seed = 42;
    s.dimension = 3;
    const Signal a = signal::generate(s, 400), b = signal::generate(s, 400);
    CHECK(a == b);
    s.seed = 43;
    CHECK((signal::generate(s, 400) - a).norm() > 1.0);
    // channels come from separate streams
    CHECK((a.row(0) - a.row(1)).norm() > 1.0);
}

TEST_CASE("zero tail") {
    signal::DisturbanceSpec s;
    s.kind = signal::Kind::Constant;
    s.zero_tail = 0.1;
    const Signal w = signal::generate(s, 95);
    CHECK(w.rightCols(10).norm() == 0.0);
    CHECK(w(0, 84) == 1.0);
}

TEST_CASE("pathlength is at most four times the energy") {
    testing::Rng rng(5);
    for (int k = 0; k < 1000; ++k) {
        const auto rows = rng.integer(1, 3);
        const auto cols = rng.integer(1, 30);
        const Signal w = rng.matrix(rows, cols);
        CHECK(signal::pathlength(w) <= 4.0 * signal::energy(w) * (1 + 1e-12));
    }
}

TEST_CASE("unknown kind") {
    CHECK(kind_of([] { (void)signal::kind_from_string("sawtooth"); }) == ErrorKind::Config);
}

}  // TEST_SUITE

TEST_SUITE("sim") {

TEST_CASE("zero disturbance costs nothing") {
    const auto p = plants::tracking_control();
    auto h2 = control::h2_synthesize(p, Mode::Causal);
    CHECK(sim::simulate_control(p, h2, Signal::Zero(p.disturbances(), 300)).cost == 0.0);
    CHECK(sim::simulate_offline(p, Signal::Zero(p.disturbances(), 300)).cost == 0.0);
    const auto fp = plants::scalar_filter();
    auto kf = filter::kalman_synthesize(fp);
    CHECK(sim::simulate_filter(fp, *kf, Signal::Zero(1, 200), Signal::Zero(1, 200)).error == 0.0);
}

TEST_CASE("lqr beats doing nothing on a step") {
    const auto p = plants::scalar_control();
    signal::DisturbanceSpec s;
    s.kind = signal::Kind::Step;
    const Signal w = signal::generate(s, 1000);
    auto idle = zero_policy(p);
    auto h2 = control::h2_synthesize(p, Mode::Causal);
    const double c_idle = sim::simulate_control(p, idle, w).cost;
    const double c_h2 = sim::simulate_control(p, h2, w).cost;
    const double c_off = sim::simulate_offline(p, w).cost;
    CHECK(c_h2 < c_idle);
    CHECK(c_off <= c_h2);
}

TEST_CASE("cost accounting matches the quadratic form") {
    const auto p = plants::tracking_control();
    auto h2 = control::h2_synthesize(p, Mode::Causal);
    signal::DisturbanceSpec s;
    s.kind = signal::Kind::RandomWalk;
    s.seed = 9;
    s.dimension = static_cast<int>(p.disturbances());
    const Signal w = signal::generate(s, 700);
    const auto tr = sim::simulate_control(p, h2, w);
    const double direct = control::quadratic_cost(p, tr.states, tr.controls);
    CHECK(tr.cost == doctest::Approx(direct).epsilon(1e-12));
    CHECK(tr.cumulative_cost(699) == tr.cost);
    for (Eigen::Index t = 1; t < 700; ++t) {
        CHECK(tr.cumulative_cost(t) >= tr.cumulative_cost(t - 1));
    }
    const auto off = sim::simulate_offline(p, w);
    CHECK(off.cost == doctest::Approx(control::offline_optimal(p, w).cost).epsilon(1e-9));
}

}  // TEST_SUITE

TEST_SUITE("pendulum") {

TEST_CASE("upright with no disturbance") {
    const pendulum::PendulumParams params;
    for (const auto f : {pendulum::ControllerFamily::H2, pendulum::ControllerFamily::Hinf,
                         pendulum::ControllerFamily::Pathlength,
                         pendulum::ControllerFamily::Offline}) {
        const auto r = pendulum::simulate_pendulum_mpc(params, f, Signal::Zero(1, 300));
        CHECK(r.cost == 0.0);
    }
}

TEST_CASE("linearization") {
    const pendulum::PendulumParams params;
    const auto lin = pendulum::linearize(params, 0.0);
    Matrix A(2, 2);
    A << 1, 0.001, 0.001, 1;
    CHECK((lin.A - A).norm() < 1e-15);
    CHECK(lin.B_u(1, 0) == doctest::Approx(0.001));
    CHECK(lin.B_w(1, 0) == doctest::Approx(0.001));
    // cos θ scales the input channel
    CHECK(pendulum::linearize(params, 0.5).B_u(1, 0) == doctest::Approx(0.001 * std::cos(0.5)));
}

TEST_CASE("linear dynamics reproduce the LTI simulator") {
    const pendulum::PendulumParams params;
    signal::DisturbanceSpec s;
    s.kind = signal::Kind::Sinusoid;
    s.period = 20 * std::numbers::pi;
    s.time_step = params.dt;
    const Signal w = signal::generate(s, 2000);
    pendulum::MpcOptions opt;
    opt.linear_dynamics = true;
    const auto mpc = pendulum::simulate_pendulum_mpc(params, pendulum::ControllerFamily::Pathlength,
                                                     w, opt);
    const auto lin = pendulum::linearize(params, 0.0);
    auto syn = control::pathlength_synthesize(lin, mpc.gamma_at_origin);
    REQUIRE(syn.feasible());
    const auto tr = sim::simulate_control(lin, *syn.value, w);
    CHECK(mpc.cost == doctest::Approx(tr.cost).epsilon(1e-12));
    CHECK(mpc.syntheses == 1);
}

TEST_CASE("constant push") {
    const pendulum::PendulumParams params;
    const Signal w = Signal::Ones(1, 20000);
    const double path = pendulum::simulate_pendulum_mpc(
                            params, pendulum::ControllerFamily::Pathlength, w).cost;
    const double h2 = pendulum::simulate_pendulum_mpc(params, pendulum::ControllerFamily::H2, w).cost;
    const double hinf =
        pendulum::simulate_pendulum_mpc(params, pendulum::ControllerFamily::Hinf, w).cost;
    const double off =
        pendulum::simulate_pendulum_mpc(params, pendulum::ControllerFamily::Offline, w).cost;
    CHECK(path < h2);
    CHECK(path < hinf);
    CHECK(off <= path);
}

}  // TEST_SUITE

TEST_SUITE("config") {

TEST_CASE("parse") {
    const auto s = config::parse(R"(experiment = "pendulum-step"
horizon = 1200
seed = 4
algorithms = ["h2", "offline"]
[gamma]
margin = 1.2
[disturbance]
kind = "step"
switch_times = [100, 600]
[pendulum]
dt = 0.002
linear = true
)");
    CHECK(s.experiment == "pendulum-step");
    CHECK(s.horizon == 1200);
    CHECK(s.seed == 4);
    CHECK(s.gamma_margin == 1.2);
    CHECK(s.algorithms == std::vector<std::string>{"h2", "offline"});
    REQUIRE(s.disturbance);
    CHECK(s.disturbance->switch_times == std::vector<long>{100, 600});
    CHECK(s.pendulum.dt == 0.002);
    CHECK(s.linear_dynamics);
    CHECK(experiments::resolved_disturbance(s).seed != 0);
}

TEST_CASE("errors name the key and line") {
    const auto bad_type = message_of([] {
        (void)config::parse("experiment = \"pendulum-sine\"\n[disturbance]\nperiod = \"x\"\n",
                            "run.toml");
    });
    CHECK(bad_type.find("disturbance.period") != std::string::npos);
    CHECK(bad_type.find("run.toml:3") != std::string::npos);

    const auto unknown = message_of([] {
        (void)config::parse("experiment = \"pendulum-sine\"\nhorizn = 5\n", "run.toml");
    });
    CHECK(unknown.find("horizn") != std::string::npos);
    CHECK(unknown.find(":2") != std::string::npos);

    CHECK(kind_of([] { (void)config::parse("horizon = [1, 2\n"); }) == ErrorKind::Config);
    CHECK(kind_of([] { (void)config::parse("[disturbance]\nkind = \"sawtooth\"\n"); }) ==
          ErrorKind::Config);
}

TEST_CASE("shipped configs") {
    const std::filesystem::path dir = std::filesystem::path(PATHREG_SOURCE_DIR) / "configs";
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".toml") {
            continue;
        }
        CAPTURE(entry.path().string());
        const auto s = config::load(entry.path());
        CHECK(experiments::resolved_horizon(s) > 0);
        const auto again = config::parse(config::to_toml(s));
        CHECK(config::to_toml(again) == config::to_toml(s));
        ++seen;
    }
    CHECK(seen >= 3);
}

}  // TEST_SUITE

TEST_SUITE("experiments") {

TEST_CASE("registry") {
    const auto& r = experiments::registry();
    CHECK(r.size() >= 10);
    for (const auto& e : r) {
        CHECK(&experiments::find(e.name) == &e);
        CHECK_FALSE(e.algorithms.empty());
    }
    CHECK(kind_of([] { (void)experiments::find("no-such-experiment"); }) == ErrorKind::Config);
}

TEST_CASE("run outputs") {
    experiments::RunSettings s;
    s.experiment = "tracking-constant-v";
    s.horizon = 450;
    s.seed = 12;
    s.decimate = 100;
    const auto a = experiments::run(s);
    const auto b = experiments::run(s);
    CHECK(a.values == b.values);
    CHECK(a.steps == std::vector<long>{99, 199, 299, 399, 449});

    std::ostringstream csv;
    experiments::write_csv(a, csv);
    CHECK(csv.str().rfind("t,kalman_cumerror,pathlength_cumerror,smoother_cumerror\n", 0) == 0);

    const auto meta = nlohmann::json::parse(experiments::metadata_json(a, s));
    CHECK(meta["seed"] == 12);
    CHECK(meta["horizon"] == 450);
    bool has_star = false;
    for (const auto& alg : meta["algorithms"]) {
        if (alg["name"] == "pathlength") {
            has_star = alg.contains("gamma_star") && alg["gamma_star"].get<double>() > 35.0;
        }
    }
    CHECK(has_star);

    const auto path = scratch("run.csv");
    experiments::write_outputs(a, s, path);
    CHECK(std::filesystem::exists(path));
    CHECK(std::filesystem::exists(path.string() + ".meta.json"));
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
    const auto bad = scratch("bad.toml");
    std::ofstream(bad) << "experiment = \"pendulum-sine\"\n[disturbance]\nperiod = \"x\"\n";
    const auto v = shell("validate \"" + bad.string() + "\"");
    CHECK(v.status == 2);
    CHECK(v.out.find("disturbance.period") != std::string::npos);

    CHECK(shell("synth --plant tracking --gamma 1").status == 3);
    CHECK(shell("run --experiment nope").status == 2);
    CHECK(shell("list").status == 0);
}

TEST_CASE("synth finds gamma star") {
    const auto r = shell("synth --plant tracking --gamma auto");
    CHECK(r.status == 0);
    CHECK(r.out.find("gamma*      35.6") != std::string::npos);
}

TEST_CASE("run writes csv and metadata") {
    const auto out = scratch("cli-run.csv");
    const auto r = shell("run --experiment tracking-constant-v --horizon 300 --seed 2 -o \"" +
                         out.string() + "\"");
    CHECK(r.status == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,kalman_cumerror,pathlength_cumerror,smoother_cumerror");
    CHECK(std::filesystem::exists(out.string() + ".meta.json"));
}

}  // TEST_SUITE
