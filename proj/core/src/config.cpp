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

#include "pathreg/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <toml.hpp>

namespace pathreg::config {

using detail::fail;
using detail::require;

namespace {

class Reader {
public:
    Reader(std::string_view source, const toml::table& table, std::string prefix)
        : source_(source), table_(table), prefix_(std::move(prefix)) {}

    [[noreturn]] void error(const toml::node& node, std::string_view key,
                            std::string_view message) const {
        fail(ErrorKind::Config, fmt::format("{}:{}: key '{}{}': {}", source_,
                                            node.source().begin.line, prefix_, key, message));
    }

    void only(std::initializer_list<std::string_view> allowed) const {
        for (auto&& [k, v] : table_) {
            bool ok = false;
            for (auto a : allowed) {
                ok = ok || k.str() == a;
            }
            if (!ok) {
                error(v, k.str(), "unknown key");
            }
        }
    }

    [[nodiscard]] std::optional<double> number(std::string_view key) const {
        const auto* n = table_.get(key);
        if (n == nullptr) {
            return std::nullopt;
        }
        if (const auto* i = n->as_integer()) {
            return static_cast<double>(i->get());
        }
        if (const auto* f = n->as_floating_point()) {
            return f->get();
        }
        error(*n, key, "expected a number");
    }

    [[nodiscard]] std::optional<std::int64_t> integer(std::string_view key) const {
        const auto* n = table_.get(key);
        if (n == nullptr) {
            return std::nullopt;
        }
        if (const auto* i = n->as_integer()) {
            return i->get();
        }
        error(*n, key, "expected an integer");
    }

    [[nodiscard]] std::optional<bool> boolean(std::string_view key) const {
        const auto* n = table_.get(key);
        if (n == nullptr) {
            return std::nullopt;
        }
        if (const auto* b = n->as_boolean()) {
            return b->get();
        }
        error(*n, key, "expected true or false");
    }

    [[nodiscard]] std::optional<std::string> string(std::string_view key) const {
        const auto* n = table_.get(key);
        if (n == nullptr) {
            return std::nullopt;
        }
        if (const auto* s = n->as_string()) {
            return s->get();
        }
        error(*n, key, "expected a string");
    }

    [[nodiscard]] std::optional<std::vector<long>> integers(std::string_view key) const {
        const auto* n = table_.get(key);
        if (n == nullptr) {
            return std::nullopt;
        }
        const auto* arr = n->as_array();
        if (arr == nullptr) {
            error(*n, key, "expected an array of integers");
        }
        std::vector<long> out;
        for (const auto& e : *arr) {
            const auto* i = e.as_integer();
            if (i == nullptr) {
                error(e, key, "expected an array of integers");
            }
            out.push_back(static_cast<long>(i->get()));
        }
        return out;
    }

    [[nodiscard]] std::optional<std::vector<std::string>> strings(std::string_view key) const {
        const auto* n = table_.get(key);
        if (n == nullptr) {
            return std::nullopt;
        }
        const auto* arr = n->as_array();
        if (arr == nullptr) {
            error(*n, key, "expected an array of strings");
        }
        std::vector<std::string> out;
        for (const auto& e : *arr) {
            const auto* s = e.as_string();
            if (s == nullptr) {
                error(e, key, "expected an array of strings");
            }
            out.push_back(s->get());
        }
        return out;
    }

    [[nodiscard]] const toml::table* table(std::string_view key) const {
        const auto* n = table_.get(key);
        if (n == nullptr) {
            return nullptr;
        }
        const auto* t = n->as_table();
        if (t == nullptr) {
            error(*n, key, "expected a table");
        }
        return t;
    }

    [[nodiscard]] const toml::node& node(std::string_view key) const { return *table_.get(key); }

private:
    std::string_view source_;
    const toml::table& table_;
    std::string prefix_;
};

void positive(const Reader& r, std::string_view key, double value) {
    if (!(value > 0.0)) {
        r.error(r.node(key), key, "must be positive");
    }
}

signal::DisturbanceSpec read_disturbance(const Reader& r, signal::DisturbanceSpec spec) {
    r.only({"kind", "amplitude", "period", "time_step", "switch_times", "scale", "segments",
            "zero_tail"});
    if (auto k = r.string("kind")) {
        try {
            spec.kind = signal::kind_from_string(*k);
        } catch (const Error& e) {
            r.error(r.node("kind"), "kind", fmt::format("unknown kind '{}'", *k));
        }
    }
    if (auto a = r.number("amplitude")) {
        spec.amplitude = *a;
    }
    if (auto p = r.number("period")) {
        positive(r, "period", *p);
        spec.period = *p;
    }
    if (auto d = r.number("time_step")) {
        positive(r, "time_step", *d);
        spec.time_step = *d;
    }
    if (auto s = r.integers("switch_times")) {
        spec.switch_times = *s;
    }
    if (auto s = r.number("scale")) {
        positive(r, "scale", *s);
        spec.scale = *s;
    }
    if (auto n = r.integer("segments")) {
        if (*n < 1) {
            r.error(r.node("segments"), "segments", "must be at least 1");
        }
        spec.segments = static_cast<int>(*n);
    }
    if (auto z = r.number("zero_tail")) {
        if (*z < 0.0 || *z > 1.0) {
            r.error(r.node("zero_tail"), "zero_tail", "must lie in [0, 1]");
        }
        spec.zero_tail = *z;
    }
    return spec;
}

}  // namespace

experiments::RunSettings parse(std::string_view text, std::string_view source) {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        fail(ErrorKind::Config, fmt::format("{}:{}:{}: {}", source, e.source().begin.line,
                                            e.source().begin.column, e.description()));
    }
    const Reader top(source, root, "");
    top.only({"experiment", "horizon", "seed", "decimate", "output", "algorithms", "gamma",
              "disturbance", "process", "pendulum"});

    experiments::RunSettings s;
    if (auto e = top.string("experiment")) {
        try {
            (void)experiments::find(*e);
        } catch (const Error&) {
            top.error(top.node("experiment"), "experiment", fmt::format("unknown experiment '{}'", *e));
        }
        s.experiment = *e;
    }
    if (auto h = top.integer("horizon")) {
        if (*h <= 0) {
            top.error(top.node("horizon"), "horizon", "must be positive");
        }
        s.horizon = static_cast<long>(*h);
    }
    if (auto seed = top.integer("seed")) {
        if (*seed < 0) {
            top.error(top.node("seed"), "seed", "must be non-negative");
        }
        s.seed = static_cast<std::uint64_t>(*seed);
    }
    if (auto d = top.integer("decimate")) {
        if (*d < 1) {
            top.error(top.node("decimate"), "decimate", "must be at least 1");
        }
        s.decimate = static_cast<long>(*d);
    }
    if (auto o = top.string("output")) {
        s.output = *o;
    }
    if (auto a = top.strings("algorithms")) {
        s.algorithms = *a;
    }
    if (const auto* g = top.table("gamma")) {
        const Reader r(source, *g, "gamma.");
        r.only({"value", "margin"});
        if (auto v = r.number("value")) {
            positive(r, "value", *v);
            s.gamma = *v;
        }
        if (auto m = r.number("margin")) {
            if (!(*m > 1.0)) {
                r.error(r.node("margin"), "margin", "must exceed 1");
            }
            s.gamma_margin = *m;
        }
    }
    if (const auto* d = top.table("disturbance")) {
        const Reader r(source, *d, "disturbance.");
        if (s.experiment.empty() && !d->contains("kind")) {
            r.error(top.node("disturbance"), "kind", "required when no experiment is named");
        }
        const auto base = s.experiment.empty() ? signal::DisturbanceSpec{}
                                               : experiments::find(s.experiment).disturbance;
        s.disturbance = read_disturbance(r, base);
    }
    if (const auto* p = top.table("process")) {
        const Reader r(source, *p, "process.");
        signal::DisturbanceSpec base;
        base.kind = signal::Kind::Gaussian;
        s.process = read_disturbance(r, base);
    }
    if (const auto* p = top.table("pendulum")) {
        const Reader r(source, *p, "pendulum.");
        r.only({"m", "l", "g", "J", "dt", "quantization", "linear"});
        const std::pair<std::string_view, double*> fields[] = {
            {"m", &s.pendulum.m},   {"l", &s.pendulum.l},   {"g", &s.pendulum.g},
            {"J", &s.pendulum.J},   {"dt", &s.pendulum.dt}, {"quantization", &s.quantization}};
        for (const auto& [key, dst] : fields) {
            if (auto v = r.number(key)) {
                positive(r, key, *v);
                *dst = *v;
            }
        }
        if (auto lin = r.boolean("linear")) {
            s.linear_dynamics = *lin;
        }
    }
    return s;
}

experiments::RunSettings load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Config,
            fmt::format("cannot read config '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::string to_toml(const experiments::RunSettings& s) {
    std::string out;
    if (!s.experiment.empty()) {
        out += fmt::format("experiment = \"{}\"\n", s.experiment);
    }
    if (s.horizon) {
        out += fmt::format("horizon = {}\n", *s.horizon);
    }
    out += fmt::format("seed = {}\n", s.seed);
    out += fmt::format("decimate = {}\n", s.decimate);
    if (s.output) {
        out += fmt::format("output = \"{}\"\n", s.output->generic_string());
    }
    if (!s.algorithms.empty()) {
        out += fmt::format("algorithms = [\"{}\"]\n", fmt::join(s.algorithms, "\", \""));
    }
    out += "\n[gamma]\n";
    if (s.gamma) {
        out += fmt::format("value = {:.17g}\n", *s.gamma);
    }
    out += fmt::format("margin = {:.17g}\n", s.gamma_margin);
    const auto spec_toml = [](std::string_view name, const signal::DisturbanceSpec& d) {
        return fmt::format(
            "\n[{}]\nkind = \"{}\"\namplitude = {:.17g}\nperiod = {:.17g}\ntime_step = "
            "{:.17g}\nswitch_times = [{}]\nscale = {:.17g}\nsegments = {}\nzero_tail = "
            "{:.17g}\n",
            name, signal::to_string(d.kind), d.amplitude, d.period, d.time_step,
            fmt::join(d.switch_times, ", "), d.scale, d.segments, d.zero_tail);
    };
    if (s.disturbance) {
        out += spec_toml("disturbance", *s.disturbance);
    }
    if (s.process) {
        out += spec_toml("process", *s.process);
    }
    out += fmt::format(
        "\n[pendulum]\nm = {:.17g}\nl = {:.17g}\ng = {:.17g}\nJ = {:.17g}\ndt = {:.17g}\n"
        "quantization = {:.17g}\nlinear = {}\n",
        s.pendulum.m, s.pendulum.l, s.pendulum.g, s.pendulum.J, s.pendulum.dt, s.quantization,
        s.linear_dynamics);
    return out;
}

}  // namespace pathreg::config
