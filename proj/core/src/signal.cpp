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

#include "pathreg/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

namespace pathreg::signal {

using detail::require;

double energy(const Signal& w) { return w.squaredNorm(); }

double pathlength(const Signal& w, PathlengthMode mode) {
    if (w.cols() == 0) {
        return 0.0;
    }
    double total = mode == PathlengthMode::ZeroPredecessor ? w.col(0).squaredNorm() : 0.0;
    for (Eigen::Index t = 1; t < w.cols(); ++t) {
        total += (w.col(t) - w.col(t - 1)).squaredNorm();
    }
    return total;
}

std::string_view to_string(Kind kind) noexcept {
    switch (kind) {
        case Kind::Zero: return "zero";
        case Kind::Constant: return "constant";
        case Kind::Step: return "step";
        case Kind::Sinusoid: return "sinusoid";
        case Kind::Gaussian: return "gaussian";
        case Kind::RandomWalk: return "random_walk";
        case Kind::PiecewiseConstant: return "piecewise_constant";
    }
    return "unknown";
}

Kind kind_from_string(std::string_view name) {
    for (const auto k : {Kind::Zero, Kind::Constant, Kind::Step, Kind::Sinusoid, Kind::Gaussian,
                         Kind::RandomWalk, Kind::PiecewiseConstant}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    detail::fail(ErrorKind::Config, fmt::format("unknown disturbance kind '{}'", name));
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

void zero_tail(Signal& w, double fraction) {
    require(fraction >= 0.0 && fraction <= 1.0, ErrorKind::InvalidArgument,
            "zero_tail fraction must lie in [0, 1]");
    const auto T = w.cols();
    const auto k = static_cast<Eigen::Index>(std::ceil(fraction * static_cast<double>(T)));
    if (k > 0) {
        w.rightCols(std::min(k, T)).setZero();
    }
}

Signal generate(const DisturbanceSpec& spec, long horizon) {
    require(horizon >= 0, ErrorKind::InvalidArgument, "horizon must be nonnegative");
    require(spec.dimension >= 1, ErrorKind::InvalidArgument, "dimension must be positive");
    const auto T = static_cast<Eigen::Index>(horizon);
    const Eigen::Index d = spec.dimension;
    Signal w = Signal::Zero(d, T);
    switch (spec.kind) {
        case Kind::Zero:
            break;
        case Kind::Constant:
            w.setConstant(spec.amplitude);
            break;
        case Kind::Step: {
            double sign = 1.0;
            std::size_t next = 0;
            for (Eigen::Index t = 0; t < T; ++t) {
                while (next < spec.switch_times.size() && t >= spec.switch_times[next]) {
                    sign = -sign;
                    ++next;
                }
                w.col(t).setConstant(sign * spec.amplitude);
            }
            break;
        }
        case Kind::Sinusoid: {
            require(spec.period > 0.0 && spec.time_step > 0.0, ErrorKind::InvalidArgument,
                    "period and time_step must be positive");
            for (Eigen::Index t = 0; t < T; ++t) {
                const double tau = static_cast<double>(t) * spec.time_step;
                const double phase = 2.0 * std::numbers::pi * tau / spec.period;
                w.col(t).setConstant(spec.amplitude * std::sin(phase));
            }
            break;
        }
        case Kind::Gaussian:
        case Kind::RandomWalk:
        case Kind::PiecewiseConstant: {
            for (Eigen::Index c = 0; c < d; ++c) {
                std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(c)));
                std::normal_distribution<double> normal(0.0, 1.0);
                if (spec.kind == Kind::Gaussian) {
                    for (Eigen::Index t = 0; t < T; ++t) {
                        w(c, t) = spec.amplitude * normal(rng);
                    }
                } else if (spec.kind == Kind::RandomWalk) {
                    double level = 0.0;
                    for (Eigen::Index t = 0; t < T; ++t) {
                        level += spec.scale * normal(rng);
                        w(c, t) = spec.amplitude * level;
                    }
                } else {
                    require(spec.segments >= 1, ErrorKind::InvalidArgument,
                            "segments must be positive");
                    const Eigen::Index len = std::max<Eigen::Index>(1, T / spec.segments);
                    double level = 0.0;
                    for (Eigen::Index t = 0; t < T; ++t) {
                        if (t % len == 0) {
                            level = spec.amplitude * normal(rng);
                        }
                        w(c, t) = level;
                    }
                }
            }
            break;
        }
    }
    zero_tail(w, spec.zero_tail);
    return w;
}

}  // namespace pathreg::signal
