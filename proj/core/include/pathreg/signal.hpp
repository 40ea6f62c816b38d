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
#include <string>
#include <vector>

#include "pathreg/common.hpp"

namespace pathreg::signal {

enum class PathlengthMode {
    /// First increment taken against an implicit zero predecessor.
    ZeroPredecessor,
    /// Increments between consecutive samples only.
    InteriorOnly,
};

[[nodiscard]] double energy(const Signal& w);
[[nodiscard]] double pathlength(const Signal& w,
                                PathlengthMode mode = PathlengthMode::ZeroPredecessor);

enum class Kind { Zero, Constant, Step, Sinusoid, Gaussian, RandomWalk, PiecewiseConstant };

[[nodiscard]] std::string_view to_string(Kind kind) noexcept;
/// Throws Config for unknown names.
[[nodiscard]] Kind kind_from_string(std::string_view name);

struct DisturbanceSpec {
    Kind kind = Kind::Zero;
    double amplitude = 1.0;
    /// w_t = amplitude·sin(2πt·time_step / period); period is in the units of time_step.
    double period = 100.0;
    double time_step = 1.0;
    /// Step: sign flips at each listed step index, starting at +amplitude.
    std::vector<long> switch_times{500};
    /// Random walk increment scale; piecewise-constant segment count.
    double scale = 0.01;
    int segments = 8;
    std::uint64_t seed = 0;
    int dimension = 1;
    /// Fraction of the horizon at the end forced to zero.
    double zero_tail = 0.0;
};

/// Deterministic given the spec, including the seed.
[[nodiscard]] Signal generate(const DisturbanceSpec& spec, long horizon);

/// splitmix64 finalizer; used to derive independent per-channel streams.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Zeroes the last ⌈fraction·T⌉ columns.
void zero_tail(Signal& w, double fraction);

}  // namespace pathreg::signal
