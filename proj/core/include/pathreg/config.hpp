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

#include <filesystem>
#include <string>
#include <string_view>

#include "pathreg/experiments.hpp"

namespace pathreg::config {

/// TOML run description. Top level: experiment, horizon, seed, decimate,
/// output, algorithms. Tables: [gamma] value/margin, [disturbance] and
/// [process] (kind, amplitude, period, time_step, switch_times, scale,
/// segments, zero_tail), [pendulum] (m, l, g, J, dt, quantization, linear).
/// Unknown keys and type mismatches throw Config naming the key and line.
[[nodiscard]] experiments::RunSettings parse(std::string_view text,
                                             std::string_view source = "<config>");
[[nodiscard]] experiments::RunSettings load(const std::filesystem::path& path);

/// Round-trips through parse().
[[nodiscard]] std::string to_toml(const experiments::RunSettings& s);

}  // namespace pathreg::config
