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

#include "pathreg/common.hpp"

#include <fmt/format.h>

namespace pathreg {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NoStabilizingSolution: return "NoStabilizingSolution";
        case ErrorKind::NoSolution: return "NoSolution";
        case ErrorKind::UnstableMatrix: return "UnstableMatrix";
        case ErrorKind::SingularEquation: return "SingularEquation";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::PoleHit: return "PoleHit";
        case ErrorKind::SingularD: return "SingularD";
        case ErrorKind::GammaTooSmall: return "GammaTooSmall";
        case ErrorKind::SingularPivot: return "SingularPivot";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::NoFeasiblePoint: return "NoFeasiblePoint";
        case ErrorKind::NumericalBlowup: return "NumericalBlowup";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

namespace detail {

void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, fmt::format("{}: {}", to_string(kind), message));
}

void require_finite(const Matrix& m, std::string_view name) {
    if (!m.allFinite()) {
        fail(ErrorKind::NonFinite, fmt::format("{} has non-finite entries", name));
    }
}

void require_square(const Matrix& m, std::string_view name) {
    if (m.rows() != m.cols()) {
        fail(ErrorKind::DimensionMismatch,
             fmt::format("{} must be square, got {}x{}", name, m.rows(), m.cols()));
    }
}

void require_rows(const Matrix& m, Eigen::Index rows, std::string_view name) {
    if (m.rows() != rows) {
        fail(ErrorKind::DimensionMismatch,
             fmt::format("{} must have {} rows, got {}", name, rows, m.rows()));
    }
}

void require_cols(const Matrix& m, Eigen::Index cols, std::string_view name) {
    if (m.cols() != cols) {
        fail(ErrorKind::DimensionMismatch,
             fmt::format("{} must have {} columns, got {}", name, cols, m.cols()));
    }
}

}  // namespace detail
}  // namespace pathreg
