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

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pathreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;
/// Time series stored column-wise: one column per step, one row per channel.
using Signal = Eigen::MatrixXd;

enum class ErrorKind {
    DimensionMismatch,
    NonFinite,
    NoStabilizingSolution,
    NoSolution,
    UnstableMatrix,
    SingularEquation,
    NotHermitian,
    PoleHit,
    SingularD,
    GammaTooSmall,
    SingularPivot,
    Infeasible,
    NoFeasiblePoint,
    NumericalBlowup,
    InvalidArgument,
    Config,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

// All library failures surface as this exception; `kind()` is machine readable.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

namespace detail {

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) {
        fail(kind, message);
    }
}

void require_finite(const Matrix& m, std::string_view name);
void require_square(const Matrix& m, std::string_view name);
void require_rows(const Matrix& m, Eigen::Index rows, std::string_view name);
void require_cols(const Matrix& m, Eigen::Index cols, std::string_view name);

}  // namespace detail
}  // namespace pathreg
