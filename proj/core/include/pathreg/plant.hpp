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

#include "pathreg/common.hpp"

namespace pathreg {

/// x_{t+1} = A x_t + B_u u_t + B_w w_t with stage cost x*Qx + u*Ru.
struct ControlPlant {
    Matrix A;
    Matrix B_u;
    Matrix B_w;
    Matrix Q;
    Matrix R;
    Matrix L;            // L*L = Q
    Matrix R_sqrt;       // R^{1/2}
    Matrix R_inv_sqrt;   // R^{-1/2}

    /// Validates shapes, symmetry, R ≻ 0, Q ⪰ 0 and, when `check_pbh` is set,
    /// stabilizability of (A, B_u) and detectability of (A, L).
    ControlPlant(Matrix A, Matrix B_u, Matrix B_w, Matrix Q, Matrix R, bool check_pbh = true);

    [[nodiscard]] Eigen::Index states() const noexcept { return A.rows(); }
    [[nodiscard]] Eigen::Index controls() const noexcept { return B_u.cols(); }
    [[nodiscard]] Eigen::Index disturbances() const noexcept { return B_w.cols(); }
};

/// x_{t+1} = A x_t + B w_t, y_t = C x_t + v_t, target s_t = L x_t.
struct FilterPlant {
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix L;

    FilterPlant(Matrix A, Matrix B, Matrix C, Matrix L, bool check_pbh = true);

    [[nodiscard]] Eigen::Index states() const noexcept { return A.rows(); }
    [[nodiscard]] Eigen::Index disturbances() const noexcept { return B.cols(); }
    [[nodiscard]] Eigen::Index measurements() const noexcept { return C.rows(); }
    [[nodiscard]] Eigen::Index targets() const noexcept { return L.rows(); }
};

/// PBH tests restricted to eigenvalues with |λ| >= 1; rank tolerance 1e-8·max(1, ‖A‖).
[[nodiscard]] bool is_stabilizable(const Matrix& A, const Matrix& B);
[[nodiscard]] bool is_detectable(const Matrix& A, const Matrix& C);

namespace plants {

/// A = 0.5, B_u = B_w = 1, Q = R = 1.
[[nodiscard]] ControlPlant scalar_control();
/// A = 0.5, B = C = L = 1.
[[nodiscard]] FilterPlant scalar_filter();
/// Double integrator sampled at dt, position measured and estimated.
[[nodiscard]] FilterPlant tracking_filter(double dt = 0.01);
/// Double integrator sampled at dt with force input and force disturbance, Q = R = I.
[[nodiscard]] ControlPlant tracking_control(double dt = 0.01);

}  // namespace plants
}  // namespace pathreg
