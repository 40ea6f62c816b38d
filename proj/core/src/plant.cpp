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

#include "pathreg/plant.hpp"

#include <algorithm>

#include "pathreg/numerics.hpp"

namespace pathreg {

using detail::require;

namespace {

bool pbh(const Matrix& A, const Matrix& B, bool columns) {
    const auto n = A.rows();
    if (n == 0) {
        return true;
    }
    const double tol = 1e-8 * std::max(1.0, A.norm());
    const Eigen::EigenSolver<Matrix> es(A, false);
    for (const auto& lambda : es.eigenvalues()) {
        if (std::abs(lambda) < 1.0 - 1e-12) {
            continue;
        }
        const CMatrix shifted = lambda * CMatrix::Identity(n, n) - A.cast<Complex>();
        CMatrix stacked;
        if (columns) {
            stacked.resize(n, n + B.cols());
            stacked << shifted, B.cast<Complex>();
        } else {
            stacked.resize(n + B.rows(), n);
            stacked << shifted, B.cast<Complex>();
        }
        const Eigen::JacobiSVD<CMatrix> svd(stacked);
        const auto& sv = svd.singularValues();
        if (sv.size() < n || sv(n - 1) <= tol) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool is_stabilizable(const Matrix& A, const Matrix& B) { return pbh(A, B, true); }

bool is_detectable(const Matrix& A, const Matrix& C) { return pbh(A, C, false); }

ControlPlant::ControlPlant(Matrix A_, Matrix B_u_, Matrix B_w_, Matrix Q_, Matrix R_,
                           bool check_pbh)
    : A(std::move(A_)), B_u(std::move(B_u_)), B_w(std::move(B_w_)), Q(std::move(Q_)),
      R(std::move(R_)) {
    detail::require_square(A, "A");
    detail::require_rows(B_u, A.rows(), "B_u");
    detail::require_rows(B_w, A.rows(), "B_w");
    detail::require_square(Q, "Q");
    detail::require_rows(Q, A.rows(), "Q");
    detail::require_square(R, "R");
    detail::require_rows(R, B_u.cols(), "R");
    for (const auto* m : {&A, &B_u, &B_w, &Q, &R}) {
        detail::require_finite(*m, "control plant");
    }
    require(numerics::is_symmetric(Q) && numerics::is_symmetric(R), ErrorKind::NotHermitian,
            "Q and R must be symmetric");
    L = numerics::sqrt_psd(Q);
    R_sqrt = numerics::sqrt_psd(R);
    R_inv_sqrt = numerics::inv_sqrt_pd(R);
    if (check_pbh) {
        require(is_stabilizable(A, B_u), ErrorKind::InvalidArgument,
                "(A, B_u) is not stabilizable");
        require(is_detectable(A, L), ErrorKind::InvalidArgument,
                "(A, Q^{1/2}) is not detectable");
    }
}

FilterPlant::FilterPlant(Matrix A_, Matrix B_, Matrix C_, Matrix L_, bool check_pbh)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), L(std::move(L_)) {
    detail::require_square(A, "A");
    detail::require_rows(B, A.rows(), "B");
    detail::require_cols(C, A.rows(), "C");
    detail::require_cols(L, A.rows(), "L");
    for (const auto* m : {&A, &B, &C, &L}) {
        detail::require_finite(*m, "filter plant");
    }
    if (check_pbh) {
        require(is_stabilizable(A, B), ErrorKind::InvalidArgument, "(A, B) is not stabilizable");
        require(is_detectable(A, C), ErrorKind::InvalidArgument, "(A, C) is not detectable");
    }
}

namespace plants {

ControlPlant scalar_control() {
    return {Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1), Matrix::Ones(1, 1),
            Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
}

FilterPlant scalar_filter() {
    return {Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1), Matrix::Ones(1, 1),
            Matrix::Ones(1, 1)};
}

FilterPlant tracking_filter(double dt) {
    Matrix A(2, 2);
    A << 1.0, dt, 0.0, 1.0;
    Matrix B(2, 1);
    B << 0.0, dt;
    Matrix C(1, 2);
    C << 1.0, 0.0;
    return {A, B, C, C};
}

ControlPlant tracking_control(double dt) {
    Matrix A(2, 2);
    A << 1.0, dt, 0.0, 1.0;
    Matrix B(2, 1);
    B << 0.0, dt;
    return {A, B, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1)};
}

}  // namespace plants
}  // namespace pathreg
