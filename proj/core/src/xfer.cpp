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

#include "pathreg/xfer.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pathreg/numerics.hpp"

namespace pathreg::xfer {

using detail::fail;
using detail::require;

namespace {

CMatrix resolvent_solve(const Matrix& A, Complex z, const CMatrix& rhs) {
    const auto n = A.rows();
    const CMatrix M = z * CMatrix::Identity(n, n) - A.cast<Complex>();
    Eigen::FullPivLU<CMatrix> lu(M);
    if (!lu.isInvertible() || lu.rcond() < 1e-13) {
        fail(ErrorKind::PoleHit,
             fmt::format("zI - A singular at z = {:.6f}{:+.6f}i", z.real(), z.imag()));
    }
    return lu.solve(rhs);
}

}  // namespace

StateSpace::StateSpace(Matrix A, Matrix B, Matrix C, Matrix D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
    detail::require_square(A_, "A");
    detail::require_rows(B_, A_.rows(), "B");
    detail::require_cols(C_, A_.rows(), "C");
    detail::require_rows(D_, C_.rows(), "D");
    detail::require_cols(D_, B_.cols(), "D");
    for (const auto* m : {&A_, &B_, &C_, &D_}) {
        detail::require_finite(*m, "state-space realization");
    }
}

StateSpace StateSpace::gain(const Matrix& D) {
    return {Matrix(0, 0), Matrix(0, D.cols()), Matrix(D.rows(), 0), D};
}

bool StateSpace::causal_stable() const {
    return numerics::spectral_radius(A_) < 1.0;
}

CMatrix evaluate(const StateSpace& G, Complex z) {
    CMatrix out = G.D().cast<Complex>();
    if (G.states() > 0) {
        out += G.C().cast<Complex>() * resolvent_solve(G.A(), z, G.B().cast<Complex>());
    }
    return out;
}

CMatrix adjoint_evaluate(const StateSpace& G, Complex z) {
    require(std::abs(z) > 0.0, ErrorKind::PoleHit, "adjoint evaluation at z = 0");
    return evaluate(G, 1.0 / std::conj(z)).adjoint();
}

StateSpace invert(const StateSpace& G) {
    require(G.D().rows() == G.D().cols(), ErrorKind::SingularD, "D must be square");
    Eigen::FullPivLU<Matrix> lu(G.D());
    require(lu.isInvertible(), ErrorKind::SingularD, "D is singular");
    const Matrix Dinv = lu.inverse();
    return {G.A() - G.B() * Dinv * G.C(), G.B() * Dinv, -Dinv * G.C(), Dinv};
}

StateSpace compose(const StateSpace& G1, const StateSpace& G2) {
    require(G1.inputs() == G2.outputs(), ErrorKind::DimensionMismatch,
            fmt::format("compose: {} inputs against {} outputs", G1.inputs(), G2.outputs()));
    const auto n1 = G1.states();
    const auto n2 = G2.states();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = G1.A();
    A.topRightCorner(n1, n2) = G1.B() * G2.C();
    A.bottomRightCorner(n2, n2) = G2.A();
    Matrix B(n1 + n2, G2.inputs());
    B << G1.B() * G2.D(), G2.B();
    Matrix C(G1.outputs(), n1 + n2);
    C << G1.C(), G1.D() * G2.C();
    return {A, B, C, G1.D() * G2.D()};
}

StateSpace add(const StateSpace& G1, const StateSpace& G2) {
    require(G1.inputs() == G2.inputs() && G1.outputs() == G2.outputs(),
            ErrorKind::DimensionMismatch, "add: shapes differ");
    const auto n1 = G1.states();
    const auto n2 = G2.states();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = G1.A();
    A.bottomRightCorner(n2, n2) = G2.A();
    Matrix B(n1 + n2, G1.inputs());
    B << G1.B(), G2.B();
    Matrix C(G1.outputs(), n1 + n2);
    C << G1.C(), G2.C();
    return {A, B, C, G1.D() + G2.D()};
}

StateSpace scale(const Matrix& M, const StateSpace& G, const Matrix& N) {
    require(M.cols() == G.outputs() && N.rows() == G.inputs(), ErrorKind::DimensionMismatch,
            "scale: shapes differ");
    return {G.A(), G.B() * N, M * G.C(), M * G.D() * N};
}

std::vector<Matrix> impulse_response(const StateSpace& G, int taps) {
    std::vector<Matrix> out;
    if (taps <= 0) {
        return out;
    }
    out.reserve(static_cast<std::size_t>(taps));
    out.push_back(G.D());
    Matrix AkB = G.B();
    for (int k = 1; k < taps; ++k) {
        out.push_back(G.C() * AkB);
        AkB = G.A() * AkB;
    }
    return out;
}

std::vector<Complex> unit_circle_grid(int count, const std::vector<const StateSpace*>& avoid,
                                      double exclusion) {
    std::vector<Complex> poles;
    for (const auto* G : avoid) {
        if (G != nullptr && G->states() > 0) {
            const Eigen::EigenSolver<Matrix> es(G->A(), false);
            for (const auto& p : es.eigenvalues()) {
                poles.push_back(p);
            }
        }
    }
    std::vector<Complex> out;
    for (int k = 0; k < count; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / count;
        const Complex z = std::polar(1.0, theta);
        bool keep = true;
        for (const auto& p : poles) {
            keep = keep && std::abs(z - p) > exclusion;
        }
        if (keep) {
            out.push_back(z);
        }
    }
    return out;
}

std::vector<FrequencySample> sample(const StateSpace& G, const std::vector<Complex>& zs) {
    std::vector<FrequencySample> out;
    out.reserve(zs.size());
    for (const auto& z : zs) {
        out.push_back({z, evaluate(G, z)});
    }
    return out;
}

Matrix omega(const Matrix& H1, const Matrix& F1, const Matrix& H2, const Matrix& F2,
             const Matrix& W) {
    detail::require_square(F1, "F1");
    detail::require_square(F2, "F2");
    detail::require_cols(H1, F1.rows(), "H1");
    detail::require_cols(H2, F2.rows(), "H2");
    detail::require_rows(W, F1.rows(), "W");
    detail::require_cols(W, F2.rows(), "W");
    const auto n1 = F1.rows();
    const auto n2 = F2.rows();
    Matrix left(n1 + H1.rows(), n1);
    left << F1, H1;
    Matrix right(n2, n2 + H2.rows());
    right << F2.transpose(), H2.transpose();
    Matrix out = left * W * right;
    out.topLeftCorner(n1, n2) -= W;
    return out;
}

double check_omega_identity(const Matrix& H1, const Matrix& F1, const Matrix& H2, const Matrix& F2,
                            const Matrix& W, const std::vector<Complex>& z_samples) {
    const Matrix Om = omega(H1, F1, H2, F2, W);
    const CMatrix Omc = Om.cast<Complex>();
    const auto n1 = F1.rows();
    const auto n2 = F2.rows();
    const auto p = H1.rows();
    const auto q = H2.rows();
    double worst = 0.0;
    for (const auto& z : z_samples) {
        CMatrix left(p, n1 + p);
        left << H1.cast<Complex>() *
                    resolvent_solve(F1, z, CMatrix::Identity(n1, n1)),
            CMatrix::Identity(p, p);
        CMatrix right(n2 + q, q);
        right << resolvent_solve(F2.transpose(), 1.0 / z, H2.transpose().cast<Complex>()),
            CMatrix::Identity(q, q);
        const CMatrix r = left * Omc * right;
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
}

double check_omega_identity_adjoint(const Matrix& F, const Matrix& H, const Matrix& P,
                                    const std::vector<Complex>& z_samples) {
    std::vector<Complex> inv;
    inv.reserve(z_samples.size());
    for (const auto& z : z_samples) {
        inv.push_back(1.0 / z);
    }
    const Matrix Ft = F.transpose();
    const Matrix Ht = H.transpose();
    return check_omega_identity(Ht, Ft, Ht, Ft, P, inv);
}

double check_omega_identity_direct(const Matrix& F, const Matrix& H, const Matrix& P,
                                   const std::vector<Complex>& z_samples) {
    return check_omega_identity(H, F, H, F, P, z_samples);
}

}  // namespace pathreg::xfer
