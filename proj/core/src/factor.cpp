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

#include "pathreg/factor.hpp"

#include <fmt/format.h>

namespace pathreg::factor {

using detail::require;
using numerics::inv_sqrt_pd;
using numerics::sqrt_psd;

IoFactorization factor_io(const Matrix& A, const Matrix& B, const Matrix& C) {
    detail::require_square(A, "A");
    detail::require_rows(B, A.rows(), "B");
    detail::require_cols(C, A.rows(), "C");
    const auto m = B.cols();
    const auto p = C.rows();

    IoFactorization io;
    const auto r1 = numerics::solve_dare(A, B, C.transpose() * C, Matrix::Identity(m, m));
    io.P1 = r1.P;
    io.K1 = r1.gain;
    io.Sigma1 = r1.innovation;
    io.A1 = r1.closed_loop;

    const auto r2 = numerics::solve_dare(A.transpose(), C.transpose(), B * B.transpose(),
                                         Matrix::Identity(p, p));
    io.P2 = r2.P;
    io.K2 = r2.gain.transpose();
    io.Sigma2 = r2.innovation;
    io.A2 = r2.closed_loop.transpose();

    const Matrix S1h = sqrt_psd(io.Sigma1);
    const Matrix S2h = sqrt_psd(io.Sigma2);
    io.delta1 = xfer::StateSpace(A, B, S1h * io.K1, S1h);
    io.delta2 = xfer::StateSpace(A, io.K2 * S2h, C, S2h);
    return io;
}

CenterFactorization factor_center(const IoFactorization& io, const Matrix& A, const Matrix& B,
                                  const Matrix& L, double gamma) {
    require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    detail::require_cols(L, A.rows(), "L");
    const auto r = L.rows();
    const Matrix& A1 = io.A1;

    CenterFactorization c;
    c.gamma = gamma;
    const Matrix Sigma1_inv = io.Sigma1.inverse();
    c.W1 = numerics::solve_stein_dual(A1, B * Sigma1_inv * B.transpose() / (gamma * gamma));
    c.Sigma0 = numerics::symmetrize(Matrix::Identity(r, r) + L * c.W1 * L.transpose());

    const Matrix Bx = A1 * c.W1 * L.transpose();
    const auto sol = numerics::solve_dare_general(A1, Bx, Matrix::Zero(A.rows(), A.rows()), c.Sigma0,
                                                  L.transpose());
    require(sol.stabilizing(), ErrorKind::NoStabilizingSolution,
            fmt::format("center Riccati closed loop radius {:.6f}", sol.closed_loop_radius));
    c.P3 = sol.P;
    c.K3 = sol.gain;
    c.Sigma3 = sol.innovation;
    const Matrix S3h = sqrt_psd(c.Sigma3);
    c.delta3 = xfer::StateSpace(A1, Bx, S3h * c.K3 / gamma, S3h / gamma);
    return c;
}

CMatrix QDecomposition::evaluate(Complex z) const {
    CMatrix out = constant_term.cast<Complex>();
    out += xfer::evaluate(causal_part, z);
    out += xfer::evaluate(anticausal_part, 1.0 / z);
    return out;
}

QDecomposition decompose_q(const IoFactorization& io, const CenterFactorization& center,
                           const FilterPlant& plant) {
    const Matrix& A = plant.A;
    const Matrix& B = plant.B;
    const Matrix& C = plant.C;
    const Matrix& L = plant.L;
    const auto n = A.rows();
    const Matrix& A1 = io.A1;
    const Matrix& A2 = io.A2;

    QDecomposition q;
    q.A_hat = Matrix::Zero(2 * n, 2 * n);
    q.A_hat.topLeftCorner(n, n) = A1;
    q.A_hat.topRightCorner(n, n) = A1 * center.W1 * L.transpose() * L;
    q.A_hat.bottomRightCorner(n, n) = A;
    q.B_hat = Matrix::Zero(2 * n, B.cols());
    q.B_hat.bottomRows(n) = B;
    const Matrix S3h = sqrt_psd(center.Sigma3);
    q.L_hat.resize(L.rows(), 2 * n);
    q.L_hat << S3h * center.K3, S3h * L;
    q.L_hat /= center.gamma;

    q.W2 = numerics::solve_stein_sylvester(q.A_hat, A2, q.B_hat * B.transpose());
    q.G = C.transpose() * inv_sqrt_pd(io.Sigma2);

    q.constant_term = q.L_hat * q.W2 * q.G;
    q.causal_part = xfer::StateSpace(q.A_hat, q.A_hat * q.W2 * q.G, q.L_hat,
                                     Matrix::Zero(L.rows(), q.G.cols()));
    q.anticausal_part = xfer::StateSpace(A2.transpose(), q.G, q.L_hat * q.W2 * A2.transpose(),
                                         Matrix::Zero(L.rows(), q.G.cols()));
    try {
        q.delta3Q_at_1 = q.evaluate(Complex(1.0, 0.0)).real();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleHit) {
            throw;
        }
    }
    return q;
}

ControlFactorization factor_control(const ControlPlant& plant, double gamma) {
    require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    const auto n = plant.states();
    const auto p = plant.disturbances();
    const auto r = plant.L.rows();
    const Matrix Bv = plant.B_u * plant.R_inv_sqrt;

    // Output-side factor of I + FF*: the dual Riccati on (A*, L*, Bv Bv*).
    const auto out = numerics::solve_dare(plant.A.transpose(), plant.L.transpose(),
                                          Bv * Bv.transpose(), Matrix::Identity(r, r));
    ControlFactorization f;
    f.gamma = gamma;
    f.K1 = out.gain.transpose();
    f.Sigma1 = out.innovation;

    f.A_tilde = Matrix::Zero(n + p, n + p);
    f.A_tilde.topLeftCorner(n, n) = plant.A - f.K1 * plant.L;
    f.B_tilde_w.resize(n + p, p);
    f.B_tilde_w << plant.B_w, -Matrix::Identity(p, p);
    f.L_tilde = Matrix::Zero(r + p, n + p);
    f.L_tilde.topLeftCorner(r, n) = inv_sqrt_pd(f.Sigma1) * plant.L;
    f.L_tilde.bottomRightCorner(p, p) = gamma * Matrix::Identity(p, p);
    f.S_tilde = Matrix::Zero(n + p, p);
    f.S_tilde.bottomRows(p) = gamma * gamma * Matrix::Identity(p, p);

    numerics::RiccatiSolution sol;
    try {
        sol = numerics::solve_dare_general(f.A_tilde, f.B_tilde_w,
                                           f.L_tilde.transpose() * f.L_tilde,
                                           gamma * gamma * Matrix::Identity(p, p), f.S_tilde);
    } catch (const Error& e) {
        detail::fail(ErrorKind::Infeasible, fmt::format("control factorization: {}", e.what()));
    }
    f.P2c = sol.P;
    f.K2c = sol.gain;
    f.Sigma2c = sol.innovation;
    f.residual_norm = sol.residual_norm;
    f.inverse_stable = sol.stabilizing();
    Eigen::FullPivLU<Matrix> lu(f.Sigma2c);
    require(lu.isInvertible(), ErrorKind::Infeasible, "control factorization: singular Sigma");
    const Matrix Sh = sqrt_psd(f.Sigma2c);
    f.delta = xfer::StateSpace(f.A_tilde, f.B_tilde_w, Sh * f.K2c, Sh);
    f.delta_inverse = xfer::invert(f.delta);
    return f;
}

}  // namespace pathreg::factor
