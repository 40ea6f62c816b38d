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

#include <optional>

#include "pathreg/numerics.hpp"
#include "pathreg/plant.hpp"
#include "pathreg/xfer.hpp"

// Canonical spectral factorizations for H(z) = C(zI - A)^{-1}B and
// J(z) = L(zI - A)^{-1}B, and the control-side factor of the regret
// operator γ²M*M + G*(I + FF*)^{-1}G with M(z) = I - z^{-1}.

namespace pathreg::factor {

/// Δ1*Δ1 = I + H*H and Δ2Δ2* = I + HH*.
struct IoFactorization {
    xfer::StateSpace delta1;  // Σ1^{1/2}(I + K1(zI - A)^{-1}B)
    xfer::StateSpace delta2;  // (I + C(zI - A)^{-1}K2)Σ2^{1/2}
    Matrix K1;
    Matrix K2;
    Matrix Sigma1;
    Matrix Sigma2;
    Matrix P1;
    Matrix P2;
    Matrix A1;  // A - B K1
    Matrix A2;  // A - K2 C
};

/// Δ3*Δ3 = γ^{-2}I + γ^{-4}RR*, R = JΔ1^{-1}.
struct CenterFactorization {
    xfer::StateSpace delta3;
    Matrix K3;
    Matrix Sigma3;
    Matrix P3;
    Matrix W1;
    Matrix Sigma0;
    double gamma = 1.0;
};

/// Δ3(z)Q(z) = L̂W2G + L̂(zI - Â)^{-1}ÂW2G + L̂W2A2*(z^{-1}I - A2*)^{-1}G,
/// where Q = JH*Δ2^{-*} and G = C*Σ2^{-1/2}.
struct QDecomposition {
    Matrix A_hat;
    Matrix B_hat;
    Matrix L_hat;
    Matrix W2;
    Matrix G;
    Matrix constant_term;
    xfer::StateSpace causal_part;
    /// Realization in the variable z^{-1}: evaluate it at 1/z.
    xfer::StateSpace anticausal_part;
    /// Sum of the three parts at z = 1; empty when Â has an eigenvalue at 1.
    std::optional<Matrix> delta3Q_at_1;

    [[nodiscard]] CMatrix evaluate(Complex z) const;
};

struct ControlFactorization {
    Matrix A_tilde;
    Matrix B_tilde_w;
    Matrix L_tilde;
    Matrix S_tilde;
    Matrix K1;       // output-side factor of I + FF*
    Matrix Sigma1;
    Matrix K2c;
    Matrix Sigma2c;
    Matrix P2c;
    xfer::StateSpace delta;
    xfer::StateSpace delta_inverse;
    double gamma = 1.0;
    double residual_norm = 0.0;
    /// ρ(Ã - B̃_w K2c) < 1. Fails in the critical case G ≡ 0.
    bool inverse_stable = false;
};

[[nodiscard]] IoFactorization factor_io(const Matrix& A, const Matrix& B, const Matrix& C);

[[nodiscard]] CenterFactorization factor_center(const IoFactorization& io, const Matrix& A,
                                                const Matrix& B, const Matrix& L, double gamma);

[[nodiscard]] QDecomposition decompose_q(const IoFactorization& io,
                                         const CenterFactorization& center,
                                         const FilterPlant& plant);

[[nodiscard]] ControlFactorization factor_control(const ControlPlant& plant, double gamma);

}  // namespace pathreg::factor
