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

#include <vector>

#include "pathreg/common.hpp"

// Transfer matrices D + C(zI - A)^{-1}B kept in realization form.

namespace pathreg::xfer {

class StateSpace {
public:
    StateSpace() = default;
    StateSpace(Matrix A, Matrix B, Matrix C, Matrix D);

    /// Static gain: no states.
    static StateSpace gain(const Matrix& D);

    [[nodiscard]] const Matrix& A() const noexcept { return A_; }
    [[nodiscard]] const Matrix& B() const noexcept { return B_; }
    [[nodiscard]] const Matrix& C() const noexcept { return C_; }
    [[nodiscard]] const Matrix& D() const noexcept { return D_; }

    [[nodiscard]] Eigen::Index states() const noexcept { return A_.rows(); }
    [[nodiscard]] Eigen::Index inputs() const noexcept { return D_.cols(); }
    [[nodiscard]] Eigen::Index outputs() const noexcept { return D_.rows(); }

    /// True when ρ(A) < 1.
    [[nodiscard]] bool causal_stable() const;

private:
    Matrix A_;
    Matrix B_;
    Matrix C_;
    Matrix D_;
};

struct FrequencySample {
    Complex z;
    CMatrix value;
};

/// D + C(zI - A)^{-1}B. Throws PoleHit when zI - A is numerically singular.
[[nodiscard]] CMatrix evaluate(const StateSpace& G, Complex z);

/// G*(z^{-*}) = D* + B*(z^{-1}I - A*)^{-1}C*.
[[nodiscard]] CMatrix adjoint_evaluate(const StateSpace& G, Complex z);

/// Realization of G^{-1}; requires square invertible D (SingularD otherwise).
[[nodiscard]] StateSpace invert(const StateSpace& G);

/// Series connection: the response of compose(G1, G2) is G1(z)G2(z).
[[nodiscard]] StateSpace compose(const StateSpace& G1, const StateSpace& G2);

/// Parallel connection: G1(z) + G2(z).
[[nodiscard]] StateSpace add(const StateSpace& G1, const StateSpace& G2);

/// M·G(z)·N with constant M, N.
[[nodiscard]] StateSpace scale(const Matrix& M, const StateSpace& G, const Matrix& N);

/// Markov parameters D, CB, CAB, ... (`taps` entries).
[[nodiscard]] std::vector<Matrix> impulse_response(const StateSpace& G, int taps);

/// `count` equispaced points e^{2πik/count}, dropping any within `exclusion` of a pole.
[[nodiscard]] std::vector<Complex> unit_circle_grid(int count,
                                                    const std::vector<const StateSpace*>& avoid = {},
                                                    double exclusion = 1e-6);

[[nodiscard]] std::vector<FrequencySample> sample(const StateSpace& G,
                                                  const std::vector<Complex>& zs);

/// Ω(W) = [F1; H1] W [F2* H2*] - [I; 0] W [I 0].
[[nodiscard]] Matrix omega(const Matrix& H1, const Matrix& F1, const Matrix& H2, const Matrix& F2,
                           const Matrix& W);

/// max over samples of |[H1(zI - F1)^{-1}  I] Ω(W) [(z^{-1}I - F2*)^{-1}H2*; I]|.
[[nodiscard]] double check_omega_identity(const Matrix& H1, const Matrix& F1, const Matrix& H2,
                                          const Matrix& F2, const Matrix& W,
                                          const std::vector<Complex>& z_samples);

/// Pattern [H*(z^{-1}I - F*)^{-1}  I] Ω(P) [(zI - F)^{-1}H; I] with Hermitian P.
[[nodiscard]] double check_omega_identity_adjoint(const Matrix& F, const Matrix& H, const Matrix& P,
                                                  const std::vector<Complex>& z_samples);

/// Pattern [H(zI - F)^{-1}  I] Ω(P) [(z^{-1}I - F*)^{-1}H*; I] with Hermitian P.
[[nodiscard]] double check_omega_identity_direct(const Matrix& F, const Matrix& H, const Matrix& P,
                                                 const std::vector<Complex>& z_samples);

}  // namespace pathreg::xfer
