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

// Certified solvers for the matrix equations used by every synthesis step.
//
// Conventions: `A*` denotes the (conjugate) transpose. All inputs are real.
// Riccati equations are solved by the structured doubling algorithm (SDA) and
// every returned solution is checked afterwards: residual, symmetry and
// closed-loop stability are recomputed from scratch, never taken from the
// iteration itself.

namespace pathreg::numerics {

inline constexpr double kDoublingTolerance = 1e-12;
inline constexpr int kDoublingMaxIterations = 200;
inline constexpr double kStabilityMargin = 1e-12;

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    [[nodiscard]] int dimension() const noexcept { return positive + negative + zero; }
    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Stabilizing solution of a discrete algebraic Riccati equation
///
///   P = Q + A*PA - (A*PB + S) (R + B*PB)^{-1} (B*PA + S*)
///
/// `gain` is (R + B*PB)^{-1}(B*PA + S*), `innovation` is R + B*PB and
/// `closed_loop` is A - B·gain.
struct RiccatiSolution {
    Matrix P;
    Matrix gain;
    Matrix innovation;
    Matrix closed_loop;
    double residual_norm = 0.0;
    double closed_loop_radius = 0.0;
    int iterations = 0;

    [[nodiscard]] bool stabilizing() const noexcept {
        return closed_loop_radius < 1.0 - kStabilityMargin;
    }
};

struct RiccatiOptions {
    double tolerance = kDoublingTolerance;
    int max_iterations = kDoublingMaxIterations;
};

/// Definite DARE: Q ⪰ 0, R ≻ 0. Throws NoStabilizingSolution if the doubling
/// iteration does not converge or the closed loop is not Schur stable.
[[nodiscard]] RiccatiSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q,
                                         const Matrix& R, const RiccatiOptions& options = {});

/// DARE with a cross term S. Q and R only need to be symmetric with R
/// invertible; the Popov function may be indefinite off the unit circle.
/// Throws NoSolution when the iteration breaks down or diverges. A converged
/// but non-stabilizing solution is returned as-is; check `stabilizing()`.
[[nodiscard]] RiccatiSolution solve_dare_general(const Matrix& A, const Matrix& B, const Matrix& Q,
                                                 const Matrix& R, const Matrix& S,
                                                 const RiccatiOptions& options = {});

/// Game-type Riccati equation with B = [B1 B2] and a signature weight R̃
/// (typically diag(I, -γ²I)). Feasibility is reported, never thrown.
struct IndefiniteRiccatiResult {
    RiccatiSolution solution;
    Inertia weight_inertia;      // inertia of R̃
    Inertia innovation_inertia;  // inertia of H̃ = R̃ + B*PB
    bool stabilizing = false;
    bool inertia_match = false;
    bool positive_semidefinite = false;

    [[nodiscard]] bool feasible() const noexcept {
        return stabilizing && inertia_match && positive_semidefinite;
    }
};

[[nodiscard]] IndefiniteRiccatiResult solve_indefinite_dare(const Matrix& A, const Matrix& B1,
                                                            const Matrix& B2, const Matrix& Q,
                                                            const Matrix& R_tilde,
                                                            const RiccatiOptions& options = {});

/// X = F* X F + W. Requires ρ(F) < 1.
[[nodiscard]] Matrix solve_stein(const Matrix& F, const Matrix& W);

/// X = F X F* + W. Requires ρ(F) < 1.
[[nodiscard]] Matrix solve_stein_dual(const Matrix& F, const Matrix& W);

/// X = A1 X A2* + C. Requires ρ(A1)·ρ(A2) < 1 for uniqueness; solved through
/// the vectorized system (I - A2 ⊗ A1) vec X = vec C.
[[nodiscard]] Matrix solve_stein_sylvester(const Matrix& A1, const Matrix& A2, const Matrix& C);

[[nodiscard]] double spectral_radius(const Matrix& M);
[[nodiscard]] double max_singular_value(const Matrix& M);
[[nodiscard]] double max_singular_value(const CMatrix& M);

/// Eigenvalue sign counts; eigenvalues with |λ| <= tol·max(1, ‖M‖) count as zero.
[[nodiscard]] Inertia inertia(const Matrix& M, double tol = 1e-10);

[[nodiscard]] bool is_symmetric(const Matrix& M, double tol = 1e-9);
[[nodiscard]] Matrix symmetrize(const Matrix& M);

/// Symmetric square root through the eigendecomposition; M must be PSD.
[[nodiscard]] Matrix sqrt_psd(const Matrix& M);
/// Inverse symmetric square root; M must be PD.
[[nodiscard]] Matrix inv_sqrt_pd(const Matrix& M);

/// Riccati residual ‖Q + A*PA - (A*PB+S)(R+B*PB)^{-1}(B*PA+S*) - P‖_F.
[[nodiscard]] double riccati_residual(const Matrix& A, const Matrix& B, const Matrix& Q,
                                      const Matrix& R, const Matrix& S, const Matrix& P);

}  // namespace pathreg::numerics
