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

#include "pathreg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

namespace pathreg::numerics {

using detail::fail;
using detail::require;

namespace {

constexpr Eigen::Index kKroneckerLimit = 2500;

struct DoublingResult {
    Matrix X;
    int iterations = 0;
    bool converged = false;
};

// SDA on X = Q + A*X(I + GX)^{-1}A.
DoublingResult structured_doubling(Matrix A, Matrix G, Matrix H, const RiccatiOptions& opt) {
    const auto n = A.rows();
    const Matrix I = Matrix::Identity(n, n);
    DoublingResult out;
    double last_change = std::numeric_limits<double>::infinity();
    double best_change = std::numeric_limits<double>::infinity();
    out.X = H;
    for (int k = 0; k < opt.max_iterations; ++k) {
        Eigen::PartialPivLU<Matrix> W(I + G * H);
        if (!(W.rcond() > 1e-15)) {
            out.iterations = k;
            return out;
        }
        const Matrix WA = W.solve(A);
        const Matrix WG = W.solve(G);
        const Matrix A_next = A * WA;
        const Matrix G_next = symmetrize(G + A * WG * A.transpose());
        const Matrix H_next = symmetrize(H + A.transpose() * H * WA);
        if (!H_next.allFinite() || !G_next.allFinite() || !A_next.allFinite()) {
            out.iterations = k + 1;
            return out;
        }
        const double change = (H_next - H).norm();
        A = A_next;
        G = G_next;
        H = H_next;
        out.iterations = k + 1;
        if (change < best_change) {
            best_change = change;
            out.X = H;
        }
        const double scale = 1.0 + H.norm();
        if (change <= opt.tolerance * scale) {
            out.converged = true;
            break;
        }
        // Roundoff floor: the change stopped shrinking at a tiny relative level.
        // The caller's residual check decides whether the iterate is accepted.
        if (change <= 1e3 * opt.tolerance * scale && change >= 0.5 * last_change) {
            out.converged = true;
            break;
        }
        last_change = change;
    }
    if (out.converged) {
        out.X = H;
    }
    return out;
}

// Newton polish: each step solves a Stein equation on the current closed loop.
// Stops once the residual is at roundoff level or a step fails.
Matrix newton_polish(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                     const Matrix& S, Matrix P, int steps) {
    double best = riccati_residual(A, B, Q, R, S, P);
    for (int k = 0; k < steps && best > 1e-13 * (1.0 + P.norm()); ++k) {
        const Matrix inner = R + B.transpose() * P * B;
        const Eigen::FullPivLU<Matrix> lu(inner);
        if (!lu.isInvertible()) {
            break;
        }
        const Matrix K = lu.solve(B.transpose() * P * A + S.transpose());
        const Matrix Acl = A - B * K;
        Matrix next;
        try {
            next = solve_stein(Acl, symmetrize(Q - S * K - K.transpose() * S.transpose() +
                                               K.transpose() * R * K));
        } catch (const Error&) {
            break;
        }
        const double r = riccati_residual(A, B, Q, R, S, next);
        if (!(r < best)) {
            break;
        }
        best = r;
        P = next;
    }
    return P;
}

void check_riccati_dims(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                        const Matrix& S) {
    detail::require_square(A, "A");
    detail::require_rows(B, A.rows(), "B");
    detail::require_square(Q, "Q");
    detail::require_rows(Q, A.rows(), "Q");
    detail::require_square(R, "R");
    detail::require_rows(R, B.cols(), "R");
    detail::require_rows(S, A.rows(), "S");
    detail::require_cols(S, B.cols(), "S");
    for (const auto* m : {&A, &B, &Q, &R, &S}) {
        detail::require_finite(*m, "Riccati data");
    }
}

RiccatiSolution finish(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                       const Matrix& S, Matrix P, int iterations) {
    RiccatiSolution sol;
    sol.P = symmetrize(P);
    sol.innovation = symmetrize(R + B.transpose() * sol.P * B);
    sol.gain = sol.innovation.fullPivLu().solve(B.transpose() * sol.P * A + S.transpose());
    sol.closed_loop = A - B * sol.gain;
    sol.residual_norm = riccati_residual(A, B, Q, R, S, sol.P);
    sol.closed_loop_radius = spectral_radius(sol.closed_loop);
    sol.iterations = iterations;
    return sol;
}

}  // namespace

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

bool is_symmetric(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) {
        return false;
    }
    return (M - M.transpose()).norm() <= tol * (1.0 + M.norm());
}

double riccati_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                        const Matrix& S, const Matrix& P) {
    const Matrix cross = A.transpose() * P * B + S;
    const Matrix inner = R + B.transpose() * P * B;
    const Matrix rhs = Q + A.transpose() * P * A - cross * inner.fullPivLu().solve(cross.transpose());
    return (rhs - P).norm();
}

RiccatiSolution solve_dare_general(const Matrix& A, const Matrix& B, const Matrix& Q,
                                   const Matrix& R, const Matrix& S,
                                   const RiccatiOptions& options) {
    check_riccati_dims(A, B, Q, R, S);
    Eigen::FullPivLU<Matrix> Rlu(R);
    require(Rlu.isInvertible(), ErrorKind::NoSolution, "R is singular");
    const Matrix Rinv_St = Rlu.solve(S.transpose());
    const Matrix A0 = A - B * Rinv_St;
    const Matrix G0 = symmetrize(B * Rlu.solve(B.transpose()));
    const Matrix H0 = symmetrize(Q - S * Rinv_St);

    const auto dbl = structured_doubling(A0, G0, H0, options);
    if (!dbl.X.allFinite()) {
        fail(ErrorKind::NoSolution,
             fmt::format("doubling iteration broke down after {} steps", dbl.iterations));
    }
    const Matrix X = newton_polish(A, B, Q, R, S, dbl.X, 8);
    auto sol = finish(A, B, Q, R, S, X, dbl.iterations);
    if (!dbl.converged && !(sol.residual_norm < 1e-9 * (1.0 + sol.P.norm()))) {
        fail(ErrorKind::NoSolution,
             fmt::format("doubling iteration did not converge after {} steps", dbl.iterations));
    }
    if (!(sol.residual_norm < 1e-9 * (1.0 + sol.P.norm()))) {
        fail(ErrorKind::NoSolution,
             fmt::format("Riccati residual {:.3e} exceeds tolerance", sol.residual_norm));
    }
    return sol;
}

RiccatiSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                           const RiccatiOptions& options) {
    const Matrix S = Matrix::Zero(A.rows(), B.cols());
    RiccatiSolution sol;
    try {
        sol = solve_dare_general(A, B, Q, R, S, options);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NoSolution) {
            fail(ErrorKind::NoStabilizingSolution, e.what());
        }
        throw;
    }
    if (!sol.stabilizing()) {
        fail(ErrorKind::NoStabilizingSolution,
             fmt::format("closed loop spectral radius {:.6f} is not below 1",
                         sol.closed_loop_radius));
    }
    return sol;
}

IndefiniteRiccatiResult solve_indefinite_dare(const Matrix& A, const Matrix& B1, const Matrix& B2,
                                              const Matrix& Q, const Matrix& R_tilde,
                                              const RiccatiOptions& options) {
    detail::require_rows(B2, B1.rows(), "B2");
    Matrix B(B1.rows(), B1.cols() + B2.cols());
    B << B1, B2;
    require(is_symmetric(R_tilde), ErrorKind::NotHermitian, "R_tilde must be symmetric");
    const Matrix S = Matrix::Zero(A.rows(), B.cols());

    IndefiniteRiccatiResult out;
    out.solution = solve_dare_general(A, B, Q, R_tilde, S, options);
    out.weight_inertia = inertia(R_tilde);
    out.innovation_inertia = inertia(out.solution.innovation);
    out.inertia_match = out.weight_inertia == out.innovation_inertia;
    out.stabilizing = out.solution.stabilizing();
    const Eigen::SelfAdjointEigenSolver<Matrix> es(out.solution.P, Eigen::EigenvaluesOnly);
    const double floor = -1e-9 * (1.0 + out.solution.P.norm());
    out.positive_semidefinite = out.solution.P.rows() == 0 || es.eigenvalues().minCoeff() >= floor;
    return out;
}

Matrix solve_stein_sylvester(const Matrix& A1, const Matrix& A2, const Matrix& C) {
    detail::require_square(A1, "A1");
    detail::require_square(A2, "A2");
    detail::require_rows(C, A1.rows(), "C");
    detail::require_cols(C, A2.rows(), "C");
    const auto n1 = A1.rows();
    const auto n2 = A2.rows();
    if (n1 == 0 || n2 == 0) {
        return C;
    }
    if (n1 * n2 <= kKroneckerLimit) {
        const Matrix K = Matrix::Identity(n1 * n2, n1 * n2) - Eigen::kroneckerProduct(A2, A1);
        Eigen::FullPivLU<Matrix> lu(K);
        require(lu.isInvertible() && lu.rcond() > 1e-14, ErrorKind::SingularEquation,
                "I - A2 (x) A1 is singular");
        const Vector x = lu.solve(C.reshaped());
        return x.reshaped(n1, n2);
    }
    // Smith doubling for the large case.
    require(spectral_radius(A1) * spectral_radius(A2) < 1.0, ErrorKind::SingularEquation,
            "doubling requires rho(A1) rho(A2) < 1");
    Matrix X = C;
    Matrix P1 = A1;
    Matrix P2 = A2;
    for (int k = 0; k < kDoublingMaxIterations; ++k) {
        const Matrix step = P1 * X * P2.transpose();
        X += step;
        P1 = P1 * P1;
        P2 = P2 * P2;
        if (step.norm() <= kDoublingTolerance * (1.0 + X.norm())) {
            return X;
        }
    }
    fail(ErrorKind::SingularEquation, "Smith iteration did not converge");
}

Matrix solve_stein(const Matrix& F, const Matrix& W) {
    detail::require_square(F, "F");
    require(spectral_radius(F) < 1.0, ErrorKind::UnstableMatrix,
            "Stein equation requires a Schur-stable F");
    return symmetrize(solve_stein_sylvester(F.transpose(), F.transpose(), W));
}

Matrix solve_stein_dual(const Matrix& F, const Matrix& W) {
    detail::require_square(F, "F");
    require(spectral_radius(F) < 1.0, ErrorKind::UnstableMatrix,
            "Stein equation requires a Schur-stable F");
    return symmetrize(solve_stein_sylvester(F, F, W));
}

double spectral_radius(const Matrix& M) {
    detail::require_square(M, "M");
    if (M.rows() == 0) {
        return 0.0;
    }
    return Eigen::EigenSolver<Matrix>(M, false).eigenvalues().cwiseAbs().maxCoeff();
}

double max_singular_value(const Matrix& M) {
    if (M.size() == 0) {
        return 0.0;
    }
    return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

double max_singular_value(const CMatrix& M) {
    if (M.size() == 0) {
        return 0.0;
    }
    return Eigen::JacobiSVD<CMatrix>(M).singularValues()(0);
}

Inertia inertia(const Matrix& M, double tol) {
    detail::require_square(M, "M");
    require(is_symmetric(M), ErrorKind::NotHermitian, "inertia requires a symmetric matrix");
    Inertia out;
    if (M.rows() == 0) {
        return out;
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M), Eigen::EigenvaluesOnly);
    const double cut = tol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (const double l : es.eigenvalues()) {
        if (l > cut) {
            ++out.positive;
        } else if (l < -cut) {
            ++out.negative;
        } else {
            ++out.zero;
        }
    }
    return out;
}

Matrix sqrt_psd(const Matrix& M) {
    detail::require_square(M, "M");
    require(is_symmetric(M), ErrorKind::NotHermitian, "square root requires a symmetric matrix");
    if (M.rows() == 0) {
        return M;
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
    Vector d = es.eigenvalues();
    const double floor = -1e-10 * std::max(1.0, d.cwiseAbs().maxCoeff());
    require(d.minCoeff() >= floor, ErrorKind::InvalidArgument,
            "square root requires a positive semidefinite matrix");
    d = d.cwiseMax(0.0).cwiseSqrt();
    return symmetrize(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
}

Matrix inv_sqrt_pd(const Matrix& M) {
    detail::require_square(M, "M");
    require(is_symmetric(M), ErrorKind::NotHermitian, "square root requires a symmetric matrix");
    if (M.rows() == 0) {
        return M;
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
    const Vector d = es.eigenvalues();
    require(d.minCoeff() > 0.0, ErrorKind::InvalidArgument,
            "inverse square root requires a positive definite matrix");
    return symmetrize(es.eigenvectors() * d.cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose());
}

}  // namespace pathreg::numerics
