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
#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "pathreg/control.hpp"
#include "pathreg/numerics.hpp"

using namespace pathreg;
using numerics::Inertia;
using testing::Rng;

namespace {

Matrix scalar(double v) {
    Matrix m(1, 1);
    m << v;
    return m;
}

// Root of P² − 0.25P − 1 = 0.
const double kScalarP = (0.25 + std::sqrt(4.0625)) / 2.0;

Matrix stein_series(const Matrix& F, const Matrix& W, int terms) {
    Matrix X = Matrix::Zero(W.rows(), W.cols());
    Matrix Fk = Matrix::Identity(F.rows(), F.cols());
    for (int k = 0; k < terms; ++k) {
        X += Fk.transpose() * W * Fk;
        Fk = Fk * F;
    }
    return X;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

template <typename F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("dare without dynamics returns Q") {
    const Matrix I = Matrix::Identity(2, 2);
    const auto r = numerics::solve_dare(Matrix::Zero(2, 2), Matrix::Zero(2, 1), I, scalar(1.0));
    CHECK((r.P - I).norm() < 1e-14);
    CHECK(r.gain.norm() < 1e-14);
}

TEST_CASE("scalar dare matches the quadratic root") {
    const auto r = numerics::solve_dare(scalar(0.5), scalar(1), scalar(1), scalar(1));
    CHECK(r.P(0, 0) == doctest::Approx(kScalarP).epsilon(1e-12));
    CHECK(kScalarP == doctest::Approx(1.132782).epsilon(1e-6));
    CHECK(r.gain(0, 0) == doctest::Approx(0.5 * kScalarP / (1 + kScalarP)).epsilon(1e-12));
    CHECK(r.stabilizing());
}

TEST_CASE("integrator with zero weight has no stabilizing solution") {
    // Root enumeration of P = Q + A²P − A²P²/(R + P) on a grid, then the stability filter.
    int stabilizing_roots = 0;
    for (int k = 0; k <= 100000; ++k) {
        const double p = 1e-3 * k;
        const double f = p - (p - p * p / (1 + p));
        if (std::abs(f) < 1e-12 && std::abs(1.0 - p / (1 + p)) < 1.0) {
            ++stabilizing_roots;
        }
    }
    CHECK(stabilizing_roots == 0);
    CHECK(kind_of([] {
              (void)numerics::solve_dare(scalar(1), scalar(1), scalar(0), scalar(1));
          }) == ErrorKind::NoStabilizingSolution);
}

TEST_CASE("dare shape errors") {
    CHECK(kind_of([] {
              (void)numerics::solve_dare(Matrix::Zero(2, 2), Matrix::Zero(3, 1),
                                         Matrix::Identity(2, 2), scalar(1));
          }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("random dare residual and stability") {
    Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        const int n = rng.integer(1, 5);
        const int m = rng.integer(1, 3);
        const Matrix A = rng.matrix(n, n) * rng.uniform(0.2, 1.5) / std::sqrt(n);
        const Matrix B = rng.matrix(n, m);
        const Matrix Lq = rng.matrix(n, n);
        const Matrix Q = Lq.transpose() * Lq;
        const Matrix Rf = rng.matrix(m, m);
        const Matrix R = Rf * Rf.transpose() + Matrix::Identity(m, m);
        const auto r = numerics::solve_dare(A, B, Q, R);
        CHECK(numerics::riccati_residual(A, B, Q, R, Matrix::Zero(n, m), r.P) <
              1e-9 * (1 + r.P.norm()));
        CHECK(numerics::spectral_radius(r.closed_loop) < 1.0 - 1e-12);
        CHECK(numerics::is_symmetric(r.P));
    }
}

TEST_CASE("indefinite dare tends to the definite one") {
    const double g = 1e6;
    Matrix Rt(2, 2);
    Rt << 1, 0, 0, -g * g;
    const auto r = numerics::solve_indefinite_dare(scalar(0.5), scalar(1), scalar(1), scalar(1), Rt);
    CHECK(std::abs(r.solution.P(0, 0) - kScalarP) < 1e-4);
    CHECK(r.feasible());
}

TEST_CASE("indefinite dare without disturbance channel equals the dare") {
    const auto plain = numerics::solve_dare(scalar(0.5), scalar(1), scalar(1), scalar(1));
    for (double g : {0.1, 1.0, 10.0}) {
        Matrix Rt(2, 2);
        Rt << 1, 0, 0, -g * g;
        const auto r =
            numerics::solve_indefinite_dare(scalar(0.5), scalar(1), scalar(0), scalar(1), Rt);
        CHECK(std::abs(r.solution.P(0, 0) - plain.P(0, 0)) < 1e-12);
        CHECK(r.feasible());
    }
}

TEST_CASE("indefinite dare below the H-infinity level reports inertia mismatch") {
    const double star =
        control::bisect_gamma(control::hinf_predicate(plants::scalar_control(), control::Mode::Causal))
            .gamma_star;
    const double g = 0.5 * star;
    Matrix Rt(2, 2);
    Rt << 1, 0, 0, -g * g;
    const auto r = numerics::solve_indefinite_dare(scalar(0.5), scalar(1), scalar(1), scalar(1), Rt);
    CHECK_FALSE(r.inertia_match);
    CHECK_FALSE(r.feasible());
    CHECK(r.weight_inertia == Inertia{1, 1, 0});
}

TEST_CASE("indefinite dare feasibility is monotone on the benchmark plants") {
    for (const auto& plant : {plants::scalar_control(), plants::tracking_control()}) {
        const auto pred = control::hinf_predicate(plant, control::Mode::Causal);
        bool seen = false;
        for (double lg = -1.0; lg <= 3.0; lg += 0.2) {
            const bool ok = pred(std::pow(10.0, lg));
            CHECK_FALSE((seen && !ok));
            seen = seen || ok;
        }
        CHECK(seen);
    }
}

TEST_CASE("stein closed forms") {
    CHECK(numerics::solve_stein(scalar(0.5), scalar(1))(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    const Matrix W = (Matrix(2, 2) << 2, 1, 1, 3).finished();
    CHECK((numerics::solve_stein(Matrix::Zero(2, 2), W) - W).norm() < 1e-15);
    CHECK(kind_of([] { (void)numerics::solve_stein(scalar(1.0), scalar(1)); }) ==
          ErrorKind::UnstableMatrix);
}

TEST_CASE("stein against the truncated series") {
    Rng rng(12);
    for (int i = 0; i < 25; ++i) {
        const int n = rng.integer(1, 5);
        const Matrix F = rng.stable(n, rng.uniform(0.1, 0.8));
        const Matrix H = rng.matrix(2, n);
        const Matrix W = H.transpose() * H;
        const Matrix ref = stein_series(F, W, 400);
        CHECK((numerics::solve_stein(F, W) - ref).norm() < 1e-8 * (1 + ref.norm()));
        const Matrix refd = stein_series(F.transpose(), W, 400);
        CHECK((numerics::solve_stein_dual(F, W) - refd).norm() < 1e-8 * (1 + refd.norm()));
        if (n == 4) {
            CHECK((numerics::solve_stein(F, W) - ref).norm() < 1e-10 * (1 + ref.norm()));
        }
    }
}

TEST_CASE("stein sylvester") {
    const Matrix C = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();
    CHECK((numerics::solve_stein_sylvester(Matrix::Zero(2, 2), Matrix::Identity(3, 3) * 0.5, C) - C)
              .norm() < 1e-15);
    CHECK(numerics::solve_stein_sylvester(scalar(0.5), scalar(0.4), scalar(1))(0, 0) ==
          doctest::Approx(1.25).epsilon(1e-14));

    Rng rng(13);
    const Matrix A1 = rng.stable(3, 0.9), A2 = rng.stable(3, 0.7), C3 = rng.matrix(3, 3);
    // vec(A1 X A2ᵀ) = (A2 ⊗ A1) vec X
    const Matrix K = Matrix::Identity(9, 9) - kron(A2, A1);
    const Vector c = Eigen::Map<const Vector>(C3.data(), 9);
    const Vector x = K.fullPivLu().solve(c);
    const Matrix ref = Eigen::Map<const Matrix>(x.data(), 3, 3);
    CHECK((numerics::solve_stein_sylvester(A1, A2, C3) - ref).norm() < 1e-10);
}

TEST_CASE("spectral helpers") {
    const Matrix d = Eigen::Vector2d(3, -5).asDiagonal();
    CHECK(numerics::max_singular_value(d) == doctest::Approx(5.0));
    const Matrix e = Eigen::Vector3d(1, -1, 0).asDiagonal();
    CHECK(numerics::inertia(e) == Inertia{1, 1, 1});
    const double r = 0.7, th = 0.9;
    const Matrix rot = r * (Matrix(2, 2) << std::cos(th), -std::sin(th), std::sin(th), std::cos(th)).finished();
    CHECK(numerics::spectral_radius(rot) == doctest::Approx(r).epsilon(1e-14));
    CHECK(kind_of([] {
              (void)numerics::inertia((Matrix(2, 2) << 1, 2, 0, 1).finished());
          }) == ErrorKind::NotHermitian);
}

TEST_CASE("psd square roots") {
    Rng rng(14);
    const Matrix a = rng.matrix(3, 3);
    const Matrix M = a * a.transpose() + Matrix::Identity(3, 3);
    const Matrix s = numerics::sqrt_psd(M);
    CHECK((s * s - M).norm() < 1e-12);
    CHECK((numerics::inv_sqrt_pd(M) * s - Matrix::Identity(3, 3)).norm() < 1e-12);
}

}  // TEST_SUITE
