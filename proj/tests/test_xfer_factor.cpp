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
#include <doctest.h>

#include "oracles.hpp"
#include "pathreg/factor.hpp"
#include "pathreg/xfer.hpp"

using namespace pathreg;
using testing::eye;
using testing::resolvent;
using testing::Rng;

namespace {

Matrix scalar(double v) {
    Matrix m(1, 1);
    m << v;
    return m;
}

std::vector<Complex> circle(int count) {
    std::vector<Complex> zs;
    for (int k = 0; k < count; ++k) {
        zs.push_back(std::polar(1.0, std::numbers::pi * (2 * k + 1) / count));
    }
    return zs;
}

double err(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double rel(const CMatrix& a, const CMatrix& b) { return err(a, b) / (1.0 + b.cwiseAbs().maxCoeff()); }

}  // namespace

TEST_SUITE("xfer") {

TEST_CASE("evaluate") {
    const xfer::StateSpace g(scalar(0), scalar(1), scalar(1), scalar(0));
    CHECK(std::abs(xfer::evaluate(g, Complex(2, 0))(0, 0) - 0.5) < 1e-15);
    const xfer::StateSpace gain(scalar(0.3), Matrix::Zero(1, 2), Matrix::Ones(2, 1),
                                Matrix::Identity(2, 2));
    for (const Complex z : circle(8)) {
        CHECK(err(xfer::evaluate(gain, z), eye(2)) < 1e-15);
    }
    bool threw = false;
    try {
        (void)xfer::evaluate(g, Complex(0, 0));
    } catch (const Error& e) {
        threw = e.kind() == ErrorKind::PoleHit;
    }
    CHECK(threw);
}

TEST_CASE("io factor on the scalar system") {
    const auto io = factor::factor_io(scalar(0.5), scalar(1), scalar(1));
    double worst = 0.0;
    for (const Complex z : xfer::unit_circle_grid(64)) {
        const Complex h = 1.0 / (z - 0.5);
        const CMatrix d = xfer::evaluate(io.delta1, z);
        worst = std::max(worst, std::abs((d.adjoint() * d)(0, 0) - (1.0 + std::norm(h))));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("adjoint evaluate") {
    Rng rng(21);
    const xfer::StateSpace g(rng.stable(2, 0.8), rng.matrix(2, 2), rng.matrix(2, 2), rng.matrix(2, 2));
    for (const Complex z : circle(16)) {
        CHECK(err(xfer::adjoint_evaluate(g, z), xfer::evaluate(g, z).adjoint()) < 1e-12);
    }
    const Complex z(0.5, 0.1);
    CHECK(err(xfer::adjoint_evaluate(g, z), xfer::evaluate(g, 1.0 / std::conj(z)).adjoint()) < 1e-12);
    const Matrix D = rng.matrix(2, 3);
    const auto s = xfer::StateSpace::gain(D);
    CHECK(err(xfer::adjoint_evaluate(s, Complex(0.3, 2.0)), D.transpose().cast<Complex>()) < 1e-15);
}

TEST_CASE("invert") {
    const Matrix D = (Matrix(2, 2) << 2, 1, 0, 4).finished();
    CHECK(err(xfer::evaluate(xfer::invert(xfer::StateSpace::gain(D)), Complex(1, 0)),
              D.inverse().cast<Complex>()) < 1e-15);

    const auto io = factor::factor_io(scalar(0.5), scalar(1), scalar(1));
    const auto inv = xfer::invert(io.delta2);
    double worst = 0.0;
    for (const Complex z : xfer::unit_circle_grid(64)) {
        worst = std::max(worst, err(xfer::evaluate(inv, z) * xfer::evaluate(io.delta2, z), eye(1)));
        worst = std::max(worst, err(xfer::evaluate(io.delta2, z) * xfer::evaluate(inv, z), eye(1)));
    }
    CHECK(worst < 1e-10);

    Rng rng(22);
    const xfer::StateSpace g(rng.stable(3, 0.7), rng.matrix(3, 2), rng.matrix(2, 3),
                             rng.matrix(2, 2) + 3.0 * Matrix::Identity(2, 2));
    const auto twice = xfer::invert(xfer::invert(g));
    for (int k = 0; k < 16; ++k) {
        const Complex z = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.28));
        CHECK(rel(xfer::evaluate(twice, z), xfer::evaluate(g, z)) < 1e-10);
    }

    bool threw = false;
    try {
        (void)xfer::invert(xfer::StateSpace(scalar(0.5), scalar(1), scalar(1), scalar(0)));
    } catch (const Error& e) {
        threw = e.kind() == ErrorKind::SingularD;
    }
    CHECK(threw);
}

TEST_CASE("compose and add") {
    const xfer::StateSpace a(scalar(0.5), scalar(1), scalar(1), scalar(0));
    const xfer::StateSpace b(scalar(0.4), scalar(1), scalar(1), scalar(0));
    CHECK(std::abs(xfer::evaluate(xfer::compose(a, b), Complex(1, 0))(0, 0) - 10.0 / 3.0) < 1e-12);
    CHECK(std::abs(xfer::evaluate(xfer::add(a, b), Complex(1, 0))(0, 0) - (2.0 + 1.0 / 0.6)) < 1e-12);
    const Complex z(0.2, 1.3);
    CHECK(err(xfer::evaluate(xfer::compose(a, xfer::StateSpace::gain(scalar(1))), z),
              xfer::evaluate(a, z)) < 1e-15);
    CHECK(err(xfer::evaluate(xfer::scale(scalar(2), a, scalar(3)), z), 6.0 * xfer::evaluate(a, z)) <
          1e-14);

    bool threw = false;
    try {
        (void)xfer::compose(a, xfer::StateSpace::gain(Matrix::Ones(2, 2)));
    } catch (const Error& e) {
        threw = e.kind() == ErrorKind::DimensionMismatch;
    }
    CHECK(threw);
}

TEST_CASE("compose of delta3 and J reproduces the stacked block system") {
    const auto p = plants::tracking_filter();
    const auto io = factor::factor_io(p.A, p.B, p.C);
    const auto center = factor::factor_center(io, p.A, p.B, p.L, 35.64);
    const auto q = factor::decompose_q(io, center, p);
    const auto prod = xfer::compose(center.delta3, xfer::StateSpace(p.A, p.B, p.L, Matrix::Zero(1, 1)));
    double worst = 0.0;
    for (const Complex z : circle(32)) {
        worst = std::max(worst, rel(xfer::evaluate(prod, z), resolvent(q.A_hat, q.B_hat, q.L_hat, z)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("impulse response") {
    const xfer::StateSpace a(scalar(0.5), scalar(2), scalar(3), scalar(1));
    const auto h = xfer::impulse_response(a, 4);
    REQUIRE(h.size() == 4);
    CHECK(h[0](0, 0) == 1.0);
    CHECK(h[1](0, 0) == 6.0);
    CHECK(h[3](0, 0) == doctest::Approx(1.5));
}

TEST_CASE("omega identities") {
    const std::vector<Complex> zs = circle(16);
    CHECK(xfer::check_omega_identity(scalar(1), scalar(0.3), scalar(1), scalar(0.6), scalar(0), zs) == 0.0);
    CHECK(xfer::check_omega_identity(scalar(1), scalar(0.3), scalar(1), scalar(0.6), scalar(2), zs) < 1e-12);

    Rng rng(23);
    const Matrix F = rng.stable(3, 0.8);
    const Matrix P = rng.symmetric(3);
    CHECK(xfer::check_omega_identity_adjoint(F, rng.matrix(3, 2), P, zs) < 1e-10);
    CHECK(xfer::check_omega_identity_direct(F, rng.matrix(2, 3), P, zs) < 1e-10);

    // Ω(W) = [F1; H1] W [F2ᵀ H2ᵀ] − [I; 0] W [I 0]
    const Matrix F1 = rng.matrix(2, 2), H1 = rng.matrix(1, 2), F2 = rng.matrix(3, 3),
                 H2 = rng.matrix(2, 3), W = rng.matrix(2, 3);
    Matrix left(3, 2), right(3, 5);
    left << F1, H1;
    right << F2.transpose(), H2.transpose();
    Matrix ref = left * W * right;
    ref.topLeftCorner(2, 3) -= W;
    CHECK((xfer::omega(H1, F1, H2, F2, W) - ref).norm() < 1e-14);
}

TEST_CASE("omega identities on random instances") {
    Rng rng(24);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n1 = rng.integer(1, 4), n2 = rng.integer(1, 4);
        const int q1 = rng.integer(1, 4), q2 = rng.integer(1, 4);
        std::vector<Complex> zs;
        for (int k = 0; k < 8; ++k) {
            zs.push_back(std::polar(1.0, rng.uniform(0.0, 6.283)));
        }
        const Matrix F1 = rng.stable(n1, 0.8);
        worst = std::max({worst,
                          xfer::check_omega_identity(rng.matrix(q1, n1), F1, rng.matrix(q2, n2),
                                                     rng.stable(n2, 0.8), rng.matrix(n1, n2), zs),
                          xfer::check_omega_identity_adjoint(F1, rng.matrix(n1, q1), rng.symmetric(n1), zs),
                          xfer::check_omega_identity_direct(F1, rng.matrix(q1, n1), rng.symmetric(n1), zs)});
    }
    CHECK(worst < 1e-10);
}

}  // TEST_SUITE

TEST_SUITE("factor") {

TEST_CASE("no measurement gives the identity factor") {
    const Matrix A = (Matrix(2, 2) << 0.5, 0.1, 0, 0.3).finished();
    const auto io = factor::factor_io(A, Matrix::Ones(2, 1), Matrix::Zero(1, 2));
    CHECK(io.P1.norm() < 1e-14);
    CHECK(io.K1.norm() < 1e-14);
    CHECK((io.Sigma1 - Matrix::Identity(1, 1)).norm() < 1e-14);
    CHECK(err(xfer::evaluate(io.delta1, Complex(0.3, 0.9)), eye(1)) < 1e-14);
}

TEST_CASE("scalar io factorization") {
    const auto io = factor::factor_io(scalar(0.5), scalar(1), scalar(1));
    const double p = (0.25 + std::sqrt(4.0625)) / 2.0;
    CHECK(io.P1(0, 0) == doctest::Approx(p).epsilon(1e-12));
    CHECK(io.P2(0, 0) == doctest::Approx(p).epsilon(1e-12));
    CHECK(io.Sigma1(0, 0) == doctest::Approx(1 + p).epsilon(1e-12));
    for (const Complex z : xfer::unit_circle_grid(64)) {
        const Complex h = 1.0 / (z - 0.5);
        const CMatrix d2 = xfer::evaluate(io.delta2, z);
        CHECK(std::abs((d2 * d2.adjoint())(0, 0) - (1.0 + std::norm(h))) < 1e-8);
    }
}

TEST_CASE("tracking io factorization") {
    const auto p = plants::tracking_filter();
    const auto io = factor::factor_io(p.A, p.B, p.C);
    double worst = 0.0;
    for (const Complex z : circle(64)) {
        const CMatrix H = resolvent(p.A, p.B, p.C, z);
        const CMatrix d1 = xfer::evaluate(io.delta1, z), d2 = xfer::evaluate(io.delta2, z);
        worst = std::max({worst, rel(d1.adjoint() * d1, eye(1) + H.adjoint() * H),
                          rel(d2 * d2.adjoint(), eye(1) + H * H.adjoint())});
    }
    CHECK(worst < 1e-8);
    CHECK(numerics::spectral_radius(io.A1) < 1.0);
    CHECK(numerics::spectral_radius(io.A2) < 1.0);
}

TEST_CASE("center factor") {
    SUBCASE("zero target") {
        const auto io = factor::factor_io(scalar(0.5), scalar(1), scalar(1));
        const auto c = factor::factor_center(io, scalar(0.5), scalar(1), scalar(0), 4.0);
        CHECK(err(xfer::evaluate(c.delta3, Complex(0.1, 0.7)), 0.25 * eye(1)) < 1e-14);
    }
    const std::pair<FilterPlant, double> cases[] = {{plants::scalar_filter(), 1.0},
                                                    {plants::tracking_filter(), 35.64}};
    for (const auto& [p, g] : cases) {
        const auto io = factor::factor_io(p.A, p.B, p.C);
        const auto c = factor::factor_center(io, p.A, p.B, p.L, g);
        double worst = 0.0;
        for (const Complex z : circle(64)) {
            const CMatrix R = resolvent(p.A, p.B, p.L, z) * xfer::evaluate(io.delta1, z).inverse();
            const CMatrix rhs = eye(1) / (g * g) + R * R.adjoint() / (g * g * g * g);
            const CMatrix d3 = xfer::evaluate(c.delta3, z);
            worst = std::max(worst, rel(d3.adjoint() * d3, rhs) * g * g);
        }
        CHECK(worst < 1e-8);
        CHECK(c.delta3.causal_stable());
    }
}

TEST_CASE("q decomposition") {
    SUBCASE("no process noise") {
        const FilterPlant p(scalar(0.5), scalar(0), scalar(1), scalar(1));
        const auto io = factor::factor_io(p.A, p.B, p.C);
        const auto q = factor::decompose_q(io, factor::factor_center(io, p.A, p.B, p.L, 1.0), p);
        CHECK(q.constant_term.norm() == 0.0);
        CHECK(std::abs(q.evaluate(Complex(0.0, 1.0))(0, 0)) < 1e-15);
    }
    SUBCASE("scalar part sum") {
        const auto p = plants::scalar_filter();
        const auto io = factor::factor_io(p.A, p.B, p.C);
        const auto c = factor::factor_center(io, p.A, p.B, p.L, 1.0);
        const auto q = factor::decompose_q(io, c, p);
        double worst = 0.0;
        for (const Complex z : xfer::unit_circle_grid(64)) {
            const CMatrix H = resolvent(p.A, p.B, p.C, z), J = resolvent(p.A, p.B, p.L, z);
            const CMatrix Q = J * H.adjoint() * xfer::evaluate(io.delta2, z).adjoint().inverse();
            worst = std::max(worst, err(q.evaluate(z), xfer::evaluate(c.delta3, z) * Q));
        }
        CHECK(worst < 1e-8);
    }
    SUBCASE("value at one on a stable plant") {
        Rng rng(25);
        const FilterPlant p(rng.stable(3, 0.7), rng.matrix(3, 1), rng.matrix(1, 3), rng.matrix(1, 3));
        const auto io = factor::factor_io(p.A, p.B, p.C);
        const auto c = factor::factor_center(io, p.A, p.B, p.L, 3.0);
        const auto q = factor::decompose_q(io, c, p);
        REQUIRE(q.delta3Q_at_1.has_value());
        const Complex one(1.0, 0.0);
        const CMatrix ref = xfer::evaluate(c.delta3, one) * resolvent(p.A, p.B, p.L, one) *
                            resolvent(p.A, p.B, p.C, one).adjoint() *
                            xfer::evaluate(io.delta2, one).adjoint().inverse();
        CHECK(std::abs(ref(0, 0).imag()) < 1e-14);
        CHECK(err(q.delta3Q_at_1->cast<Complex>(), ref) < 1e-10);
    }
    SUBCASE("integrator plant has no finite value at one") {
        const auto p = plants::tracking_filter();
        const auto io = factor::factor_io(p.A, p.B, p.C);
        const auto q = factor::decompose_q(io, factor::factor_center(io, p.A, p.B, p.L, 35.64), p);
        CHECK_FALSE(q.delta3Q_at_1.has_value());
    }
}

TEST_CASE("control factorization") {
    auto identity = [](const ControlPlant& p, double g) {
        const auto f = factor::factor_control(p, g);
        const Matrix Bv = p.B_u * p.R_inv_sqrt;
        double worst = 0.0, inv = 0.0;
        for (const Complex z : circle(64)) {
            const CMatrix F = resolvent(p.A, Bv, p.L, z), G = resolvent(p.A, p.B_w, p.L, z);
            const auto np = p.disturbances();
            const CMatrix rhs = g * g * std::norm(1.0 - 1.0 / z) * eye(np) +
                                G.adjoint() * (eye(p.L.rows()) + F * F.adjoint()).inverse() * G;
            const CMatrix d = xfer::evaluate(f.delta, z);
            worst = std::max(worst, rel(d.adjoint() * d, rhs));
            inv = std::max(inv, err(xfer::evaluate(f.delta_inverse, z) * d, eye(np)));
        }
        return std::pair{worst, inv};
    };
    SUBCASE("disturbance-free limit") {
        const ControlPlant p(scalar(0.5), scalar(1), scalar(0), scalar(1), scalar(1));
        const auto f = factor::factor_control(p, 1.0);
        for (const Complex z : circle(64)) {
            const CMatrix d = xfer::evaluate(f.delta, z);
            CHECK(std::abs((d.adjoint() * d)(0, 0) - std::norm(1.0 - z)) < 1e-8);
        }
        CHECK_FALSE(f.inverse_stable);
    }
    SUBCASE("scalar plant at gamma 2") {
        const auto [id, inv] = identity(plants::scalar_control(), 2.0);
        CHECK(id < 1e-8);
        CHECK(inv < 1e-10);
    }
    SUBCASE("tracking plant") {
        const auto [id, inv] = identity(plants::tracking_control(), 30.0);
        CHECK(id < 1e-8);
        CHECK(inv < 1e-8);
    }
}

}  // TEST_SUITE
