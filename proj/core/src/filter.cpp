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

#include "pathreg/filter.hpp"

#include <utility>

#include <fmt/format.h>

#include "pathreg/numerics.hpp"
#include "pathreg/signal.hpp"

namespace pathreg::filter {

using detail::require;

KalmanFilter::KalmanFilter(const FilterPlant& plant)
    : A_(plant.A), C_(plant.C), L_(plant.L) {
    const auto p = plant.measurements();
    const auto sol = numerics::solve_dare(plant.A.transpose(), plant.C.transpose(),
                                          plant.B * plant.B.transpose(), Matrix::Identity(p, p));
    P_ = sol.P;
    K_ = sol.gain.transpose();
    M_ = sol.innovation.ldlt().solve(plant.C * P_).transpose();
    x_ = Vector::Zero(plant.states());
}

Vector KalmanFilter::update(const Vector& y) {
    const Vector innovation = y - C_ * x_;
    const Vector s = L_ * (x_ + M_ * innovation);
    x_ = A_ * x_ + K_ * innovation;
    return s;
}

void KalmanFilter::reset() { x_.setZero(); }

std::unique_ptr<Estimator> kalman_synthesize(const FilterPlant& plant) {
    return std::make_unique<KalmanFilter>(plant);
}

Signal smoothed_oracle(const FilterPlant& plant, const Signal& y) {
    detail::require_rows(y, plant.measurements(), "y");
    const auto T = y.cols();
    const auto n = plant.states();
    const auto m = plant.disturbances();
    Signal out = Signal::Zero(plant.targets(), T);
    if (T == 0) {
        return out;
    }
    const Matrix& A = plant.A;
    const Matrix& B = plant.B;
    const Matrix CtC = plant.C.transpose() * plant.C;

    // Backward sweep: V_t(x) = x*P_t x - 2 q_t*x + const.
    Matrix K(m, n * T);
    Matrix k(m, T);
    Matrix P = CtC;
    Vector q = plant.C.transpose() * y.col(T - 1);
    K.middleCols((T - 1) * n, n).setZero();
    k.col(T - 1).setZero();
    for (Eigen::Index t = T - 2; t >= 0; --t) {
        const auto S = (Matrix::Identity(m, m) + B.transpose() * P * B).ldlt();
        const Matrix Kt = S.solve(B.transpose() * P * A);
        K.middleCols(t * n, n) = Kt;
        k.col(t) = S.solve(B.transpose() * q);
        q = plant.C.transpose() * y.col(t) + (A - B * Kt).transpose() * q;
        P = numerics::symmetrize(CtC + A.transpose() * P * A - A.transpose() * P * B * Kt);
    }
    Vector x = Vector::Zero(n);
    for (Eigen::Index t = 0; t < T; ++t) {
        out.col(t) = plant.L * x;
        const Vector w = -K.middleCols(t * n, n) * x + k.col(t);
        x = A * x + B * w;
    }
    return out;
}

CMatrix NehariData::evaluate_T(Complex z) const { return xfer::evaluate(T, 1.0 / z); }

NehariData nehari_solve(const Matrix& F, const Matrix& G, const Matrix& H, double gamma) {
    detail::require_square(F, "F");
    detail::require_rows(G, F.rows(), "G");
    detail::require_cols(H, F.rows(), "H");
    require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    const auto n = F.rows();
    NehariData d;
    d.F = F;
    d.G = G;
    d.H = H;
    d.gamma = gamma;
    d.Z = numerics::solve_stein(F, H.transpose() * H);
    d.Pi = numerics::solve_stein_dual(F, G * G.transpose());
    d.gamma_star = numerics::max_singular_value(Matrix(d.Z * d.Pi));
    if (gamma < d.gamma_star) {
        detail::fail(ErrorKind::GammaTooSmall,
                     fmt::format("gamma {:.6g} below sigma_max(Z Pi) = {:.6g}", gamma,
                                 d.gamma_star));
    }
    d.Z_gamma = d.Z / (gamma * gamma);
    const Matrix pivot =
        Matrix::Identity(n, n) - F.transpose() * d.Z_gamma * F * d.Pi;
    Eigen::FullPivLU<Matrix> lu(pivot);
    require(lu.isInvertible() && lu.rcond() > 1e-14, ErrorKind::SingularPivot,
            "I - F* Z_gamma F Pi is singular");
    d.K_gamma = lu.solve(F.transpose() * d.Z_gamma * G);
    d.F_gamma = F.transpose() - d.K_gamma * G.transpose();
    const Matrix HPi = H * d.Pi;
    d.K_hat = xfer::StateSpace(d.F_gamma, d.K_gamma, HPi * d.F_gamma, HPi * d.K_gamma);
    d.T = xfer::StateSpace(F, G, H, Matrix::Zero(H.rows(), G.cols()));
    return d;
}

double sigma_zpi(const FilterPlant& plant, double gamma) {
    const auto io = factor::factor_io(plant.A, plant.B, plant.C);
    const auto center = factor::factor_center(io, plant.A, plant.B, plant.L, gamma);
    const auto q = factor::decompose_q(io, center, plant);
    const auto n = plant.states();
    const Matrix F = io.A2.transpose();
    const Matrix H = q.L_hat * q.W2 * F * (Matrix::Identity(n, n) - F).inverse();
    const Matrix Z = numerics::solve_stein(F, H.transpose() * H);
    const Matrix Pi = numerics::solve_stein_dual(F, q.G * q.G.transpose());
    return numerics::max_singular_value(Matrix(Z * Pi));
}

FilterSynthesis pathlength_filter_synthesize(const FilterPlant& plant, double gamma) {
    require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    FilterSynthesis out;
    out.report.gamma = gamma;
    const auto n = plant.states();

    PathlengthFilter::Data d;
    d.gamma = gamma;
    d.C = plant.C;
    d.io = factor::factor_io(plant.A, plant.B, plant.C);
    d.center = factor::factor_center(d.io, plant.A, plant.B, plant.L, gamma);
    d.q = factor::decompose_q(d.io, d.center, plant);

    const Matrix I = Matrix::Identity(n, n);
    const Matrix F = d.io.A2.transpose();
    const Matrix resolvent = (I - F).inverse();
    const Matrix H = d.q.L_hat * d.q.W2 * F * resolvent;
    const Matrix Z = numerics::solve_stein(F, H.transpose() * H);
    const Matrix Pi = numerics::solve_stein_dual(F, d.q.G * d.q.G.transpose());
    out.report.sigma_zpi = numerics::max_singular_value(Matrix(Z * Pi));
    out.report.feasible = out.report.sigma_zpi <= 1.0;
    out.report.diagnostics =
        fmt::format("gamma={:.6g} sigma_max(Z Pi)={:.6g}", gamma, out.report.sigma_zpi);
    if (!out.report.feasible) {
        return out;
    }

    d.nehari = nehari_solve(F, d.q.G, H, 1.0);
    d.c_tilde = d.q.L_hat * d.q.W2 * resolvent * d.q.G;
    d.Sigma2_inv_sqrt = numerics::inv_sqrt_pd(d.io.Sigma2);
    d.Sigma3_inv_sqrt = numerics::inv_sqrt_pd(d.center.Sigma3);
    const Matrix AWL = d.io.A1 * d.center.W1 * plant.L.transpose();
    d.pi_A = d.io.A1 - AWL * d.center.K3;
    d.pi_B = AWL * d.Sigma3_inv_sqrt;
    out.filter = std::make_unique<PathlengthFilter>(std::move(d));
    return out;
}

control::FeasibilityPredicate pathlength_filter_predicate(const FilterPlant& plant) {
    return [plant](double g) {
        try {
            return sigma_zpi(plant, g) <= 1.0;
        } catch (const Error&) {
            return false;
        }
    };
}

PathlengthFilter::PathlengthFilter(Data data) : d_(std::move(data)) { reset(); }

void PathlengthFilter::reset() {
    e_ = Vector::Zero(d_.io.A2.rows());
    xi1_ = Vector::Zero(d_.nehari.F_gamma.rows());
    xi2_ = Vector::Zero(d_.q.A_hat.rows());
    pi_ = Vector::Zero(d_.pi_A.rows());
    alpha_prev_ = Vector::Zero(d_.q.L_hat.rows());
}

Vector PathlengthFilter::update(const Vector& y) {
    const auto& nh = d_.nehari;
    const auto& q = d_.q;
    const Vector z = d_.Sigma2_inv_sqrt * (y - d_.C * e_);
    e_ = d_.io.A2 * e_ + d_.io.K2 * y;

    xi1_ = nh.F_gamma * xi1_ + nh.K_gamma * z;
    const Vector alpha = nh.H * nh.Pi * xi1_;

    const Vector beta = d_.c_tilde * z + q.L_hat * xi2_ + alpha - alpha_prev_;
    alpha_prev_ = alpha;
    xi2_ = q.A_hat * xi2_ + q.A_hat * q.W2 * q.G * z;

    const Vector s = d_.gamma * (d_.Sigma3_inv_sqrt * beta - d_.center.K3 * pi_);
    pi_ = d_.pi_A * pi_ + d_.pi_B * beta;
    return s;
}

CMatrix PathlengthFilter::transfer(Complex z) const {
    const auto& q = d_.q;
    CMatrix mid = d_.c_tilde.cast<Complex>();
    mid += xfer::evaluate(q.causal_part, z);
    mid += (1.0 - 1.0 / z) * xfer::evaluate(d_.nehari.K_hat, z);
    const CMatrix left = xfer::evaluate(xfer::invert(d_.center.delta3), z);
    const CMatrix right = xfer::evaluate(xfer::invert(d_.io.delta2), z);
    return left * mid * right;
}

PlantResponse plant_response(const FilterPlant& plant, const Signal& w, const Signal& v) {
    detail::require_rows(w, plant.disturbances(), "w");
    detail::require_rows(v, plant.measurements(), "v");
    require(w.cols() == v.cols(), ErrorKind::DimensionMismatch, "w and v lengths differ");
    const auto T = w.cols();
    PlantResponse r{Signal(plant.targets(), T), Signal(plant.measurements(), T)};
    Vector x = Vector::Zero(plant.states());
    for (Eigen::Index t = 0; t < T; ++t) {
        r.s.col(t) = plant.L * x;
        r.y.col(t) = plant.C * x + v.col(t);
        x = plant.A * x + plant.B * w.col(t);
    }
    return r;
}

Signal run_estimator(Estimator& estimator, const Signal& y) {
    Signal out;
    for (Eigen::Index t = 0; t < y.cols(); ++t) {
        const Vector s = estimator.update(y.col(t));
        if (t == 0) {
            out.resize(s.size(), y.cols());
        }
        out.col(t) = s;
    }
    return out;
}

RegretCheck filter_regret_check(const FilterPlant& plant, Estimator& estimator, double gamma,
                                const Signal& w, const Signal& v) {
    const auto resp = plant_response(plant, w, v);
    estimator.reset();
    const Signal est = run_estimator(estimator, resp.y);
    const Signal oracle = smoothed_oracle(plant, resp.y);
    RegretCheck r;
    r.filter_error = (est - resp.s).squaredNorm();
    r.oracle_error = (oracle - resp.s).squaredNorm();
    r.regret = r.filter_error - r.oracle_error;
    r.bound = gamma * gamma * (signal::energy(w) + signal::pathlength(v));
    return r;
}

}  // namespace pathreg::filter
