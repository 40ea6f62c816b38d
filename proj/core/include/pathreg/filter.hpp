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

#include <memory>
#include <string>

#include "pathreg/control.hpp"
#include "pathreg/factor.hpp"
#include "pathreg/plant.hpp"
#include "pathreg/xfer.hpp"

namespace pathreg::filter {

/// Causal estimator: consumes y_t and returns ŝ_t.
class Estimator {
public:
    virtual ~Estimator() = default;
    virtual Vector update(const Vector& y) = 0;
    virtual void reset() = 0;
    [[nodiscard]] virtual std::string name() const = 0;
};

/// Steady-state Kalman filter in filtered form: ŝ_t = L x̂_{t|t}.
class KalmanFilter final : public Estimator {
public:
    explicit KalmanFilter(const FilterPlant& plant);

    Vector update(const Vector& y) override;
    void reset() override;
    [[nodiscard]] std::string name() const override { return "kalman"; }

    [[nodiscard]] const Matrix& predictor_gain() const noexcept { return K_; }
    [[nodiscard]] const Matrix& measurement_gain() const noexcept { return M_; }
    [[nodiscard]] const Matrix& covariance() const noexcept { return P_; }

private:
    Matrix A_, C_, L_, K_, M_, P_;
    Vector x_;  // x̂_{t|t-1}
};

[[nodiscard]] std::unique_ptr<Estimator> kalman_synthesize(const FilterPlant& plant);

/// Finite-horizon smoother: minimizes Σ‖w_t‖² + Σ‖y_t - Cx_t‖² with x_0 = 0,
/// returns ŝ_t = L x_t for the minimizing trajectory.
[[nodiscard]] Signal smoothed_oracle(const FilterPlant& plant, const Signal& y);

/// Best causal approximation of the strictly anticausal T(z) = H(z^{-1}I - F)^{-1}G.
struct NehariData {
    Matrix F, G, H;
    Matrix Z;        // Z = F*ZF + H*H
    Matrix Pi;       // Π = FΠF* + GG*
    Matrix Z_gamma;  // Z / γ²
    Matrix F_gamma;
    Matrix K_gamma;
    double gamma = 0.0;
    double gamma_star = 0.0;  // σ̄(ZΠ)
    xfer::StateSpace K_hat;   // HΠ(I + F_γ(zI - F_γ)^{-1})K_γ
    /// T realized in the variable z^{-1}: evaluate at 1/z.
    xfer::StateSpace T;

    [[nodiscard]] CMatrix evaluate_T(Complex z) const;
};

[[nodiscard]] NehariData nehari_solve(const Matrix& F, const Matrix& G, const Matrix& H,
                                      double gamma);

struct FilterFeasibility {
    bool feasible = false;
    double gamma = 0.0;
    double sigma_zpi = 0.0;  // σ̄(ZΠ); feasible iff <= 1
    std::string diagnostics;
};

/// Pathlength-optimal filter: ŝ = K y with
/// K = Δ3^{-1}[c̃ + L̂(zI - Â)^{-1}ÂW2G + (1 - z^{-1})K̂]Δ2^{-1}.
class PathlengthFilter final : public Estimator {
public:
    struct Data {
        factor::IoFactorization io;
        factor::CenterFactorization center;
        factor::QDecomposition q;
        NehariData nehari;
        Matrix c_tilde;      // L̂W2(I - A2*)^{-1}G
        Matrix Sigma2_inv_sqrt;
        Matrix Sigma3_inv_sqrt;
        Matrix pi_A;         // A1 - A1W1L*K3
        Matrix pi_B;         // A1W1L*Σ3^{-1/2}
        Matrix C;
        double gamma = 0.0;
    };

    explicit PathlengthFilter(Data data);

    Vector update(const Vector& y) override;
    void reset() override;
    [[nodiscard]] std::string name() const override { return "pathlength"; }

    [[nodiscard]] const Data& data() const noexcept { return d_; }
    /// Frequency response of the assembled filter; z must avoid the eigenvalues of Â.
    [[nodiscard]] CMatrix transfer(Complex z) const;

private:
    Data d_;
    Vector e_, xi1_, xi2_, pi_, alpha_prev_;
};

struct FilterSynthesis {
    FilterFeasibility report;
    std::unique_ptr<PathlengthFilter> filter;

    [[nodiscard]] bool feasible() const noexcept { return filter != nullptr; }
};

/// σ̄(ZΠ) from the γ-dependent pipeline; throws on solver failure.
[[nodiscard]] double sigma_zpi(const FilterPlant& plant, double gamma);

[[nodiscard]] FilterSynthesis pathlength_filter_synthesize(const FilterPlant& plant, double gamma);

[[nodiscard]] control::FeasibilityPredicate pathlength_filter_predicate(const FilterPlant& plant);

/// x_{t+1} = Ax_t + Bw_t from x_0 = 0; returns s_t = Lx_t and y_t = Cx_t + v_t.
struct PlantResponse {
    Signal s;
    Signal y;
};
[[nodiscard]] PlantResponse plant_response(const FilterPlant& plant, const Signal& w,
                                           const Signal& v);

/// Runs the estimator causally over y.
[[nodiscard]] Signal run_estimator(Estimator& estimator, const Signal& y);

struct RegretCheck {
    double regret = 0.0;
    double bound = 0.0;
    double filter_error = 0.0;
    double oracle_error = 0.0;
};

/// regret = Σ‖ŝ - s‖² - Σ‖ŝ⁰ - s‖², bound = γ²(energy(w) + pathlength(v)).
[[nodiscard]] RegretCheck filter_regret_check(const FilterPlant& plant, Estimator& estimator,
                                              double gamma, const Signal& w, const Signal& v);

}  // namespace pathreg::filter
