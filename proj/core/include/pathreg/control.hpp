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

#include <functional>
#include <optional>
#include <string>

#include "pathreg/factor.hpp"
#include "pathreg/numerics.hpp"
#include "pathreg/plant.hpp"

namespace pathreg::control {

enum class Mode { Causal, StrictlyCausal };

enum class FailedCondition { None, Stability, Inertia, Psd, StrictCausal, Factorization, Solver };

[[nodiscard]] std::string_view to_string(Mode mode) noexcept;
[[nodiscard]] std::string_view to_string(FailedCondition c) noexcept;

struct FeasibilityReport {
    bool feasible = false;
    FailedCondition failed = FailedCondition::None;
    double gamma = 0.0;
    bool stabilizing = false;
    bool inertia_match = false;
    bool positive_semidefinite = false;
    /// Strictly causal checks with the disturbance block in the concave position.
    bool strict_game_conditions = false;
    /// Strictly causal checks exactly as displayed (control and disturbance roles swapped).
    bool strict_literal_conditions = false;
    double residual_norm = 0.0;
    std::string diagnostics;
};

/// u = -Kx x - Keta η - Kw w,  η' = Aeta η + Beta w.
struct AffineGains {
    Matrix Kx;
    Matrix Keta;
    Matrix Kw;
    Matrix Aeta;
    Matrix Beta;
};

class CausalPolicy {
public:
    CausalPolicy(std::string name, Mode mode, AffineGains gains);

    /// Control for the current step. `w` is read only in causal mode.
    [[nodiscard]] Vector control(const Vector& x, const Vector& w) const;
    /// Advances the internal state with the disturbance realized this step.
    void advance(const Vector& w);
    /// control() followed by advance().
    Vector step(const Vector& x, const Vector& w);
    void reset();

    /// Replaces the gains and keeps the internal state when its size is unchanged.
    void set_gains(AffineGains gains);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] Mode mode() const noexcept { return mode_; }
    [[nodiscard]] const AffineGains& gains() const noexcept { return gains_; }
    [[nodiscard]] const Vector& internal_state() const noexcept { return eta_; }

private:
    std::string name_;
    Mode mode_;
    AffineGains gains_;
    Vector eta_;
};

template <typename T>
struct Synthesis {
    FeasibilityReport report;
    std::optional<T> value;

    [[nodiscard]] bool feasible() const noexcept { return value.has_value(); }
};

[[nodiscard]] Synthesis<CausalPolicy> hinf_synthesize(const ControlPlant& plant, double gamma,
                                                      Mode mode = Mode::Causal);

[[nodiscard]] CausalPolicy h2_synthesize(const ControlPlant& plant,
                                         Mode mode = Mode::StrictlyCausal);

/// Synthetic plant of the pathlength reduction, exposed for inspection.
struct PathlengthDesign {
    factor::ControlFactorization factorization;
    Matrix A_hat;
    Matrix B_hat_u;  // [B_u R^{-1/2}; 0]
    Matrix B_hat_w;
    Matrix L_hat;
    Matrix P_hat;
    Matrix H_hat;    // I + B̂_u* P̂ B̂_u
};

[[nodiscard]] Synthesis<CausalPolicy> pathlength_synthesize(const ControlPlant& plant,
                                                            double gamma,
                                                            Mode mode = Mode::Causal,
                                                            PathlengthDesign* design = nullptr);

/// Clairvoyant minimizer of Σ_{t=0}^{T} x*Qx + Σ_{t<T} u*Ru from x_0 = 0, with
/// backward time-varying gains u_t = -K_t x_t - k_t.
class OfflinePlan {
public:
    OfflinePlan(const ControlPlant& plant, const Signal& w);

    [[nodiscard]] Eigen::Index horizon() const noexcept { return k_.cols(); }
    [[nodiscard]] Vector control(Eigen::Index t, const Vector& x) const;

private:
    Eigen::Index n_ = 0;
    Matrix K_;  // m × (n·T), block t in columns [t·n, (t+1)·n)
    Matrix k_;  // m × T
};

struct OfflineResult {
    Signal controls;  // m × T
    Signal states;    // n × (T+1)
    double cost = 0.0;
};

[[nodiscard]] OfflineResult offline_optimal(const ControlPlant& plant, const Signal& w);

/// x*Qx summed over every state column plus u*Ru over every control column.
[[nodiscard]] double quadratic_cost(const ControlPlant& plant, const Signal& states,
                                    const Signal& controls);

struct BisectionOptions {
    double lo = 1e-3;
    double hi = 1e3;
    double relative_tolerance = 1e-3;
    double expansion = 10.0;
    double cap = 1e8;
};

struct BisectionResult {
    double gamma_star = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int evaluations = 0;
    bool non_monotone_warning = false;
};

using FeasibilityPredicate = std::function<bool(double)>;

/// Smallest feasible γ to relative tolerance; returns the feasible end of the bracket.
[[nodiscard]] BisectionResult bisect_gamma(const FeasibilityPredicate& feasible,
                                           const BisectionOptions& options = {});

[[nodiscard]] FeasibilityPredicate hinf_predicate(const ControlPlant& plant, Mode mode);
[[nodiscard]] FeasibilityPredicate pathlength_predicate(const ControlPlant& plant, Mode mode);

}  // namespace pathreg::control
