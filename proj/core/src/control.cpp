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

#include "pathreg/control.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace pathreg::control {

using detail::require;

std::string_view to_string(Mode mode) noexcept {
    return mode == Mode::Causal ? "causal" : "strictly_causal";
}

std::string_view to_string(FailedCondition c) noexcept {
    switch (c) {
        case FailedCondition::None: return "none";
        case FailedCondition::Stability: return "stability";
        case FailedCondition::Inertia: return "inertia";
        case FailedCondition::Psd: return "psd";
        case FailedCondition::StrictCausal: return "strict-causal";
        case FailedCondition::Factorization: return "factorization";
        case FailedCondition::Solver: return "solver";
    }
    return "unknown";
}

namespace {

bool positive_definite(const Matrix& M) {
    if (M.rows() == 0) {
        return true;
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(numerics::symmetrize(M), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, M.norm());
}

Matrix block_diag(const Matrix& X, const Matrix& Y) {
    Matrix out = Matrix::Zero(X.rows() + Y.rows(), X.cols() + Y.cols());
    out.topLeftCorner(X.rows(), X.cols()) = X;
    out.bottomRightCorner(Y.rows(), Y.cols()) = Y;
    return out;
}

// Disturbance chooses after the control: concave in w, then convex in u.
bool strict_game(const Matrix& P, const Matrix& Bu, const Matrix& Bw, const Matrix& Ru,
                 double level2) {
    const auto p = Bw.cols();
    const Matrix Ip = Matrix::Identity(p, p);
    if (!positive_definite(level2 * Ip - Bw.transpose() * P * Bw)) {
        return false;
    }
    const Matrix inner = -level2 * Ip + Bw.transpose() * P * Bw;
    const Matrix I = Matrix::Identity(P.rows(), P.rows());
    const Matrix Pt = P * (I - Bw * inner.lu().solve(Bw.transpose() * P));
    return positive_definite(Ru + Bu.transpose() * Pt * Bu);
}

bool strict_literal(const Matrix& P, const Matrix& Bu, const Matrix& Bw, double level2) {
    const auto m = Bu.cols();
    const Matrix Im = Matrix::Identity(m, m);
    if (!positive_definite(level2 * Im - Bu.transpose() * P * Bu)) {
        return false;
    }
    const Matrix inner = -level2 * Im + Bu.transpose() * P * Bu;
    const Matrix I = Matrix::Identity(P.rows(), P.rows());
    const Matrix Pt = P * (I - Bu * inner.lu().solve(Bu.transpose() * P));
    return positive_definite(Matrix::Identity(Bw.cols(), Bw.cols()) + Bw.transpose() * Pt * Bw);
}

// Value after the disturbance best-responds to a committed control.
Matrix strict_value(const Matrix& P, const Matrix& Bw, double level2) {
    const auto p = Bw.cols();
    const Matrix inner = level2 * Matrix::Identity(p, p) - Bw.transpose() * P * Bw;
    return numerics::symmetrize(P + P * Bw * inner.lu().solve(Bw.transpose() * P));
}

constexpr double kMarginalTolerance = 1e-6;

void classify(FeasibilityReport& r, Mode mode) {
    if (!r.stabilizing) {
        r.failed = FailedCondition::Stability;
    } else if (mode == Mode::Causal && !r.inertia_match) {
        r.failed = FailedCondition::Inertia;
    } else if (!r.positive_semidefinite) {
        r.failed = FailedCondition::Psd;
    } else if (mode == Mode::StrictlyCausal && !r.strict_game_conditions) {
        r.failed = FailedCondition::StrictCausal;
    } else {
        r.failed = FailedCondition::None;
    }
    r.feasible = r.failed == FailedCondition::None;
}

void fill_flags(FeasibilityReport& r, const numerics::IndefiniteRiccatiResult& res) {
    r.stabilizing = res.stabilizing;
    r.inertia_match = res.inertia_match;
    r.positive_semidefinite = res.positive_semidefinite;
    r.residual_norm = res.solution.residual_norm;
}

std::string describe(const FeasibilityReport& r) {
    return fmt::format(
        "gamma={:.6g} stabilizing={} inertia_match={} psd={} strict_game={} strict_literal={} "
        "residual={:.3e}",
        r.gamma, r.stabilizing, r.inertia_match, r.positive_semidefinite,
        r.strict_game_conditions, r.strict_literal_conditions, r.residual_norm);
}

}  // namespace

CausalPolicy::CausalPolicy(std::string name, Mode mode, AffineGains gains)
    : name_(std::move(name)), mode_(mode), gains_(std::move(gains)) {
    require(gains_.Aeta.rows() == gains_.Aeta.cols() && gains_.Beta.rows() == gains_.Aeta.rows() &&
                gains_.Keta.cols() == gains_.Aeta.rows() &&
                gains_.Kx.rows() == gains_.Kw.rows() && gains_.Keta.rows() == gains_.Kx.rows() &&
                gains_.Kw.cols() == gains_.Beta.cols(),
            ErrorKind::DimensionMismatch, "inconsistent policy gains");
    eta_ = Vector::Zero(gains_.Aeta.rows());
}

Vector CausalPolicy::control(const Vector& x, const Vector& w) const {
    Vector u = -gains_.Kx * x - gains_.Keta * eta_;
    if (mode_ == Mode::Causal) {
        u -= gains_.Kw * w;
    }
    return u;
}

void CausalPolicy::advance(const Vector& w) {
    if (eta_.size() > 0) {
        eta_ = gains_.Aeta * eta_ + gains_.Beta * w;
    }
}

Vector CausalPolicy::step(const Vector& x, const Vector& w) {
    Vector u = control(x, w);
    advance(w);
    return u;
}

void CausalPolicy::reset() { eta_.setZero(); }

void CausalPolicy::set_gains(AffineGains gains) {
    const auto old = eta_.size();
    gains_ = std::move(gains);
    if (gains_.Aeta.rows() != old) {
        eta_ = Vector::Zero(gains_.Aeta.rows());
    }
}

Synthesis<CausalPolicy> hinf_synthesize(const ControlPlant& plant, double gamma, Mode mode) {
    require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    const auto p = plant.disturbances();
    const auto m = plant.controls();
    Synthesis<CausalPolicy> out;
    out.report.gamma = gamma;
    const double g2 = gamma * gamma;
    const Matrix Rt = block_diag(plant.R, -g2 * Matrix::Identity(p, p));

    numerics::IndefiniteRiccatiResult res;
    try {
        res = numerics::solve_indefinite_dare(plant.A, plant.B_u, plant.B_w, plant.Q, Rt);
    } catch (const Error& e) {
        out.report.failed = FailedCondition::Solver;
        out.report.diagnostics = e.what();
        return out;
    }
    fill_flags(out.report, res);
    const Matrix& P = res.solution.P;
    out.report.strict_game_conditions = strict_game(P, plant.B_u, plant.B_w, plant.R, g2);
    out.report.strict_literal_conditions = strict_literal(P, plant.B_u, plant.B_w, g2);
    classify(out.report, mode);
    out.report.diagnostics = describe(out.report);
    if (!out.report.feasible) {
        return out;
    }
    const Matrix Pu = mode == Mode::Causal ? P : strict_value(P, plant.B_w, g2);
    const Matrix H = plant.R + plant.B_u.transpose() * Pu * plant.B_u;
    const auto Hlu = H.lu();
    AffineGains g;
    g.Kx = Hlu.solve(plant.B_u.transpose() * Pu * plant.A);
    g.Kw = mode == Mode::Causal ? Matrix(Hlu.solve(plant.B_u.transpose() * P * plant.B_w))
                                : Matrix::Zero(m, p);
    g.Keta = Matrix::Zero(m, 0);
    g.Aeta = Matrix::Zero(0, 0);
    g.Beta = Matrix::Zero(0, p);
    out.value.emplace(fmt::format("hinf({:.4g})", gamma), mode, std::move(g));
    return out;
}

CausalPolicy h2_synthesize(const ControlPlant& plant, Mode mode) {
    const auto p = plant.disturbances();
    const auto m = plant.controls();
    const auto sol = numerics::solve_dare(plant.A, plant.B_u, plant.Q, plant.R);
    const auto Hlu = sol.innovation.lu();
    AffineGains g;
    g.Kx = sol.gain;
    g.Kw = mode == Mode::Causal ? Matrix(Hlu.solve(plant.B_u.transpose() * sol.P * plant.B_w))
                                : Matrix::Zero(m, p);
    g.Keta = Matrix::Zero(m, 0);
    g.Aeta = Matrix::Zero(0, 0);
    g.Beta = Matrix::Zero(0, p);
    return {"h2", mode, std::move(g)};
}

Synthesis<CausalPolicy> pathlength_synthesize(const ControlPlant& plant, double gamma, Mode mode,
                                              PathlengthDesign* design) {
    require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    Synthesis<CausalPolicy> out;
    out.report.gamma = gamma;
    const auto n = plant.states();
    const auto m = plant.controls();
    const auto p = plant.disturbances();

    factor::ControlFactorization f;
    try {
        f = factor::factor_control(plant, gamma);
    } catch (const Error& e) {
        out.report.failed = FailedCondition::Factorization;
        out.report.diagnostics = e.what();
        return out;
    }
    if (!f.inverse_stable) {
        out.report.failed = FailedCondition::Factorization;
        out.report.diagnostics = "factor inverse is not stable";
        return out;
    }
    const auto nv = f.A_tilde.rows();
    const Matrix Sih = numerics::inv_sqrt_pd(f.Sigma2c);

    PathlengthDesign d;
    d.A_hat = Matrix::Zero(n + nv, n + nv);
    d.A_hat.topLeftCorner(n, n) = plant.A;
    d.A_hat.topRightCorner(n, nv) = -plant.B_w * f.K2c;
    d.A_hat.bottomRightCorner(nv, nv) = f.A_tilde - f.B_tilde_w * f.K2c;
    Matrix Bcat(n + nv, p);
    Bcat << plant.B_w, f.B_tilde_w;
    d.B_hat_w = Bcat * Sih;
    d.B_hat_u = Matrix::Zero(n + nv, m);
    d.B_hat_u.topRows(n) = plant.B_u * plant.R_inv_sqrt;
    d.L_hat = Matrix::Zero(plant.L.rows(), n + nv);
    d.L_hat.leftCols(n) = plant.L;

    const Matrix Rt = block_diag(Matrix::Identity(m, m), -Matrix::Identity(p, p));
    numerics::IndefiniteRiccatiResult res;
    try {
        res = numerics::solve_indefinite_dare(d.A_hat, d.B_hat_u, d.B_hat_w,
                                              d.L_hat.transpose() * d.L_hat, Rt);
    } catch (const Error& e) {
        out.report.failed = FailedCondition::Solver;
        out.report.diagnostics = e.what();
        return out;
    }
    fill_flags(out.report, res);
    d.P_hat = res.solution.P;
    out.report.strict_game_conditions =
        strict_game(d.P_hat, d.B_hat_u, d.B_hat_w, Matrix::Identity(m, m), 1.0);
    out.report.strict_literal_conditions =
        strict_literal(d.P_hat, d.B_hat_u, d.B_hat_w, gamma * gamma);

    d.H_hat = Matrix::Identity(m, m) + d.B_hat_u.transpose() * d.P_hat * d.B_hat_u;
    d.factorization = std::move(f);
    const Matrix K2 = d.factorization.K2c;

    AffineGains g;
    if (mode == Mode::Causal) {
        const Matrix Gv =
            plant.R_inv_sqrt * d.H_hat.lu().solve(d.B_hat_u.transpose() * d.P_hat);
        g.Kx = Gv * d.A_hat.leftCols(n);
        g.Keta = Gv * (d.A_hat.rightCols(nv) + Bcat * K2);
        g.Kw = Gv * Bcat;
    } else {
        const Matrix Pt = strict_value(d.P_hat, d.B_hat_w, 1.0);
        const Matrix Ht = Matrix::Identity(m, m) + d.B_hat_u.transpose() * Pt * d.B_hat_u;
        const Matrix Gv = plant.R_inv_sqrt * Ht.lu().solve(d.B_hat_u.transpose() * Pt);
        g.Kx = Gv * d.A_hat.leftCols(n);
        g.Keta = Gv * d.A_hat.rightCols(nv);
        g.Kw = Matrix::Zero(m, p);
    }
    g.Aeta = d.factorization.A_tilde;
    g.Beta = d.factorization.B_tilde_w;

    // The game loop keeps one mode on the unit circle (a held disturbance level
    // costs no pathlength), so only the loop closed by u must be strictly stable.
    const double game_radius = res.solution.closed_loop_radius;
    const double u_radius = numerics::spectral_radius(plant.A - plant.B_u * g.Kx);
    out.report.stabilizing = game_radius < 1.0 + kMarginalTolerance && u_radius < 1.0 &&
                             numerics::spectral_radius(g.Aeta) < 1.0;
    classify(out.report, mode);
    out.report.diagnostics =
        fmt::format("{} game_radius={:.9f} u_radius={:.6f}", describe(out.report), game_radius,
                    u_radius);
    if (design != nullptr) {
        *design = d;
    }
    if (out.report.feasible) {
        out.value.emplace(fmt::format("pathlength({:.4g})", gamma), mode, std::move(g));
    }
    return out;
}

OfflinePlan::OfflinePlan(const ControlPlant& plant, const Signal& w) : n_(plant.states()) {
    detail::require_rows(w, plant.disturbances(), "w");
    const auto T = w.cols();
    const auto m = plant.controls();
    const Matrix& A = plant.A;
    const Matrix& B = plant.B_u;
    K_.resize(m, n_ * T);
    k_.resize(m, T);
    Matrix P = plant.Q;
    Vector q = Vector::Zero(n_);
    for (Eigen::Index t = T - 1; t >= 0; --t) {
        const Vector d = plant.B_w * w.col(t);
        const auto Hlu = (plant.R + B.transpose() * P * B).ldlt();
        const Matrix K = Hlu.solve(B.transpose() * P * A);
        const Vector a = P * d + q;
        K_.middleCols(t * n_, n_) = K;
        k_.col(t) = Hlu.solve(B.transpose() * a);
        q = (A - B * K).transpose() * a;
        P = numerics::symmetrize(plant.Q + A.transpose() * P * A - A.transpose() * P * B * K);
    }
}

Vector OfflinePlan::control(Eigen::Index t, const Vector& x) const {
    require(t >= 0 && t < horizon(), ErrorKind::InvalidArgument, "time index outside horizon");
    return -K_.middleCols(t * n_, n_) * x - k_.col(t);
}

double quadratic_cost(const ControlPlant& plant, const Signal& states, const Signal& controls) {
    const double xs = (states.transpose() * plant.Q * states).trace();
    const double us = (controls.transpose() * plant.R * controls).trace();
    return xs + us;
}

OfflineResult offline_optimal(const ControlPlant& plant, const Signal& w) {
    const OfflinePlan plan(plant, w);
    const auto T = w.cols();
    OfflineResult out;
    out.states = Signal::Zero(plant.states(), T + 1);
    out.controls = Signal::Zero(plant.controls(), T);
    for (Eigen::Index t = 0; t < T; ++t) {
        const Vector x = out.states.col(t);
        out.controls.col(t) = plan.control(t, x);
        out.states.col(t + 1) = plant.A * x + plant.B_u * out.controls.col(t) + plant.B_w * w.col(t);
    }
    out.cost = 0.0;
    for (Eigen::Index t = 0; t <= T; ++t) {
        out.cost += out.states.col(t).dot(plant.Q * out.states.col(t));
    }
    for (Eigen::Index t = 0; t < T; ++t) {
        out.cost += out.controls.col(t).dot(plant.R * out.controls.col(t));
    }
    return out;
}

BisectionResult bisect_gamma(const FeasibilityPredicate& feasible, const BisectionOptions& opt) {
    require(opt.lo > 0.0 && opt.hi > opt.lo, ErrorKind::InvalidArgument, "invalid bracket");
    BisectionResult r;
    double lo = opt.lo;
    double hi = opt.hi;
    auto eval = [&](double g) {
        ++r.evaluations;
        return feasible(g);
    };
    if (eval(lo)) {
        r.gamma_star = r.lo = r.hi = lo;
        return r;
    }
    while (!eval(hi)) {
        lo = hi;
        hi *= opt.expansion;
        if (hi > opt.cap) {
            detail::fail(ErrorKind::NoFeasiblePoint,
                         fmt::format("no feasible gamma below {:.3g}", opt.cap));
        }
    }
    while (hi / lo - 1.0 > opt.relative_tolerance) {
        const double mid = std::sqrt(lo * hi);
        if (eval(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Feasibility just above the returned point is expected for a monotone predicate.
    r.non_monotone_warning = !eval(hi * (1.0 + 2.0 * opt.relative_tolerance));
    r.gamma_star = hi;
    r.lo = lo;
    r.hi = hi;
    return r;
}

FeasibilityPredicate hinf_predicate(const ControlPlant& plant, Mode mode) {
    return [plant, mode](double g) {
        try {
            return hinf_synthesize(plant, g, mode).feasible();
        } catch (const Error&) {
            return false;
        }
    };
}

FeasibilityPredicate pathlength_predicate(const ControlPlant& plant, Mode mode) {
    return [plant, mode](double g) {
        try {
            return pathlength_synthesize(plant, g, mode).feasible();
        } catch (const Error&) {
            return false;
        }
    };
}

}  // namespace pathreg::control
