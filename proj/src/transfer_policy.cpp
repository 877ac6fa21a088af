/*
   Copyright 2026 The bessplan authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "bessplan/transfer_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bessplan/normal.hpp"

namespace bessplan {

double bang_bang_transfer(const JointState& state, double p_line) {
    if (!std::isfinite(p_line) || p_line < 0.0)
        throw std::invalid_argument("bang_bang_transfer: p_line must be >= 0");
    if (state.x1 > state.x2) return p_line;
    if (state.x1 < state.x2) return -p_line;
    return 0.0;  // exact tie, including the machine-equality case
}

double kkt_transfer(const JointState& state, double p_line, double dt) {
    if (!std::isfinite(p_line) || p_line < 0.0)
        throw std::invalid_argument("kkt_transfer: p_line must be >= 0");
    if (!std::isfinite(dt) || dt <= 0.0)
        throw std::invalid_argument("kkt_transfer: dt must be > 0");
    if (!(state.n_b - p_line * dt > 0.0))
        throw std::invalid_argument("kkt_transfer: step violates n_b - p_line*dt > 0");

    const double d = state.x1 - state.x2;
    if (d == 0.0) return 0.0;
    const double band = 2.0 * p_line * dt;
    if (std::abs(d) > band) return d > 0.0 ? p_line : -p_line;
    return std::clamp(d / (2.0 * dt), -p_line, p_line);
}

namespace {

struct GTerms {
    double g1, g2, g3, g4;
    double sd;  // |sigma| sqrt(dt)
};

GTerms g_terms(const JointState& s, double p12, double dt, double sigma) {
    if (!std::isfinite(dt) || dt <= 0.0)
        throw std::invalid_argument("step_transition_prob: dt must be > 0");
    if (!std::isfinite(sigma) || sigma == 0.0)
        throw std::invalid_argument("step_transition_prob: sigma must be nonzero");
    GTerms g;
    g.sd = std::abs(sigma) * std::sqrt(dt);
    const double shift = p12 * dt;
    g.g1 = (s.n_b - s.x1 + shift) / g.sd;
    g.g2 = (-s.x1 + shift) / g.sd;
    g.g3 = (s.n_b - s.x2 - shift) / g.sd;
    g.g4 = (-s.x2 - shift) / g.sd;
    return g;
}

}  // namespace

double step_transition_prob(const JointState& state, double p12, double dt,
                            double sigma) {
    const GTerms g = g_terms(state, p12, dt, sigma);
    return (std_normal_cdf(g.g1) - std_normal_cdf(g.g2)) *
           (std_normal_cdf(g.g3) - std_normal_cdf(g.g4));
}

double step_transition_prob_grad(const JointState& state, double p12, double dt,
                                 double sigma) {
    const GTerms g = g_terms(state, p12, dt, sigma);
    const double c =
        std::sqrt(dt) / (std::abs(sigma) * std::sqrt(2.0 * std::numbers::pi));
    const double mass1 = std_normal_cdf(g.g1) - std_normal_cdf(g.g2);
    const double mass2 = std_normal_cdf(g.g3) - std_normal_cdf(g.g4);
    return c * ((std::exp(-0.5 * g.g1 * g.g1) - std::exp(-0.5 * g.g2 * g.g2)) * mass2 +
                mass1 * (std::exp(-0.5 * g.g4 * g.g4) - std::exp(-0.5 * g.g3 * g.g3)));
}

double kkt_stationarity_residual(const JointState& state, double p12, double dt,
                                 double sigma, double p_line) {
    if (!(std::abs(p12) <= p_line))
        throw std::invalid_argument("kkt_stationarity_residual: |p12| must be <= p_line");
    const double grad = step_transition_prob_grad(state, p12, dt, sigma);
    const double sat_tol = 1e-9 * std::max(1.0, p_line);
    if (p_line > 0.0 && p12 >= p_line - sat_tol)
        return std::max(0.0, -grad);  // upper-saturated: gradient must point outward
    if (p_line > 0.0 && p12 <= -p_line + sat_tol)
        return std::max(0.0, grad);
    return std::abs(grad);
}

TransferPolicy TransferPolicy::disconnected() { return {PolicyKind::Disconnected, 0.0, 0.0}; }

TransferPolicy TransferPolicy::bang_bang(double p_line_kw) {
    return {PolicyKind::BangBang, p_line_kw, 0.0};
}

TransferPolicy TransferPolicy::discrete_kkt(double p_line_kw, double dt_hours) {
    return {PolicyKind::DiscreteKkt, p_line_kw, dt_hours};
}

double TransferPolicy::transfer(double x1, double x2) const {
    switch (kind) {
        case PolicyKind::Disconnected:
            return 0.0;
        case PolicyKind::BangBang:
            if (x1 > x2) return p_line_kw;
            if (x1 < x2) return -p_line_kw;
            return 0.0;
        case PolicyKind::DiscreteKkt: {
            const double d = x1 - x2;
            if (d == 0.0) return 0.0;
            if (std::abs(d) > 2.0 * p_line_kw * dt_hours)
                return d > 0.0 ? p_line_kw : -p_line_kw;
            return std::clamp(d / (2.0 * dt_hours), -p_line_kw, p_line_kw);
        }
    }
    return 0.0;
}

void TransferPolicy::validate(double n_b) const {
    if (!std::isfinite(p_line_kw) || p_line_kw < 0.0)
        throw std::invalid_argument("policy: p_line_kw must be >= 0");
    if (kind == PolicyKind::Disconnected && p_line_kw != 0.0)
        throw std::invalid_argument("policy: disconnected requires p_line_kw == 0");
    if (kind != PolicyKind::Disconnected && p_line_kw == 0.0)
        throw std::invalid_argument("policy: a connected policy requires p_line_kw > 0");
    if (kind == PolicyKind::DiscreteKkt) {
        if (!std::isfinite(dt_hours) || dt_hours <= 0.0)
            throw std::invalid_argument("policy: discrete law requires dt_hours > 0");
        if (!(n_b - p_line_kw * dt_hours > 0.0))
            throw std::invalid_argument(
                "policy: step too coarse, requires n_b - p_line_kw*dt_hours > 0");
    }
}

const char* TransferPolicy::name() const {
    switch (kind) {
        case PolicyKind::Disconnected: return "disconnected";
        case PolicyKind::BangBang: return "bang-bang";
        case PolicyKind::DiscreteKkt: return "discrete-kkt";
    }
    return "disconnected";
}

}  // namespace bessplan
