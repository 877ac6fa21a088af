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

#pragma once

namespace bessplan {

/// Joint battery state of the two microgrids; the operating box is
/// [0, n_b] x [0, n_b] with n_b the per-microgrid capacity in kWh.
struct JointState {
    double x1 = 0.0;
    double x2 = 0.0;
    double n_b = 0.0;
};

/// Full-rate transfer toward the lower-energy microgrid:
/// +p_line if x1 > x2, -p_line if x1 < x2, 0 on exact ties.
double bang_bang_transfer(const JointState& state, double p_line);

/// Discrete-time transfer law for step dt:
///   saturate at +-p_line when |x1 - x2| > 2*p_line*dt,
///   (x1 - x2) / (2*dt)   when 0 < |x1 - x2| <= 2*p_line*dt,
///   0                    when x1 == x2.
/// The interior branch moves both post-transfer means to the common midpoint.
/// Requires dt > 0 and n_b - p_line*dt > 0. Output is clamped to
/// [-p_line, p_line].
double kkt_transfer(const JointState& state, double p_line, double dt);

/// One-step probability that both components stay inside [0, n_b] when a
/// transfer p12 is applied over a step of length dt: the product of two
/// Gaussian interval masses with means x1 - p12*dt and x2 + p12*dt and
/// standard deviation |sigma|*sqrt(dt).
double step_transition_prob(const JointState& state, double p12, double dt,
                            double sigma);

/// Derivative of step_transition_prob with respect to p12.
double step_transition_prob_grad(const JointState& state, double p12, double dt,
                                 double sigma);

/// Stationarity residual of the constrained one-step maximization at p12.
/// Interior p12: |d/dp12| with both multipliers zero. Saturated p12: the
/// magnitude of any inward-pointing gradient (0 when the gradient points
/// outward, as complementary slackness requires).
double kkt_stationarity_residual(const JointState& state, double p12, double dt,
                                 double sigma, double p_line);

enum class PolicyKind { Disconnected, BangBang, DiscreteKkt };

/// A transfer policy as used by the simulator and the value recursion.
/// Every emitted transfer satisfies |p12| <= p_line_kw. Disconnected is
/// exactly the p_line_kw == 0 case.
struct TransferPolicy {
    PolicyKind kind = PolicyKind::Disconnected;
    double p_line_kw = 0.0;
    double dt_hours = 0.0;  ///< DiscreteKkt only

    static TransferPolicy disconnected();
    static TransferPolicy bang_bang(double p_line_kw);
    static TransferPolicy discrete_kkt(double p_line_kw, double dt_hours);

    /// The transfer applied at state (x1, x2). Total in (x1, x2): the laws
    /// depend only on x1 - x2, so post-violation (out-of-box) states during
    /// diagnostic continuation are fine.
    double transfer(double x1, double x2) const;

    /// Validates the kind/p_line pairing and, for DiscreteKkt, the step
    /// condition n_b - p_line*dt > 0.
    void validate(double n_b) const;

    const char* name() const;
};

}  // namespace bessplan
