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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bessplan/transfer_policy.hpp"

namespace bessplan {

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Survival-probability value function on a uniform grid over the state box
/// [0, n_b] x [0, n_b], one layer per time step. Layer k_steps is the
/// terminal condition (identically 1); every value lies in [0, 1].
struct ValueGrid {
    double n_b = 0.0;
    int grid_points = 0;
    double dt = 0.0;
    int k_steps = 0;
    /// values[k][i * grid_points + j] = V_k at (x1 = axis(i), x2 = axis(j)).
    std::vector<std::vector<double>> values;
    /// p12[k] holds the transfer applied (or found optimal) at step k;
    /// empty layer for the terminal step.
    std::vector<std::vector<double>> p12;

    double axis(int i) const;
    double value(int k, int i, int j) const;
    double transfer_at(int k, int i, int j) const;

    /// One row per (k, node): k, x1_kwh, x2_kwh, value, p12_kw
    /// (p12 empty on terminal rows).
    void write_csv(const std::string& path) const;
};

/// Backward value recursion with per-node maximization of the one-step
/// integral over p12 in [-p_line, p_line]. The integral of the interpolated
/// next-step value against the Gaussian transition kernel is evaluated by
/// tensor Gauss-Legendre quadrature over the box (the indicator of the box
/// is exact: nothing outside contributes); the terminal layer is constant,
/// so the last backward step uses the closed-form interval masses instead.
/// Maximization is a coarse scan plus golden-section refinement to a 1e-10
/// bracket. Requires grid_points >= 3 and n_b - p_line*dt > 0.
ValueGrid dp_value_iteration(double n_b, double p_line, double sigma, double t_f,
                             int k_steps, int grid_points);

/// Evaluates the value of a fixed transfer law (x1, x2, k) -> p12 instead of
/// maximizing. Laws are clamped to the line limit before use.
using TransferLaw = std::function<double(double x1, double x2, int k)>;
ValueGrid dp_policy_value(double n_b, double p_line, double sigma, double t_f,
                          int k_steps, int grid_points, const TransferLaw& law);
ValueGrid dp_policy_value(double n_b, double p_line, double sigma, double t_f,
                          int k_steps, int grid_points,
                          const TransferPolicy& policy);

struct ConcavityReport {
    long long violations = 0;
    long long segments_checked = 0;
    double worst_margin = 0.0;  ///< largest midpoint deficit observed
};

/// Midpoint-concavity test of layer k along rows, columns and both diagonals:
/// flags V(mid) < (V(a)+V(b))/2 - tol over every grid-aligned segment whose
/// midpoint is a grid node.
ConcavityReport concavity_check(const ValueGrid& grid, int k, double tol = 1e-9);

}  // namespace bessplan
