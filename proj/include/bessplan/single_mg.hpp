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

#include <span>
#include <vector>

#include "bessplan/params.hpp"

namespace bessplan {

/// Two-exponential upper bound on the sum of the barrier-hitting
/// probabilities:
///   f(n, alpha) = exp(-n^2 b^2 (1-alpha)^2 / (2 sigma^2 t_f))
///               + exp(-n^2 b^2 alpha^2     / (2 sigma^2 t_f)).
/// Dominates exact_violation_prob for every n >= 0 and alpha in [0,1].
double chernoff_bound_f(const SystemParams& params, double n);

/// Closed-form chance-constrained size: alpha = 1/2 and
/// n = sqrt(8 sigma^2 t_f ln(2/delta)) / b_max. params.alpha is ignored.
SizingOutcome solve_single_mg(const SystemParams& params,
                              RoundingMode mode = RoundingMode::Ceil);

/// Smallest n >= 0 with f(n, alpha) <= delta for params.alpha in (0,1),
/// found by bisection on the strictly decreasing bound (relative tolerance
/// 1e-10). alpha in {0,1} is rejected: there f > 1 >= delta is impossible.
double n_of_alpha(const SystemParams& params);

/// Sum of the two exact first-passage probabilities. This is the union-bound
/// level, not a true probability; it exceeds 1 when a barrier starts hit
/// (alpha in {0,1}).
double exact_violation_prob(const SystemParams& params, double n);

struct RateDiagnosticRow {
    double t_f = 0.0;
    double n_exact = 0.0;     ///< root of exact_violation_prob(., n) = delta
    double n_chernoff = 0.0;  ///< root of chernoff_bound_f(., n) = delta
};

struct RateDiagnostic {
    double c_tilde = 0.0;  ///< sqrt(8 ln(2/delta)) / b_max
    std::vector<RateDiagnosticRow> rows;
    /// Largest relative spread of n / (|sigma| sqrt(t_f)) across the horizon
    /// grid; both stay constant (sqrt(t_f) scaling) so these are ~1e-10.
    double max_rel_spread_exact = 0.0;
    double max_rel_spread_chernoff = 0.0;
};

RateDiagnostic rate_constant_diagnostic(const SystemParams& params,
                                        std::span<const double> t_f_grid);

}  // namespace bessplan
