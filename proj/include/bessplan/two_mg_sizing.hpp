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

#include <cstdint>

#include "bessplan/params.hpp"

namespace bessplan {

struct BetaCalibration {
    double beta_kwh = 0.0;  ///< smallest 0.1-kWh grid value meeting the target
    double p_hat = 0.0;     ///< estimated P[sup_t |X_d(t)| >= beta]
    double p_upper3 = 0.0;  ///< p_hat + 3 Wilson(99%) half-widths
    std::uint64_t n_paths = 0;
    std::uint32_t k_steps = 0;
};

/// Monte Carlo calibration of the difference-process slack: the smallest beta
/// on a 0.1 kWh grid with P[sup_t |X_d(t)| >= beta] + 3 Wilson half-widths
/// < delta/2. X_d is autonomous under the transfer law (restoring drift of
/// magnitude 2*p_line outside the law's linear band), so no capacity input is
/// needed; it is simulated on a fine internal grid. Requires p_line > 0 and
/// n_paths >= 10^4; throws when even the search cap fails the target.
BetaCalibration calibrate_beta(const TwoMgParams& params, std::uint64_t n_paths,
                               std::uint64_t seed);

/// Connected-pair planning size per microgrid: alpha = 1/2 and
/// n = sqrt(8 sigma_c^2 t_f ln(2/delta')) / (2 b_max) + beta / b_max
/// with sigma_c = sqrt(2)*sigma and delta' = delta/2.
SizingOutcome solve_two_mg(const TwoMgParams& params,
                           RoundingMode mode = RoundingMode::Ceil);

struct LimitingSizes {
    double n_disconnected = 0.0;  ///< 2*sqrt(2)*|sigma|*sqrt(ln(4/delta)*t_f)/b_max
    double n_infinite = 0.0;      ///< 2*|sigma|*sqrt(ln(2/delta)*t_f)/b_max
    double ratio = 0.0;           ///< sqrt(2 ln(4/delta) / ln(2/delta))
};

/// Per-microgrid battery counts in the zero- and infinite-line limits and
/// their ratio (independent of sigma, b_max, t_f).
LimitingSizes limiting_sizes(const TwoMgParams& params);

struct Proposition1Report {
    std::uint64_t n_paths = 0;
    std::uint32_t k_steps = 0;
    double beta_kwh = 0.0;
    // Event counts over the ensemble.
    std::uint64_t union_count = 0;    ///< any of the four per-MG barrier events
    std::uint64_t sum_upper_count = 0;  ///< max X_c >= 2 n_b - beta
    std::uint64_t sum_lower_count = 0;  ///< min X_c <= beta
    std::uint64_t diff_count = 0;       ///< max |X_d| >= beta
    std::uint64_t per_path_failures = 0;  ///< paths where the indicator inequality fails
    double union_rate = 0.0;
    double rhs_rate_sum = 0.0;
};

/// Simulates the coupled pair under the full-rate transfer law and checks, on
/// every path, the indicator inequality
///   1[union of the four barrier events] <= 1[sum-upper] + 1[sum-lower] + 1[diff],
/// which the sum/difference decomposition guarantees pathwise.
Proposition1Report proposition1_empirical_check(const TwoMgParams& params, double n,
                                                std::uint64_t n_paths,
                                                std::uint64_t seed,
                                                std::uint32_t k_steps = 600);

}  // namespace bessplan
