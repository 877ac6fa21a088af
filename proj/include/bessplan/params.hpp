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

enum class RoundingMode { Ceil, Nearest, Floor };

/// Parameters of one microgrid's net-energy process
/// X(t) = sigma * W(t) + alpha * N * b_max.
struct SystemParams {
    double sigma = 1.0;   ///< volatility, kWh per sqrt(hour); must be nonzero
    double b_max = 1.0;   ///< capacity of one battery unit, kWh
    double delta = 0.02;  ///< tolerated probability of leaving the operating range, in (0,1)
    double t_f = 5.0;     ///< planning horizon, hours
    double alpha = 0.5;   ///< initial charge ratio in [0,1]

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct TwoMgParams {
    SystemParams base;        ///< per-microgrid volatility/capacity/tolerance/horizon
    double p_line_kw = 0.0;   ///< power-line flow limit between the microgrids
    double beta_kwh = 0.0;    ///< slack reserved for the difference process

    void validate() const;
};

/// Result of a capacity computation. total_capacity_kwh = n_units * b_max and
/// initial_energy_kwh = alpha * total_capacity_kwh.
struct SizingOutcome {
    double n_continuous = 0.0;
    long long n_units = 0;
    double total_capacity_kwh = 0.0;
    double initial_energy_kwh = 0.0;
    double alpha = 0.5;
    RoundingMode rounding = RoundingMode::Ceil;
};

SizingOutcome make_sizing_outcome(double n_continuous, double alpha, double b_max,
                                  RoundingMode mode);

const char* rounding_mode_name(RoundingMode mode);

}  // namespace bessplan
