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

#include "bessplan/params.hpp"

#include <cmath>
#include <stdexcept>

namespace bessplan {

void SystemParams::validate() const {
    if (!std::isfinite(sigma) || sigma == 0.0)
        throw std::invalid_argument("sigma: must be finite and nonzero");
    if (!std::isfinite(b_max) || b_max <= 0.0)
        throw std::invalid_argument("b_max: must be finite and > 0");
    if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("delta: must lie strictly inside (0, 1)");
    if (!std::isfinite(t_f) || t_f <= 0.0)
        throw std::invalid_argument("t_f: must be finite and > 0");
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("alpha: must lie in [0, 1]");
}

void TwoMgParams::validate() const {
    base.validate();
    if (!std::isfinite(p_line_kw) || p_line_kw < 0.0)
        throw std::invalid_argument("p_line_kw: must be finite and >= 0");
    if (!std::isfinite(beta_kwh) || beta_kwh < 0.0)
        throw std::invalid_argument("beta_kwh: must be finite and >= 0");
}

SizingOutcome make_sizing_outcome(double n_continuous, double alpha, double b_max,
                                  RoundingMode mode) {
    double rounded = 0.0;
    switch (mode) {
        case RoundingMode::Ceil: rounded = std::ceil(n_continuous); break;
        case RoundingMode::Nearest: rounded = std::round(n_continuous); break;
        case RoundingMode::Floor: rounded = std::floor(n_continuous); break;
    }
    SizingOutcome out;
    out.n_continuous = n_continuous;
    out.n_units = static_cast<long long>(rounded);
    out.total_capacity_kwh = static_cast<double>(out.n_units) * b_max;
    out.initial_energy_kwh = alpha * out.total_capacity_kwh;
    out.alpha = alpha;
    out.rounding = mode;
    return out;
}

const char* rounding_mode_name(RoundingMode mode) {
    switch (mode) {
        case RoundingMode::Ceil: return "ceil";
        case RoundingMode::Nearest: return "nearest";
        case RoundingMode::Floor: return "floor";
    }
    return "ceil";
}

}  // namespace bessplan
