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

#include "bessplan/params.hpp"

namespace bessplan {

/// Exact probability that X(t) = sigma*W(t) + alpha*n*b_max, started at its
/// initial level, reaches the upper barrier n*b_max within [0, t_f]:
/// 2 * (1 - Phi(n*b_max*(1-alpha) / (|sigma|*sqrt(t_f)))).
double first_passage_prob_upper(const SystemParams& params, double n);

/// Mirror image for the lower barrier at zero; argument
/// alpha*n*b_max / (|sigma|*sqrt(t_f)).
double first_passage_prob_lower(const SystemParams& params, double n);

}  // namespace bessplan
