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
#include <string>
#include <vector>

#include "bessplan/params.hpp"

namespace bessplan {

/// Fault injection for negative-control runs of the verification battery.
enum class FaultMode { None, FlipPolicySign };

struct VerifyOptions {
    bool quick = false;  ///< reduced path counts / grid sizes, looser documented tolerances
    FaultMode fault = FaultMode::None;
    std::uint64_t seed = 20260810;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  ///< observed vs required margin
};

/// Runs the bound/oracle battery: Chernoff dominance over a random grid, the
/// alpha sweep of the closed-form size, the value-recursion oracle against
/// the fixed transfer law, the pathwise sum/difference inclusion, and the
/// concavity check. Check failures are reported, not thrown.
std::vector<CheckResult> run_verification(const TwoMgParams& params,
                                          const VerifyOptions& options);

}  // namespace bessplan
