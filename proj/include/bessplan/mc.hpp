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
#include <span>
#include <string>
#include <vector>

#include "bessplan/params.hpp"
#include "bessplan/transfer_policy.hpp"

namespace bessplan {

struct SimConfig {
    std::uint64_t n_paths = 1000;
    std::uint32_t k_steps = 600;  ///< dt = t_f / k_steps
    std::uint64_t master_seed = 1;
    bool record_traces = false;
    bool bridge_correction = false;
    unsigned n_threads = 0;  ///< 0 = auto; BESS_PLAN_THREADS caps either way

    void validate() const;
};

enum class Barrier { Upper1, Lower1, Upper2, Lower2 };
const char* barrier_name(Barrier b);

struct FirstViolation {
    std::uint64_t path = 0;
    double t_hours = 0.0;
    Barrier barrier = Barrier::Upper1;
};

struct Confidence {
    double lo = 0.0;
    double hi = 0.0;
    double half_width() const { return 0.5 * (hi - lo); }
};

inline constexpr double kWilson99Z = 2.5758293035489008;

/// Wilson score interval for a binomial proportion; contains successes/n.
Confidence wilson_interval(std::uint64_t successes, std::uint64_t n,
                           double z = kWilson99Z);

struct EnsembleResult {
    std::uint64_t n_paths = 0;
    std::uint64_t violations = 0;
    double violation_rate = 0.0;
    Confidence wilson99;
    std::vector<FirstViolation> first_violations;  ///< one entry per violating path

    // Trace storage, populated when record_traces is set. Row-major:
    // trace_x1[path * (k_steps+1) + k]. trace_x2/trace_p12 only for the
    // two-microgrid simulation; p12 has k_steps entries per path.
    bool has_traces = false;
    bool two_mg = false;
    std::uint32_t k_steps = 0;
    double dt = 0.0;
    std::vector<double> trace_x1;
    std::vector<double> trace_x2;
    std::vector<double> trace_p12;
};

/// Exact-path single-microgrid ensemble: X_k = alpha*n*b_max + sigma*W(t_k);
/// a path violates iff some grid value leaves the open interval
/// (0, n*b_max), the initial state included. Paths continue unclamped after
/// a violation so first-violation timing stays meaningful.
EnsembleResult simulate_single(const SystemParams& params, double n,
                               const SimConfig& cfg);

/// Euler ensemble of the coupled pair
///   X1 <- X1 - p12*dt + sigma*dW1,  X2 <- X2 + p12*dt + sigma*dW2,
/// with p12 from the policy at the current state. Violation = either
/// microgrid leaving (0, n*b_max) at a grid time. Every applied transfer is
/// audited against the line limit.
EnsembleResult simulate_two_mg(const TwoMgParams& params, double n,
                               const TransferPolicy& policy, const SimConfig& cfg);

/// Key/value lines echoed as "# key = value" into CSV headers.
using CsvHeader = std::vector<std::pair<std::string, std::string>>;

void write_summary_csv(const EnsembleResult& result, const std::string& path,
                       const std::string& experiment, const CsvHeader& header = {});
void write_traces_csv(const EnsembleResult& result, const std::string& path,
                      const CsvHeader& header = {});

struct SweepRow {
    double p_line_kw = 0.0;
    double capacity_kwh = 0.0;  ///< averaged over replicates
    double rate = 0.0;          ///< confirmation-run rate at that capacity
    Confidence wilson99;
    bool ok = true;             ///< false when no capacity up to the cap passed
};

/// For each line capacity, bisects (0.25 kWh resolution, seeds shared across
/// capacities so the per-path violation indicator is monotone) the smallest
/// per-microgrid capacity whose violation rate plus two Wilson half-widths is
/// <= delta, then averages over seed replicates.
std::vector<SweepRow> capacity_sweep(const TwoMgParams& params,
                                     std::span<const double> p_line_grid_kw,
                                     const SimConfig& cfg, unsigned replicates = 3);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                     const CsvHeader& header = {});

}  // namespace bessplan
