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

#include "bessplan/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bessplan/parallel.hpp"
#include "bessplan/random.hpp"
#include "bessplan/two_mg_sizing.hpp"

namespace bessplan {

void SimConfig::validate() const {
    if (n_paths == 0) throw std::invalid_argument("n_paths: must be >= 1");
    if (k_steps == 0) throw std::invalid_argument("k_steps: must be >= 1");
}

const char* barrier_name(Barrier b) {
    switch (b) {
        case Barrier::Upper1: return "upper1";
        case Barrier::Lower1: return "lower1";
        case Barrier::Upper2: return "upper2";
        case Barrier::Lower2: return "lower2";
    }
    return "upper1";
}

Confidence wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double hw =
        (z / denom) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, center - hw), std::min(1.0, center + hw)};
}

namespace {

struct PathOutcome {
    bool violated = false;
    Barrier barrier = Barrier::Upper1;
    double t_hours = 0.0;
};

double bridge_cross_prob(double a, double b, double sigma2_dt) {
    // Probability that a Brownian bridge between endpoints at distances a and
    // b from a barrier (both positive) touched the barrier inside the step.
    return std::exp(-2.0 * a * b / sigma2_dt);
}

EnsembleResult assemble(std::uint64_t n_paths, const std::vector<PathOutcome>& outcomes) {
    EnsembleResult r;
    r.n_paths = n_paths;
    for (std::uint64_t p = 0; p < n_paths; ++p) {
        if (outcomes[p].violated) {
            ++r.violations;
            r.first_violations.push_back({p, outcomes[p].t_hours, outcomes[p].barrier});
        }
    }
    r.violation_rate = static_cast<double>(r.violations) / static_cast<double>(n_paths);
    r.wilson99 = wilson_interval(r.violations, n_paths);
    return r;
}

}  // namespace

EnsembleResult simulate_single(const SystemParams& params, double n,
                               const SimConfig& cfg) {
    params.validate();
    cfg.validate();
    if (!(n > 0.0)) throw std::invalid_argument("simulate_single: n must be > 0");

    const double nb = n * params.b_max;
    const double x0 = params.alpha * nb;
    const double dt = params.t_f / cfg.k_steps;
    const double sdt = params.sigma * std::sqrt(dt);
    const double sigma2_dt = params.sigma * params.sigma * dt;
    const std::uint32_t K = cfg.k_steps;

    std::vector<PathOutcome> outcomes(cfg.n_paths);
    std::vector<double> traces;
    if (cfg.record_traces)
        traces.assign(cfg.n_paths * static_cast<std::size_t>(K + 1), 0.0);

    parallel_for(cfg.n_paths, effective_threads(cfg.n_threads),
                 [&](std::uint64_t pb, std::uint64_t pe) {
        for (std::uint64_t p = pb; p < pe; ++p) {
            GaussianStream noise(cfg.master_seed, p, kStreamMg1);
            GaussianStream bridge(cfg.master_seed, p, kStreamBridge);
            PathOutcome& out = outcomes[p];
            double x = x0;
            if (cfg.record_traces) traces[p * (K + 1)] = x;
            if (x >= nb) {
                out = {true, Barrier::Upper1, 0.0};
            } else if (x <= 0.0) {
                out = {true, Barrier::Lower1, 0.0};
            }
            for (std::uint32_t k = 1; k <= K; ++k) {
                const double xp = x;
                x += sdt * noise.next_normal();
                if (cfg.record_traces) traces[p * (K + 1) + k] = x;
                if (out.violated) continue;
                const double t = dt * k;
                if (x >= nb) {
                    out = {true, Barrier::Upper1, t};
                } else if (x <= 0.0) {
                    out = {true, Barrier::Lower1, t};
                } else if (cfg.bridge_correction) {
                    const double u_up = bridge.next_uniform();
                    const double u_lo = bridge.next_uniform();
                    if (u_up < bridge_cross_prob(nb - xp, nb - x, sigma2_dt))
                        out = {true, Barrier::Upper1, t};
                    else if (u_lo < bridge_cross_prob(xp, x, sigma2_dt))
                        out = {true, Barrier::Lower1, t};
                }
            }
        }
    });

    EnsembleResult r = assemble(cfg.n_paths, outcomes);
    r.k_steps = K;
    r.dt = dt;
    if (cfg.record_traces) {
        r.has_traces = true;
        r.two_mg = false;
        r.trace_x1 = std::move(traces);
    }
    return r;
}

EnsembleResult simulate_two_mg(const TwoMgParams& params, double n,
                               const TransferPolicy& policy, const SimConfig& cfg) {
    params.validate();
    cfg.validate();
    if (!(n > 0.0)) throw std::invalid_argument("simulate_two_mg: n must be > 0");

    const SystemParams& base = params.base;
    const double nb = n * base.b_max;
    const double dt = base.t_f / cfg.k_steps;
    policy.validate(nb);
    if (policy.kind != PolicyKind::Disconnected && !(nb - policy.p_line_kw * dt > 0.0))
        throw std::invalid_argument(
            "k_steps: grid violates n_b - p_line*dt > 0 under an active policy");

    const double x0 = base.alpha * nb;
    const double sdt = base.sigma * std::sqrt(dt);
    const double sigma2_dt = base.sigma * base.sigma * dt;
    const double p_cap = policy.p_line_kw + 1e-9 * std::max(1.0, policy.p_line_kw);
    const std::uint32_t K = cfg.k_steps;

    std::vector<PathOutcome> outcomes(cfg.n_paths);
    std::vector<double> tr_x1, tr_x2, tr_p;
    if (cfg.record_traces) {
        tr_x1.assign(cfg.n_paths * static_cast<std::size_t>(K + 1), 0.0);
        tr_x2.assign(cfg.n_paths * static_cast<std::size_t>(K + 1), 0.0);
        tr_p.assign(cfg.n_paths * static_cast<std::size_t>(K), 0.0);
    }

    parallel_for(cfg.n_paths, effective_threads(cfg.n_threads),
                 [&](std::uint64_t pb, std::uint64_t pe) {
        for (std::uint64_t p = pb; p < pe; ++p) {
            GaussianStream noise1(cfg.master_seed, p, kStreamMg1);
            GaussianStream noise2(cfg.master_seed, p, kStreamMg2);
            GaussianStream bridge(cfg.master_seed, p, kStreamBridge);
            PathOutcome& out = outcomes[p];
            double x1 = x0, x2 = x0;
            if (cfg.record_traces) {
                tr_x1[p * (K + 1)] = x1;
                tr_x2[p * (K + 1)] = x2;
            }
            // Simultaneous hits resolve in this fixed order.
            auto grid_check = [&](double t) {
                if (x1 >= nb)
                    out = {true, Barrier::Upper1, t};
                else if (x1 <= 0.0)
                    out = {true, Barrier::Lower1, t};
                else if (x2 >= nb)
                    out = {true, Barrier::Upper2, t};
                else if (x2 <= 0.0)
                    out = {true, Barrier::Lower2, t};
            };
            grid_check(0.0);
            for (std::uint32_t k = 1; k <= K; ++k) {
                const double p12 = policy.transfer(x1, x2);
                if (std::abs(p12) > p_cap)
                    throw std::logic_error("simulate_two_mg: policy exceeded the line limit");
                const double x1p = x1, x2p = x2;
                x1 += -p12 * dt + sdt * noise1.next_normal();
                x2 += p12 * dt + sdt * noise2.next_normal();
                if (cfg.record_traces) {
                    tr_p[p * K + (k - 1)] = p12;
                    tr_x1[p * (K + 1) + k] = x1;
                    tr_x2[p * (K + 1) + k] = x2;
                }
                if (out.violated) continue;
                const double t = dt * k;
                grid_check(t);
                if (!out.violated && cfg.bridge_correction) {
                    const double u1u = bridge.next_uniform();
                    const double u1l = bridge.next_uniform();
                    const double u2u = bridge.next_uniform();
                    const double u2l = bridge.next_uniform();
                    if (u1u < bridge_cross_prob(nb - x1p, nb - x1, sigma2_dt))
                        out = {true, Barrier::Upper1, t};
                    else if (u1l < bridge_cross_prob(x1p, x1, sigma2_dt))
                        out = {true, Barrier::Lower1, t};
                    else if (u2u < bridge_cross_prob(nb - x2p, nb - x2, sigma2_dt))
                        out = {true, Barrier::Upper2, t};
                    else if (u2l < bridge_cross_prob(x2p, x2, sigma2_dt))
                        out = {true, Barrier::Lower2, t};
                }
            }
        }
    });

    EnsembleResult r = assemble(cfg.n_paths, outcomes);
    r.k_steps = K;
    r.dt = dt;
    if (cfg.record_traces) {
        r.has_traces = true;
        r.two_mg = true;
        r.trace_x1 = std::move(tr_x1);
        r.trace_x2 = std::move(tr_x2);
        r.trace_p12 = std::move(tr_p);
    }
    return r;
}

namespace {

void write_header(std::ofstream& out, const CsvHeader& header) {
    for (const auto& [key, value] : header) out << "# " << key << " = " << value << "\n";
}

}  // namespace

void write_summary_csv(const EnsembleResult& result, const std::string& path,
                       const std::string& experiment, const CsvHeader& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(out, header);
    out << "experiment,n_paths,violations,rate,ci_lo,ci_hi\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%s,%llu,%llu,%.12g,%.12g,%.12g\n",
                  experiment.c_str(), static_cast<unsigned long long>(result.n_paths),
                  static_cast<unsigned long long>(result.violations),
                  result.violation_rate, result.wilson99.lo, result.wilson99.hi);
    out << line;
}

void write_traces_csv(const EnsembleResult& result, const std::string& path,
                      const CsvHeader& header) {
    if (!result.has_traces)
        throw std::invalid_argument("write_traces_csv: result carries no traces");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(out, header);
    out << "path,t_hours,x1_kwh,x2_kwh,p12_kw\n";
    const std::uint32_t K = result.k_steps;
    char line[256];
    for (std::uint64_t p = 0; p < result.n_paths; ++p) {
        for (std::uint32_t k = 0; k <= K; ++k) {
            const double t = result.dt * k;
            const double x1 = result.trace_x1[p * (K + 1) + k];
            if (!result.two_mg) {
                std::snprintf(line, sizeof(line), "%llu,%.9g,%.12g,,\n",
                              static_cast<unsigned long long>(p), t, x1);
            } else if (k < K) {
                std::snprintf(line, sizeof(line), "%llu,%.9g,%.12g,%.12g,%.12g\n",
                              static_cast<unsigned long long>(p), t, x1,
                              result.trace_x2[p * (K + 1) + k],
                              result.trace_p12[p * K + k]);
            } else {
                std::snprintf(line, sizeof(line), "%llu,%.9g,%.12g,%.12g,\n",
                              static_cast<unsigned long long>(p), t, x1,
                              result.trace_x2[p * (K + 1) + k]);
            }
            out << line;
        }
    }
}

std::vector<SweepRow> capacity_sweep(const TwoMgParams& params,
                                     std::span<const double> p_line_grid_kw,
                                     const SimConfig& cfg, unsigned replicates) {
    params.validate();
    cfg.validate();
    if (p_line_grid_kw.empty())
        throw std::invalid_argument("capacity_sweep: empty p_line grid");
    if (replicates == 0)
        throw std::invalid_argument("capacity_sweep: replicates must be >= 1");

    const SystemParams& base = params.base;
    constexpr double kRes = 0.25;  // kWh
    const double dt = base.t_f / cfg.k_steps;
    // Search cap: the disconnected limiting size plus headroom; a sweep point
    // failing even at the cap is reported rather than thrown.
    const double cap_hi =
        kRes * std::ceil((limiting_sizes(params).n_disconnected * base.b_max + 1.0) / kRes);
    const long long idx_hi_max = static_cast<long long>(std::llround(cap_hi / kRes));

    std::vector<SweepRow> rows;
    for (double p_line : p_line_grid_kw) {
        const TransferPolicy policy = p_line == 0.0
                                          ? TransferPolicy::disconnected()
                                          : TransferPolicy::discrete_kkt(p_line, dt);
        TwoMgParams run_params = params;
        run_params.p_line_kw = p_line;

        auto gate = [&](double capacity_kwh, std::uint64_t seed) {
            SimConfig c = cfg;
            c.master_seed = seed;
            c.record_traces = false;
            try {
                const EnsembleResult r =
                    simulate_two_mg(run_params, capacity_kwh / base.b_max, policy, c);
                return r.violation_rate + 2.0 * r.wilson99.half_width() <= base.delta;
            } catch (const std::invalid_argument&) {
                return false;  // capacity too small for the step condition
            }
        };

        SweepRow row;
        row.p_line_kw = p_line;
        double cap_sum = 0.0;
        bool ok = true;
        for (unsigned rep = 0; rep < replicates && ok; ++rep) {
            const std::uint64_t seed = mix64(cfg.master_seed + 0x7157EEB00Dull * rep);
            if (!gate(cap_hi, seed)) {
                ok = false;
                break;
            }
            long long lo = 0, hi = idx_hi_max;
            while (hi - lo > 1) {
                const long long mid = lo + (hi - lo) / 2;
                if (gate(kRes * static_cast<double>(mid), seed))
                    hi = mid;
                else
                    lo = mid;
            }
            cap_sum += kRes * static_cast<double>(hi);
        }
        row.ok = ok;
        row.capacity_kwh = ok ? cap_sum / replicates : cap_hi;

        // Confirmation run at the reported capacity.
        SimConfig confirm = cfg;
        confirm.master_seed = mix64(cfg.master_seed + 0xC0F1D57A11ull);
        confirm.record_traces = false;
        try {
            const EnsembleResult r = simulate_two_mg(
                run_params, row.capacity_kwh / base.b_max, policy, confirm);
            row.rate = r.violation_rate;
            row.wilson99 = r.wilson99;
        } catch (const std::invalid_argument&) {
            row.ok = false;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                     const CsvHeader& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(out, header);
    out << "p_line_kw,capacity_kwh,rate_at_capacity,ci_lo,ci_hi,ok\n";
    char line[256];
    for (const SweepRow& r : rows) {
        std::snprintf(line, sizeof(line), "%.9g,%.9g,%.12g,%.12g,%.12g,%d\n",
                      r.p_line_kw, r.capacity_kwh, r.rate, r.wilson99.lo, r.wilson99.hi,
                      r.ok ? 1 : 0);
        out << line;
    }
}

}  // namespace bessplan
