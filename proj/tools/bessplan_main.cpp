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

/* Command-line front end. Links only the shared C library. */

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bessplan.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCheckFailed = 2;

struct Settings {
    // [system] -- unit-suffixed keys; unsuffixed ambiguity is rejected.
    double sigma_kwh_per_sqrt_h = 1.0;
    double b_max_kwh = 1.0;
    double delta = 0.02;
    double t_f_hours = 5.0;
    double alpha = 0.5;
    // [two_mg]
    double p_line_kw = 15.0;
    std::optional<double> beta_kwh;
    // [sim]
    std::string scenario = "two-mg";  // single | two-mg
    std::uint64_t n_paths = 5000;
    double dt_seconds = 30.0;
    std::uint64_t master_seed = 42;
    bool record_traces = false;
    bool bridge_correction = false;
    std::optional<double> capacity_kwh;  // default: floor-rounded planning size
    std::string policy = "discrete-kkt";  // discrete-kkt | bang-bang | disconnected
    // [sweep]
    std::vector<double> p_line_grid_kw = {0.0, 2.0, 5.0, 10.0, 15.0, 25.0, 50.0, 100.0};
    unsigned replicates = 3;
    // [output]
    std::string out_dir = "out";
    // command-line only
    std::string rounding = "ceil";
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"system", {"sigma_kwh_per_sqrt_h", "b_max_kwh", "delta", "t_f_hours", "alpha"}},
        {"two_mg", {"p_line_kw", "beta_kwh"}},
        {"sim",
         {"scenario", "n_paths", "dt_seconds", "master_seed", "record_traces",
          "bridge_correction", "capacity_kwh", "policy"}},
        {"sweep", {"p_line_grid_kw", "replicates"}},
        {"output", {"dir"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(key + ": not a number: '" + value + "'");
    }
    if (pos != value.size())
        throw std::runtime_error(key + ": trailing characters in '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::runtime_error(key + ": expected true/false, got '" + value + "'");
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
    std::vector<double> grid;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        grid.push_back(parse_double(key, item));
    }
    if (grid.empty()) throw std::runtime_error(key + ": empty grid");
    return grid;
}

void apply_entry(Settings& s, const std::string& section, const std::string& key,
                 const std::string& value) {
    const auto sec = known_keys().find(section);
    if (sec == known_keys().end())
        throw std::runtime_error("unknown config section [" + section + "]");
    if (!sec->second.contains(key)) {
        std::string hint;
        if (key == "sigma") hint = " (units are part of the key: sigma_kwh_per_sqrt_h)";
        if (key == "t_f" || key == "tf") hint = " (units are part of the key: t_f_hours)";
        if (key == "b_max") hint = " (units are part of the key: b_max_kwh)";
        if (key == "p_line" || key == "p12") hint = " (units are part of the key: p_line_kw)";
        if (key == "beta") hint = " (units are part of the key: beta_kwh)";
        if (key == "dt") hint = " (units are part of the key: dt_seconds)";
        throw std::runtime_error("unknown key '" + key + "' in section [" + section + "]" +
                                 hint);
    }
    if (key == "sigma_kwh_per_sqrt_h") s.sigma_kwh_per_sqrt_h = parse_double(key, value);
    else if (key == "b_max_kwh") s.b_max_kwh = parse_double(key, value);
    else if (key == "delta") s.delta = parse_double(key, value);
    else if (key == "t_f_hours") s.t_f_hours = parse_double(key, value);
    else if (key == "alpha") s.alpha = parse_double(key, value);
    else if (key == "p_line_kw") s.p_line_kw = parse_double(key, value);
    else if (key == "beta_kwh") s.beta_kwh = parse_double(key, value);
    else if (key == "scenario") s.scenario = value;
    else if (key == "n_paths") s.n_paths = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "dt_seconds") s.dt_seconds = parse_double(key, value);
    else if (key == "master_seed") s.master_seed = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "record_traces") s.record_traces = parse_bool(key, value);
    else if (key == "bridge_correction") s.bridge_correction = parse_bool(key, value);
    else if (key == "capacity_kwh") s.capacity_kwh = parse_double(key, value);
    else if (key == "policy") s.policy = value;
    else if (key == "p_line_grid_kw") s.p_line_grid_kw = parse_grid(key, value);
    else if (key == "replicates") s.replicates = static_cast<unsigned>(parse_double(key, value));
    else if (key == "dir") s.out_dir = value;
}

void load_config(Settings& s, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        if (section.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": key outside any [section]");
        apply_entry(s, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

bp_system_params system_params(const Settings& s) {
    return {s.sigma_kwh_per_sqrt_h, s.b_max_kwh, s.delta, s.t_f_hours, s.alpha};
}

bp_two_mg_params two_mg_params(const Settings& s) {
    return {system_params(s), s.p_line_kw, s.beta_kwh.value_or(0.0)};
}

std::uint32_t k_steps(const Settings& s) {
    const double steps = s.t_f_hours * 3600.0 / s.dt_seconds;
    const long long k = std::llround(steps);
    if (k < 1) throw std::runtime_error("dt_seconds: step larger than the horizon");
    return static_cast<std::uint32_t>(k);
}

bp_sim_config sim_config(const Settings& s) {
    bp_sim_config cfg = {};
    cfg.n_paths = s.n_paths;
    cfg.k_steps = k_steps(s);
    cfg.master_seed = s.master_seed;
    cfg.record_traces = s.record_traces ? 1 : 0;
    cfg.bridge_correction = s.bridge_correction ? 1 : 0;
    cfg.n_threads = 0;
    return cfg;
}

bp_rounding rounding_mode(const Settings& s) {
    if (s.rounding == "ceil") return BP_ROUND_CEIL;
    if (s.rounding == "nearest") return BP_ROUND_NEAREST;
    if (s.rounding == "floor") return BP_ROUND_FLOOR;
    throw std::runtime_error("rounding: expected ceil|nearest|floor");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Resolved configuration echoed into every CSV header.
std::string header_echo(const Settings& s, const std::string& command) {
    std::ostringstream out;
    out << "command = " << command << '\n'
        << "sigma_kwh_per_sqrt_h = " << format_double(s.sigma_kwh_per_sqrt_h) << '\n'
        << "b_max_kwh = " << format_double(s.b_max_kwh) << '\n'
        << "delta = " << format_double(s.delta) << '\n'
        << "t_f_hours = " << format_double(s.t_f_hours) << '\n'
        << "alpha = " << format_double(s.alpha) << '\n'
        << "p_line_kw = " << format_double(s.p_line_kw) << '\n'
        << "beta_kwh = " << (s.beta_kwh ? format_double(*s.beta_kwh) : std::string("auto"))
        << '\n'
        << "scenario = " << s.scenario << '\n'
        << "policy = " << s.policy << '\n'
        << "n_paths = " << s.n_paths << '\n'
        << "dt_seconds = " << format_double(s.dt_seconds) << '\n'
        << "master_seed = " << s.master_seed << '\n'
        << "rounding = " << s.rounding;
    return out.str();
}

void fail(const std::string& message) { throw std::runtime_error(message); }

void check_api(bp_status status) {
    if (status == BP_OK) return;
    fail(bp_last_error());
}

std::filesystem::path out_path(const Settings& s, const std::string& file) {
    std::filesystem::create_directories(s.out_dir);
    return std::filesystem::path(s.out_dir) / file;
}

void write_sizing_csv(const Settings& s, const std::string& command,
                      const std::string& file, const bp_sizing& sizing,
                      const std::vector<std::pair<std::string, std::string>>& extra) {
    const std::filesystem::path path = out_path(s, file);
    std::ofstream out(path);
    if (!out) fail("cannot open " + path.string() + " for writing");
    std::istringstream echo(header_echo(s, command));
    std::string line;
    while (std::getline(echo, line)) out << "# " << line << '\n';
    out << "n_continuous,n_units,total_capacity_kwh,initial_energy_kwh,alpha,rounding";
    for (const auto& [key, value] : extra) out << ',' << key;
    out << '\n';
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.12g,%lld,%.12g,%.12g,%.12g,%s",
                  sizing.n_continuous, static_cast<long long>(sizing.n_units),
                  sizing.total_capacity_kwh, sizing.initial_energy_kwh, sizing.alpha,
                  s.rounding.c_str());
    out << buf;
    for (const auto& [key, value] : extra) out << ',' << value;
    out << '\n';
    std::printf("wrote %s\n", path.string().c_str());
}

int cmd_size_single(const Settings& s) {
    const bp_system_params params = system_params(s);
    bp_sizing sizing;
    check_api(bp_size_single(&params, rounding_mode(s), &sizing));
    std::printf("N0 = %.4f kWh (continuous), alpha = %.2f\n", sizing.n_continuous,
                sizing.alpha);
    std::printf("deploy %.4g kWh (%s), initial charge %.4g kWh\n",
                sizing.total_capacity_kwh, s.rounding.c_str(), sizing.initial_energy_kwh);
    write_sizing_csv(s, "size-single", "sizing_single.csv", sizing, {});
    return kExitOk;
}

int cmd_size_two(const Settings& s_in) {
    Settings s = s_in;
    bp_two_mg_params params = two_mg_params(s);
    double beta = s.beta_kwh.value_or(0.0);
    if (!s.beta_kwh) {
        const std::uint64_t cal_paths = std::max<std::uint64_t>(s.n_paths, 10000);
        double p_hat = 0.0;
        check_api(bp_calibrate_beta(&params, cal_paths, s.master_seed, &beta, &p_hat));
        std::printf("beta = %.1f kWh (calibrated, P[sup|X_d| >= beta] ~= %.5f over %llu paths)\n",
                    beta, p_hat, static_cast<unsigned long long>(cal_paths));
        s.beta_kwh = beta;
        params.beta_kwh = beta;
    } else {
        std::printf("beta = %.1f kWh (supplied)\n", beta);
    }

    bp_sizing sizing;
    check_api(bp_size_two(&params, rounding_mode(s), &sizing));
    std::printf("per-MG capacity: N_c = %.4f kWh (continuous)\n", sizing.n_continuous);
    std::printf("deploy %.4g kWh per MG (%s), initial charge %.4g kWh\n",
                sizing.total_capacity_kwh, s.rounding.c_str(), sizing.initial_energy_kwh);

    double n0 = 0.0, ninf = 0.0, ratio = 0.0;
    check_api(bp_limiting_sizes(&params, &n0, &ninf, &ratio));
    std::printf("limits: disconnected %.4f kWh, infinite line %.4f kWh, ratio %.4f\n",
                n0 * s.b_max_kwh, ninf * s.b_max_kwh, ratio);

    write_sizing_csv(s, "size-two", "sizing_two.csv", sizing,
                     {{"beta_kwh", format_double(beta)},
                      {"n_disconnected_kwh", format_double(n0 * s.b_max_kwh)},
                      {"n_infinite_kwh", format_double(ninf * s.b_max_kwh)},
                      {"limit_ratio", format_double(ratio)}});
    return kExitOk;
}

double default_capacity(const Settings& s) {
    if (s.capacity_kwh) return *s.capacity_kwh;
    // Planning default: the floor-rounded analytical size.
    if (s.scenario == "single") {
        const bp_system_params params = system_params(s);
        bp_sizing sizing;
        check_api(bp_size_single(&params, BP_ROUND_FLOOR, &sizing));
        return sizing.total_capacity_kwh;
    }
    const bp_two_mg_params params = two_mg_params(s);
    bp_sizing sizing;
    check_api(bp_size_two(&params, BP_ROUND_FLOOR, &sizing));
    return sizing.total_capacity_kwh;
}

bp_policy make_policy(const Settings& s) {
    bp_policy policy = {};
    if (s.policy == "disconnected" || s.p_line_kw == 0.0) {
        policy.kind = BP_POLICY_DISCONNECTED;
        policy.p_line_kw = 0.0;
    } else if (s.policy == "bang-bang") {
        policy.kind = BP_POLICY_BANG_BANG;
        policy.p_line_kw = s.p_line_kw;
    } else if (s.policy == "discrete-kkt") {
        policy.kind = BP_POLICY_DISCRETE_KKT;
        policy.p_line_kw = s.p_line_kw;
        policy.dt_hours = s.dt_seconds / 3600.0;
    } else {
        fail("policy: expected discrete-kkt|bang-bang|disconnected");
    }
    return policy;
}

int cmd_simulate(const Settings& s) {
    if (s.scenario != "single" && s.scenario != "two-mg")
        fail("scenario: expected single|two-mg");
    const bp_sim_config cfg = sim_config(s);
    const double capacity = default_capacity(s);
    const std::string echo = header_echo(s, "simulate") +
                             "\ncapacity_kwh = " + format_double(capacity);

    bp_ensemble* ensemble = nullptr;
    if (s.scenario == "single") {
        const bp_system_params params = system_params(s);
        check_api(bp_simulate_single(&params, capacity / s.b_max_kwh, &cfg, &ensemble));
    } else {
        const bp_two_mg_params params = two_mg_params(s);
        const bp_policy policy = make_policy(s);
        check_api(bp_simulate_two(&params, capacity / s.b_max_kwh, &policy, &cfg, &ensemble));
    }

    double lo = 0.0, hi = 0.0;
    bp_ensemble_wilson99(ensemble, &lo, &hi);
    std::printf("capacity %.4g kWh, %llu paths: violation rate %.6f (99%% CI [%.6f, %.6f])\n",
                capacity, static_cast<unsigned long long>(bp_ensemble_paths(ensemble)),
                bp_ensemble_rate(ensemble), lo, hi);

    const std::filesystem::path summary = out_path(s, "simulate_summary.csv");
    check_api(bp_ensemble_write_summary_csv(ensemble, summary.string().c_str(),
                                            s.scenario.c_str(), echo.c_str()));
    std::printf("wrote %s\n", summary.string().c_str());
    if (s.record_traces) {
        const std::filesystem::path traces = out_path(s, "traces.csv");
        check_api(bp_ensemble_write_traces_csv(ensemble, traces.string().c_str(),
                                               echo.c_str()));
        std::printf("wrote %s\n", traces.string().c_str());
    }
    bp_ensemble_free(ensemble);
    return kExitOk;
}

int cmd_sweep(const Settings& s) {
    const bp_two_mg_params params = two_mg_params(s);
    const bp_sim_config cfg = sim_config(s);
    bp_sweep* sweep = nullptr;
    check_api(bp_capacity_sweep(&params, s.p_line_grid_kw.data(), s.p_line_grid_kw.size(),
                                &cfg, s.replicates, &sweep));
    bool all_ok = true;
    for (std::size_t i = 0; i < bp_sweep_size(sweep); ++i) {
        double p_line = 0.0, cap = 0.0, rate = 0.0, lo = 0.0, hi = 0.0;
        int ok = 0;
        check_api(bp_sweep_row(sweep, i, &p_line, &cap, &rate, &lo, &hi, &ok));
        std::printf("p_line %7.2f kW -> capacity %7.3f kWh (rate %.5f, CI [%.5f, %.5f])%s\n",
                    p_line, cap, rate, lo, hi, ok ? "" : "  [no capacity passed]");
        all_ok = all_ok && ok == 1;
    }
    const std::filesystem::path path = out_path(s, "sweep.csv");
    check_api(bp_sweep_write_csv(sweep, path.string().c_str(),
                                 header_echo(s, "sweep").c_str()));
    std::printf("wrote %s\n", path.string().c_str());
    bp_sweep_free(sweep);
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const Settings& s, bool quick, const std::string& fault) {
    bp_fault fault_mode = BP_FAULT_NONE;
    if (fault == "flip-policy-sign") fault_mode = BP_FAULT_FLIP_POLICY_SIGN;
    else if (fault != "none") fail("fault: expected none|flip-policy-sign");

    const bp_two_mg_params params = two_mg_params(s);
    bp_report* report = nullptr;
    check_api(bp_verify(&params, quick ? 1 : 0, fault_mode, s.master_seed, &report));
    if (quick)
        std::printf("mode: quick (reduced grids and path counts; tolerances unchanged)\n");
    for (std::size_t i = 0; i < bp_report_size(report); ++i) {
        std::printf("[%s] %-20s %s\n", bp_report_passed(report, i) ? "PASS" : "FAIL",
                    bp_report_name(report, i), bp_report_detail(report, i));
    }
    const bool ok = bp_report_all_passed(report) == 1;
    bp_report_free(report);
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chance-constrained battery sizing and power-transfer planning"};
    app.require_subcommand(1);

    std::string config_path;
    Settings cli;  // command-line overrides land here after the config load
    bool quick = false;
    std::string fault = "none";

    // Global options; registered on each subcommand so they can follow it.
    std::optional<std::uint64_t> seed_flag, paths_flag;
    std::optional<double> dt_flag, beta_flag;
    std::optional<std::string> out_flag, rounding_flag;
    bool record_traces_flag = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (key = value sections)");
        cmd->add_option("--seed", seed_flag, "master seed");
        cmd->add_option("--paths", paths_flag, "Monte Carlo path count");
        cmd->add_option("--dt-seconds", dt_flag, "simulation step in seconds");
        cmd->add_option("--beta", beta_flag, "difference-process slack in kWh");
        cmd->add_option("--out", out_flag, "output directory");
        cmd->add_option("--rounding", rounding_flag, "ceil|nearest|floor")
            ->check(CLI::IsMember({"ceil", "nearest", "floor"}));
        cmd->add_flag("--record-traces", record_traces_flag, "write per-path traces CSV");
    };

    CLI::App* size_single = app.add_subcommand("size-single", "closed-form single-microgrid size");
    CLI::App* size_two = app.add_subcommand("size-two", "connected-pair size with beta slack");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble of the configured scenario");
    CLI::App* sweep = app.add_subcommand("sweep", "minimal capacity across line limits");
    CLI::App* verify = app.add_subcommand("verify", "bound and policy verification battery");
    for (CLI::App* cmd : {size_single, size_two, simulate, sweep, verify}) add_common(cmd);
    verify->add_flag("--quick", quick, "reduced path counts and grids");
    verify->add_option("--fault", fault, "none|flip-policy-sign (negative control)")
        ->check(CLI::IsMember({"none", "flip-policy-sign"}));

    CLI11_PARSE(app, argc, argv);

    try {
        Settings s;
        if (!config_path.empty()) load_config(s, config_path);
        if (seed_flag) s.master_seed = *seed_flag;
        if (paths_flag) s.n_paths = *paths_flag;
        if (dt_flag) s.dt_seconds = *dt_flag;
        if (beta_flag) s.beta_kwh = *beta_flag;
        if (out_flag) s.out_dir = *out_flag;
        if (rounding_flag) s.rounding = *rounding_flag;
        if (record_traces_flag) s.record_traces = true;

        if (size_single->parsed()) return cmd_size_single(s);
        if (size_two->parsed()) return cmd_size_two(s);
        if (simulate->parsed()) return cmd_simulate(s);
        if (sweep->parsed()) return cmd_sweep(s);
        if (verify->parsed()) return cmd_verify(s, quick, fault);
        std::fprintf(stderr, "error: no subcommand\n");
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
}
