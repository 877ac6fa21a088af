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

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string command = std::string(BESSPLAN_CLI_PATH) + " " + args + " 2>&1";
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof(buffer), pipe))
        result.output.append(buffer, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("bessplan_cli_" + std::to_string(std::rand()) +
                std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("size-single prints the closed form and writes the CSV") {
    TempDir dir;
    const RunResult r = run_cli("size-single --out " + (dir.path / "o").string());
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("N0 = 13.5723 kWh") != std::string::npos);
    CHECK(r.output.find("deploy 14 kWh (ceil), initial charge 7 kWh") != std::string::npos);
    const std::string csv = slurp(dir.path / "o" / "sizing_single.csv");
    CHECK(csv.find("# delta = 0.02") != std::string::npos);
    CHECK(csv.find("n_continuous,n_units,") != std::string::npos);
}

TEST_CASE("size-single --rounding floor reproduces the deployment numbers") {
    TempDir dir;
    const RunResult r =
        run_cli("size-single --rounding floor --out " + (dir.path / "o").string());
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("deploy 13 kWh (floor), initial charge 6.5 kWh") !=
          std::string::npos);
}

TEST_CASE("invalid config values exit 1 and name the field") {
    TempDir dir;
    const fs::path cfg = dir.path / "bad.cfg";
    std::ofstream(cfg) << "[system]\ndelta = 0\n";
    const RunResult r = run_cli("size-single --config " + cfg.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("delta") != std::string::npos);
}

TEST_CASE("unit-less config keys are rejected with a hint") {
    TempDir dir;
    const fs::path cfg = dir.path / "ambiguous.cfg";
    std::ofstream(cfg) << "[system]\nsigma = 1.0\n";
    const RunResult r = run_cli("size-single --config " + cfg.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("sigma_kwh_per_sqrt_h") != std::string::npos);
}

TEST_CASE("simulate is reproducible byte for byte") {
    TempDir dir;
    const fs::path cfg = dir.path / "sim.cfg";
    std::ofstream(cfg) << "[sim]\nscenario = two-mg\nn_paths = 300\ndt_seconds = 60\n"
                          "master_seed = 9\n";
    const std::string base = "simulate --config " + cfg.string() + " --out ";
    const RunResult a = run_cli(base + (dir.path / "a").string());
    INFO(a.output);
    CHECK(a.exit_code == 0);
    const RunResult b = run_cli(base + (dir.path / "b").string());
    CHECK(b.exit_code == 0);
    const std::string csv_a = slurp(dir.path / "a" / "simulate_summary.csv");
    const std::string csv_b = slurp(dir.path / "b" / "simulate_summary.csv");
    CHECK(!csv_a.empty());
    CHECK(csv_a == csv_b);
    CHECK(csv_a.find("two-mg,300,") != std::string::npos);
}

TEST_CASE("single-path trace export") {
    TempDir dir;
    const fs::path cfg = dir.path / "one.cfg";
    std::ofstream(cfg) << "[sim]\nscenario = single\nn_paths = 1\ndt_seconds = 3600\n";
    const RunResult r = run_cli("simulate --config " + cfg.string() +
                                " --record-traces --out " + (dir.path / "o").string());
    INFO(r.output);
    CHECK(r.exit_code == 0);
    const std::string traces = slurp(dir.path / "o" / "traces.csv");
    CHECK(traces.find("path,t_hours,x1_kwh,x2_kwh,p12_kw") != std::string::npos);
    // 5-hour horizon on an hourly grid: 6 rows after the header.
    int lines = 0;
    for (char ch : traces)
        if (ch == '\n') ++lines;
    CHECK(lines >= 7);
}

TEST_CASE("verify passes clean and fails under fault injection") {
    TempDir dir;
    const RunResult clean = run_cli("verify --quick --seed 20260810");
    INFO(clean.output);
    CHECK(clean.exit_code == 0);
    CHECK(clean.output.find("[PASS] bound-dominance") != std::string::npos);
    CHECK(clean.output.find("[PASS] dp-oracle") != std::string::npos);
    CHECK(clean.output.find("FAIL") == std::string::npos);

    const RunResult faulty =
        run_cli("verify --quick --seed 20260810 --fault flip-policy-sign");
    INFO(faulty.output);
    CHECK(faulty.exit_code == 2);
    CHECK(faulty.output.find("[FAIL] dp-oracle") != std::string::npos);
}
