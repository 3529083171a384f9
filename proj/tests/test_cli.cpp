// Copyright 2026 The gausstopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Black-box tests of the command-line driver.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gausstopo/io.hpp"

namespace fs = std::filesystem;
using namespace gausstopo;

namespace {

struct CliResult {
    int code;
    std::string out;
};

CliResult run(const std::string &args) {
    std::string cmd = std::string(GAUSSTOPO_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Data lines: everything except `#` comments.
std::vector<std::string> data_lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gausstopo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

const char *kSmallSweep = "sweep --rows 12 --cols 12 --radius 3 --lw-inner 3 --lw-width 2 --kappa 1,10";

}  // namespace

TEST_F(CliTest, BuildClusterWritesSixteenModes) {
    CliResult r = run("build --rows 4 --cols 4 --boundary torus --log-s 1.0 --kind cluster --out " + path("c.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("modes: 16"), std::string::npos);
    EXPECT_NE(r.out.find("index map:"), std::string::npos);
    LoadedState st = state_from_json(read_json_file(path("c.json")));
    EXPECT_EQ(st.graph.n_modes(), 16);
    EXPECT_TRUE(fs::exists(path("c.map.json")));
}

TEST_F(CliTest, BuildRoundTripIsBitExact) {
    ASSERT_EQ(run("build --rows 8 --cols 8 --log-s 0.7 --kind surface-pipeline --out " + path("s.json")).code, 0);
    LatticeSpec spec;
    spec.rows = spec.cols = 8;
    spec.log_s = 0.7;
    MappedSurfaceCode m = map_cluster_to_surface(spec);
    LoadedState st = state_from_json(read_json_file(path("s.json")));
    EXPECT_TRUE((st.graph.u().array() == m.graph.u().array()).all());
    EXPECT_EQ(state_to_json(st.graph).dump() + "\n", slurp(path("s.json")));
}

TEST_F(CliTest, BuildParityErrorExitsWithValidationCode) {
    std::string cmd = std::string(GAUSSTOPO_CLI_PATH) + " build --rows 7 --cols 8 --kind surface-pipeline --out " +
                      path("x.json") + " 2>&1";
    FILE *pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    std::string out;
    char buf[1024];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    EXPECT_EQ(WEXITSTATUS(status), 2);
    EXPECT_NE(out.find("even"), std::string::npos) << out;
    EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(CliTest, ParseErrorsExitWithValidationCode) {
    EXPECT_EQ(run("spectrum --n three").code, 2);
    EXPECT_EQ(run("no-such-command").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("build --kind hexagonal").code, 2);
    EXPECT_EQ(run("sweep --steps 0 --csv " + path("s.csv")).code, 2);
    EXPECT_EQ(run("sweep --log-s-min 2 --log-s-max 1 --csv " + path("s.csv")).code, 2);
    EXPECT_EQ(run("sweep --rows 12 --cols 12 --radius 9 --csv " + path("s.csv")).code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, SpectrumGapAtUnitSqueezing) {
    CliResult r = run("spectrum --n 3 --m 3 --log-s 0");
    ASSERT_EQ(r.code, 0);
    auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "n,m,log_s,gap,gap_asymptotic,ratio");
    auto cells = split(lines[1]);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_NEAR(std::stod(cells[3]), 1.0 / 3.0, 1e-14);
}

TEST_F(CliTest, BoundsHoldOnSixteenBySixteen) {
    CliResult r = run("bounds --rows 16 --cols 16 --log-s 1");
    EXPECT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["violations"], 0);
    EXPECT_GT(j["pairs_checked"].get<long>(), 0);
}

TEST_F(CliTest, UpperBoundMatchesNetwork) {
    CliResult r = run("upper-bound --log-s 0,1.5");
    ASSERT_EQ(r.code, 0);
    auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 3u);
    for (size_t k = 1; k < lines.size(); ++k) {
        auto cells = split(lines[k]);
        EXPECT_NEAR(std::stod(cells[2]), std::stod(cells[3]), 1e-10);
    }
}

TEST_F(CliTest, TeeAndTmiAgreeForPureStates) {
    CliResult tee = run("tee --rows 12 --cols 12 --log-s 1 --radius 3 --lw-inner 3 --lw-width 2");
    CliResult tm = run("tmi --rows 12 --cols 12 --log-s 1 --radius 3");
    CliResult tln = run("tln --rows 12 --cols 12 --log-s 1 --radius 3");
    ASSERT_EQ(tee.code, 0);
    ASSERT_EQ(tm.code, 0);
    ASSERT_EQ(tln.code, 0);
    double t = json::parse(tee.out)["tee_kp"].get<double>();
    EXPECT_NEAR(json::parse(tm.out)["tmi"].get<double>(), t, 1e-8);
    EXPECT_GE(json::parse(tln.out)["tln_kp"].get<double>(), t - 1e-6);
    EXPECT_GT(t, 0.0);
}

TEST_F(CliTest, TeeFromSavedState) {
    ASSERT_EQ(run("build --rows 12 --cols 12 --frame surface --log-s 1 --kind surface-analytic --out " +
                  path("s.json"))
                  .code,
              0);
    CliResult a = run("tee --rows 12 --cols 12 --radius 3 --lw-inner 3 --lw-width 2 --log-s 1");
    CliResult b = run("tee --rows 12 --cols 12 --radius 3 --lw-inner 3 --lw-width 2 --log-s 1 --state " + path("s.json"));
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(json::parse(a.out)["tee_kp"], json::parse(b.out)["tee_kp"]);
    EXPECT_EQ(run("tee --rows 16 --cols 16 --radius 3 --state " + path("s.json")).code, 2);
}

TEST_F(CliTest, SweepIsDeterministicAndOrdered) {
    std::string base = std::string(kSmallSweep) + " --log-s-min 0.5 --log-s-max 2 --steps 4";
    ASSERT_EQ(run(base + " --csv " + path("a.csv") + " --json " + path("a.jsonl")).code, 0);
    ASSERT_EQ(run(base + " --csv " + path("b.csv") + " --json " + path("b.jsonl")).code, 0);
    EXPECT_EQ(data_lines(slurp(path("a.csv"))), data_lines(slurp(path("b.csv"))));
    EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
    auto lines = data_lines(slurp(path("a.csv")));
    ASSERT_EQ(lines.size(), 9u);
    EXPECT_EQ(lines[0], "log_s,tee_kp,tee_lw,tln,tmi,tmi_lower,tee_upper,kappa");
    double prev = -1.0;
    for (size_t k = 1; k < lines.size(); k += 2) {
        auto cold = split(lines[k]), hot = split(lines[k + 1]);
        ASSERT_EQ(cold.size(), 8u);
        EXPECT_EQ(cold[7], "1");
        EXPECT_EQ(hot[7], "10");
        EXPECT_GT(std::stod(cold[0]), prev);
        prev = std::stod(cold[0]);
        EXPECT_NEAR(std::stod(cold[4]), std::stod(cold[1]), 1e-8);  // tmi = tee_kp at kappa 1
        EXPECT_LE(std::stod(hot[5]), std::stod(hot[4]) + 1e-9);     // tmi_lower <= tmi(10)
        EXPECT_LE(std::stod(cold[1]), std::stod(cold[3]) + 1e-6);  // tee <= tln
        EXPECT_TRUE(hot[3].empty());
    }
}

TEST_F(CliTest, SweepSingleStepEqualsSinglePoint) {
    ASSERT_EQ(run(std::string(kSmallSweep) + " --log-s-min 1 --log-s-max 1 --steps 1 --csv " + path("s.csv")).code, 0);
    auto lines = data_lines(slurp(path("s.csv")));
    ASSERT_EQ(lines.size(), 3u);
    CliResult tee = run("tee --rows 12 --cols 12 --log-s 1 --radius 3 --lw-inner 3 --lw-width 2");
    json j = json::parse(tee.out);
    auto cells = split(lines[1]);
    EXPECT_EQ(std::stod(cells[1]), j["tee_kp"].get<double>());
    EXPECT_EQ(std::stod(cells[2]), j["tee_lw"].get<double>());
}

TEST_F(CliTest, SweepResumesOnlyMissingPoints) {
    std::string base = std::string(kSmallSweep) + " --log-s-min 0.5 --log-s-max 2 --steps 4 --csv " + path("r.csv");
    ASSERT_EQ(run(base).code, 0);
    std::string full = slurp(path("r.csv"));
    // Drop the last two data rows (one grid point) and a row of another point.
    auto lines = data_lines(full);
    std::string header;
    {
        std::istringstream in(full);
        std::string line;
        while (std::getline(in, line) && line[0] == '#') header += line + "\n";
    }
    std::ofstream(path("r.csv"), std::ios::binary | std::ios::trunc)
        << header << lines[0] << "\n" << lines[1] << "\n" << lines[2] << "\n" << lines[5] << "\n" << lines[6] << "\n";
    CliResult r = run(base);
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("points computed: 2, reused: 2"), std::string::npos) << r.out;
    EXPECT_EQ(data_lines(slurp(path("r.csv"))), lines);

    // A different configuration refuses to reuse the file.
    EXPECT_EQ(run(std::string(kSmallSweep) + " --steps 5 --csv " + path("r.csv")).code, 2);
    EXPECT_EQ(run(std::string(kSmallSweep) + " --steps 5 --fresh --csv " + path("r.csv")).code, 0);
}

TEST_F(CliTest, CorrelationsCsvAndFit) {
    CliResult r = run("correlations --rows 16 --cols 16 --log-s 1 --count 8");
    ASSERT_EQ(r.code, 0);
    auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 9u);
    EXPECT_EQ(lines[0], "separation,correlation,bound_value");
    CliResult f = run("correlations --rows 16 --cols 16 --log-s 1 --count 8 --fit");
    ASSERT_EQ(f.code, 0);
    json j = json::parse(f.out);
    EXPECT_GT(j["fit"]["xi_b"].get<double>(), 0.0);
    EXPECT_EQ(j["samples"].size(), 8u);
}

TEST_F(CliTest, MapReportsClosedFormAgreement) {
    CliResult r = run("map --rows 8 --cols 8 --log-s 1 --out " + path("m.json") + " --graph-out " + path("g.json"));
    ASSERT_EQ(r.code, 0);
    auto pos = r.out.find("max |U - U_closed_form|: ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LT(std::stod(r.out.substr(pos + 25)), 1e-9);
    EXPECT_TRUE(fs::exists(path("g.json")));
}
