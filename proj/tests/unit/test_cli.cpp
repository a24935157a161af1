// Copyright 2026 The rdr-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
    int exit_code = -1;
    std::string out;
};

Result run_cli(const std::string &args) {
    const std::string cmd = std::string(RDR_SIM_PATH) + " " + args + " 2>&1";
    Result r;
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("rdr_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const Json &j, const std::string &name = "cfg.json") {
        const fs::path p = dir_ / name;
        std::ofstream(p) << j.dump();
        return p;
    }

    static Json small_config() {
        return Json{{"name", "small"},
                    {"form", "rwa"},
                    {"target_n_m", 1.0},
                    {"dims", {10, 4}},
                    {"t_final_us", 1.0},
                    {"observables", {"fidelity", "n_m", "sigma_minus"}}};
    }

    fs::path dir_;
};

TEST_F(Cli, ListPrintsCatalog) {
    const Result r = run_cli("list");
    EXPECT_EQ(r.exit_code, 0);
    for (const char *name : {"fig2a", "fig3", "fig4", "fig5", "appA", "appB", "appD-steady", "appE-timestep"}) {
        EXPECT_NE(r.out.find(name), std::string::npos) << name;
    }
}

TEST_F(Cli, CalibrateReportsBoundaryAtMaxRateTarget) {
    const Result r = run_cli("calibrate --target 24.8");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("boundary"), std::string::npos) << r.out;
    const Result j = run_cli("calibrate --target 1 --json");
    EXPECT_EQ(j.exit_code, 0);
    EXPECT_EQ(Json::parse(j.out)["weak_coupling"]["verdict"], "satisfied");
}

TEST_F(Cli, RunWritesCsvAndManifest) {
    const fs::path cfg = write_config(small_config());
    const Result r = run_cli("run --config " + cfg.string() + " --out " + (dir_ / "a").string());
    ASSERT_EQ(r.exit_code, 0) << r.out;
    const std::string csv = slurp(dir_ / "a" / "small" / "small.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "time_us,fidelity,n_m,sigma_minus_im,sigma_minus_re");
    const Json m = Json::parse(slurp(dir_ / "a" / "small" / "manifest.json"));
    EXPECT_EQ(m["command"], "run");
    EXPECT_EQ(m["scenario"], "small");
    EXPECT_EQ(m["outputs"].size(), 1u);
    EXPECT_TRUE(m.contains("artifact_version"));
    EXPECT_TRUE(m.contains("wall_clock_s"));
}

TEST_F(Cli, ManifestRerunIsBitIdentical) {
    const fs::path cfg = write_config(small_config());
    ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "a").string()).exit_code, 0);
    const fs::path manifest = dir_ / "a" / "small" / "manifest.json";
    const Result r = run_cli("run --from-manifest " + manifest.string() + " --out " + (dir_ / "b").string());
    ASSERT_EQ(r.exit_code, 0) << r.out;
    EXPECT_EQ(slurp(dir_ / "a" / "small" / "small.csv"), slurp(dir_ / "b" / "small" / "small.csv"));
}

TEST_F(Cli, ZeroDurationWritesHeaderOnly) {
    const fs::path cfg = write_config(small_config());
    const Result r = run_cli("run --config " + cfg.string() + " --t-final-us 0 --out " + dir_.string());
    ASSERT_EQ(r.exit_code, 0) << r.out;
    const std::string csv = slurp(dir_ / "small" / "small.csv");
    EXPECT_EQ(csv, "time_us,fidelity,n_m,sigma_minus_im,sigma_minus_re\n");
}

TEST_F(Cli, ConfigErrorsExitWithTwo) {
    EXPECT_EQ(run_cli("run fig9 --out " + dir_.string()).exit_code, 2);
    EXPECT_EQ(run_cli("run fig2a --dims 1,4 --out " + dir_.string()).exit_code, 2);
    EXPECT_EQ(run_cli("run fig2a --dims abc --out " + dir_.string()).exit_code, 2);
    EXPECT_EQ(run_cli("sweep appD-t1 T9 1,2 --out " + dir_.string()).exit_code, 2);
    EXPECT_EQ(run_cli("bogus").exit_code, 2);
    Json bad = small_config();
    bad["unknown_key"] = 1;
    EXPECT_EQ(run_cli("run --config " + write_config(bad).string() + " --out " + dir_.string()).exit_code, 2);
    EXPECT_EQ(run_cli("run --config " + (dir_ / "missing.json").string()).exit_code, 2);
}

TEST_F(Cli, NumericalFailureExitsWithThree) {
    Json cfg = small_config();
    cfg["initial_state"] = "coherent(10)";
    cfg["dims"] = {10, 3};
    const Result r = run_cli("run --config " + write_config(cfg).string() + " --out " + dir_.string());
    EXPECT_EQ(r.exit_code, 3) << r.out;
    EXPECT_NE(r.out.find("truncation"), std::string::npos) << r.out;
}

TEST_F(Cli, SweepPrintsNoneForMissingCrossing) {
    Json cfg = small_config();
    cfg["observables"] = {"fidelity"};
    const Result r = run_cli("sweep config T1 10,20 --config " + write_config(cfg).string() + " --out " + dir_.string());
    ASSERT_EQ(r.exit_code, 0) << r.out;
    EXPECT_NE(r.out.find("crossing_us none"), std::string::npos) << r.out;
    const std::string csv = slurp(dir_ / "config" / "sweep_T1" / "sweep.csv");
    EXPECT_EQ(csv, "T1_us,crossing_us\n10,none\n20,none\n");
}

TEST_F(Cli, WignerGridHasAxisHeader) {
    Json cfg = small_config();
    cfg["target_n_m"] = 0.0;
    const Result r = run_cli("wigner config --times 0 --points 3 --half-width 1 --config " +
                             write_config(cfg).string() + " --out " + dir_.string());
    ASSERT_EQ(r.exit_code, 0) << r.out;
    std::ifstream f(dir_ / "config" / "wigner" / "t_0us.csv");
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header.substr(0, 4), "x\\p,");
}

}  // namespace
