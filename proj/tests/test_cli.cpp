// Copyright 2026 The seqcert Authors
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

// Runs the seqcert executable and checks files and exit codes.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "seqcert/cli.hpp"

namespace fs = std::filesystem;
using seqcert::Json;

namespace {

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("seqcert_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    // Exit status of `seqcert args`, stdout captured into `out`.
    int run(const std::string& args, std::string* out = nullptr) {
        const fs::path log = dir_ / "stdout.txt";
        const std::string cmd = std::string(SEQCERT_CLI_PATH) + " " + args + " > " + log.string() + " 2> " +
                                (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        if (out) *out = slurp(log);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string err() { return slurp(dir_ / "stderr.txt"); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CertifyTargetSchedule) {
    const auto cfg = write("c.json", R"({"theta1": 0.7853981633974483, "target_g": 0.51, "n": 3})");
    std::string out;
    ASSERT_EQ(run("certify --config " + cfg.string() + " --out " + (dir_ / "r.json").string(), &out), 0) << err();
    const Json r = Json::parse(slurp(dir_ / "r.json"));
    ASSERT_EQ(r["steps"].size(), 3u);
    for (const auto& s : r["steps"]) EXPECT_GE(s["min_entropy_bits"].get<double>(), 0.9714);
    EXPECT_GE(r["total_bits"].get<double>(), 2.91);
    EXPECT_NE(out.find("4 log2(d) = 4 bits"), std::string::npos);
    const std::string csv = slurp(dir_ / "r.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), seqcert::kStepCsvHeader);
}

TEST_F(CliTest, CertifySingleStepMatchesLibrary) {
    const auto cfg = write("c.json", R"({"theta1": 0.7853981633974483, "xis": [0.01]})");
    ASSERT_EQ(run("certify --config " + cfg.string() + " --out " + (dir_ / "r.json").string()), 0) << err();
    const auto back = seqcert::report_from_json(Json::parse(slurp(dir_ / "r.json")));
    const auto lib = seqcert::certify(seqcert::ProtocolConfig(seqcert::kPi / 4, {0.01}));
    EXPECT_EQ(back.per_step[0].bell_value, lib.per_step[0].bell_value);
    EXPECT_EQ(back.per_step[0].g_upper, lib.per_step[0].g_upper);
    EXPECT_EQ(back.total_bits, lib.total_bits);
}

TEST_F(CliTest, CertifyWritesNoiseTable) {
    const auto cfg = write("c.json", R"({"theta1": 0.7853981633974483, "xis": [0.01], "noise_grid": [1, 0.99, 0]})");
    ASSERT_EQ(run("certify --config " + cfg.string() + " --out " + (dir_ / "r.json").string()), 0) << err();
    const std::string noise = slurp(dir_ / "r.noise.csv");
    EXPECT_EQ(noise.substr(0, noise.find('\n')), seqcert::kNoiseCsvHeader);
    EXPECT_NE(noise.find("0.98999999999999999,1,2.79986284854706"), std::string::npos) << noise;
}

TEST_F(CliTest, CertifyRejectsMalformedConfig) {
    const auto bad = write("bad.json", R"({"theta1": 0.7853981633974483, "xis": [0]})");
    EXPECT_EQ(run("certify --config " + bad.string() + " --out " + (dir_ / "r.json").string()), 2);
    EXPECT_NE(err().find("/xis/0"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir_ / "r.json"));
    const auto broken = write("broken.json", "{ not json");
    EXPECT_EQ(run("certify --config " + broken.string()), 2);
    EXPECT_EQ(run("certify --config " + (dir_ / "missing.json").string()), 2);
    EXPECT_EQ(run("certify"), 2);
    EXPECT_EQ(run("no-such-command"), 2);
}

TEST_F(CliTest, CertifyReportsUnderflowAsInfeasible) {
    const auto cfg = write("c.json", R"({"theta1": 0.7853981633974483, "target_g": 0.54, "n": 14})");
    EXPECT_EQ(run("certify --config " + cfg.string() + " --out " + (dir_ / "r.json").string()), 3);
    EXPECT_NE(err().find("underflow"), std::string::npos);
}

TEST_F(CliTest, BoundCurve) {
    std::string out;
    ASSERT_EQ(run("bound-curve --theta 0.78539816339744828 --samples 2", &out), 0);
    EXPECT_EQ(out, "I,g_upper,min_entropy_bits\n2,1,0\n2.8284271247461903,0.5,1\n");
    ASSERT_EQ(run("bound-curve --theta 0.39269908169872414 --samples 5 --out " + (dir_ / "c.csv").string()), 0);
    const std::string csv = slurp(dir_ / "c.csv");
    EXPECT_NE(csv.find("\n3.2659863237109041,0.5,1\n"), std::string::npos);
    EXPECT_EQ(run("bound-curve --theta 1.2"), 2);
    EXPECT_EQ(run("bound-curve --theta 0.5 --samples 1"), 2);
}

TEST_F(CliTest, VerifyConjecture) {
    const auto out = dir_ / "v.json";
    ASSERT_EQ(run("verify-conjecture --grid 1:0 --budget 100000 --seed 7 --out " + out.string()), 0) << err();
    const Json v = Json::parse(slurp(out));
    EXPECT_NEAR(v["reports"][0]["best_value"].get<double>(), 8.0, 1e-6);
    EXPECT_FALSE(v["counterexample"].get<bool>());
    const auto out2 = dir_ / "v2.json";
    ASSERT_EQ(run("verify-conjecture --grid 1:0 --budget 100000 --seed 7 --out " + out2.string()), 0);
    EXPECT_EQ(slurp(out), slurp(out2));
    EXPECT_EQ(run("verify-conjecture --grid 1:0,1:2.5"), 2);
    EXPECT_EQ(run("verify-conjecture --grid 1:0 --budget 10"), 2);
}

TEST_F(CliTest, SampleDeterministicAndValidated) {
    const auto cfg = write("c.json", R"({"theta1": 0.7853981633974483, "xis": [0.01, 0.05], "gammas": [0.5, 0.5]})");
    const auto a = dir_ / "a.ndjson";
    const auto b = dir_ / "b.ndjson";
    ASSERT_EQ(run("sample --config " + cfg.string() + " --samples 20000 --seed 5 --out " + a.string()), 0) << err();
    ASSERT_EQ(run("sample --config " + cfg.string() + " --samples 20000 --seed 5 --workers 3 --out " + b.string()), 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(dir_ / "a.estimates.ndjson"), slurp(dir_ / "b.estimates.ndjson"));
    std::ifstream lines(a);
    std::string first;
    std::getline(lines, first);
    const Json rec = Json::parse(first);
    EXPECT_EQ(rec["y"].size(), 2u);
    EXPECT_EQ(run("sample --config " + cfg.string() + " --samples 0"), 2);
}
