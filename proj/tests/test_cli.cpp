// Copyright 2026 The longigate Authors
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

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded and returns the exit code and stdout.
Result cli(const std::string& args) {
  const std::string cmd = std::string(LONGIGATE_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(LONGIGATE_SOURCE_DIR) + "/configs/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("longigate_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Stdout must be exactly one JSON object per line.
json single_line(const std::string& out) {
  EXPECT_FALSE(out.empty());
  EXPECT_EQ(out.find('\n'), out.size() - 1) << out;
  return json::parse(out);
}

}  // namespace

TEST(Cli, ValidateBenchmarkPrintsSchedule) {
  const Result r = cli("validate --config " + config("benchmark.json"));
  ASSERT_EQ(r.code, 0);
  const json j = single_line(r.out);
  EXPECT_TRUE(j.at("valid").get<bool>());
  const json& pt = j.at("points").at(0);
  EXPECT_EQ(pt.at("n"), 20);
  EXPECT_NEAR(pt.at("t_g_ns").get<double>(), 37.24, 0.01);
  EXPECT_NEAR(pt.at("j_bar_mhz_over_2pi").get<double>(), -60.0 * 60.0 / (2.0 * 537.0), 1e-9);  // −g²/2δ
  EXPECT_EQ(pt.at("status"), "ok");
}

TEST(Cli, ValidateAllShippedConfigs) {
  for (const char* name : {"t1t2.json", "detuning_sweep.json", "coupling_sweep.json", "squeezing_sweep.json",
                           "remote.json"}) {
    const Result r = cli(std::string("validate --config ") + config(name));
    EXPECT_EQ(r.code, 0) << name;
    EXPECT_TRUE(single_line(r.out).at("valid").get<bool>()) << name;
  }
}

TEST(Cli, FatalConfigsExitOne) {
  const std::string bench = config("benchmark.json");
  EXPECT_EQ(cli("validate --config " + config("t1t2.json") + " --override system.qubit_noise.t2_us=70").code, 1);
  EXPECT_EQ(cli("validate --config " + bench + " --override system.delta_mhz_over_2pi=0").code, 1);
  EXPECT_EQ(cli("validate --config " + bench + " --override system.kapa=1").code, 1);
  EXPECT_EQ(cli("run --config " + bench + " --override system.kapa=1 --out " + scratch("fatal").string()).code, 1);
  // δ̄ on the normal-mode pole.
  EXPECT_EQ(cli("validate --config " + config("remote.json") + " --override sweep.delta_bar_mhz_over_2pi=[100]").code, 1);
  EXPECT_EQ(cli("validate --config /nonexistent.json").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("").code, 1);
}

TEST(Cli, RunWritesCsvAndProvenance) {
  const fs::path dir = scratch("run");
  const Result r = cli("run --config " + config("benchmark.json") + " --override solver.fock_cutoff=8 --out " +
                       dir.string());
  ASSERT_EQ(r.code, 0);
  const json j = single_line(r.out);
  EXPECT_EQ(j.at("ok"), 1);
  EXPECT_EQ(fs::path(j.at("csv").get<std::string>()), dir / "benchmark.csv");
  const std::string csv = read(dir / "benchmark.csv");
  EXPECT_EQ(csv.rfind("axis,series,t_g_ns,n,", 0), 0u);
  const json prov = json::parse(read(dir / "benchmark.provenance.json"));
  EXPECT_EQ(prov.at("library"), "longigate");
  EXPECT_TRUE(prov.at("rows").at(0).contains("hygiene"));
}

TEST(Cli, PartialFailureExitsTwo) {
  const fs::path dir = scratch("partial");
  // g = 400 MHz at δ = 300 MHz cannot fit a single cycle.
  const Result r = cli("run --config " + config("coupling_sweep.json") +
                       " --override sweep.g_mhz_over_2pi=[20,400] --override sweep.delta_mhz_over_2pi=[300] --out " +
                       dir.string());
  EXPECT_EQ(r.code, 2);
  const json j = single_line(r.out);
  EXPECT_EQ(j.at("errors"), 1);
  EXPECT_EQ(j.at("ok"), 1);
}

TEST(Cli, CsvIsByteIdenticalAcrossJobs) {
  const std::string base = "run --config " + config("detuning_sweep.json") +
                           " --override output.record_timing=false --override sweep.g_mhz_over_2pi=[20,40]"
                           " --override sweep.delta_mhz_over_2pi=[300,805,2159]";
  const fs::path a = scratch("jobs1"), b = scratch("jobs3");
  ASSERT_EQ(cli(base + " --jobs 1 --out " + a.string()).code, 0);
  ASSERT_EQ(cli(base + " --jobs 3 --out " + b.string()).code, 0);
  const std::string ca = read(a / "detuning_sweep.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, read(b / "detuning_sweep.csv"));
}

TEST(Cli, SelftestPassesAndNamesBrokenConvention) {
  const Result ok = cli("selftest");
  ASSERT_EQ(ok.code, 0);
  const json j = single_line(ok.out);
  EXPECT_EQ(j.at("selftest"), "pass");
  EXPECT_EQ(j.at("checks").size(), 6u);
  const Result bad = cli("selftest --dephasing-factor 1.0");
  EXPECT_EQ(bad.code, 1);
  const json jb = single_line(bad.out);
  EXPECT_EQ(jb.at("selftest"), "fail");
  for (const auto& c : jb.at("checks"))
    if (c.at("name") == "dephasing_convention") EXPECT_FALSE(c.at("passed").get<bool>());
}

TEST(Cli, VersionFlag) {
  const Result r = cli("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(r.out.empty());
}
