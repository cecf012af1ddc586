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

#include <cstdlib>

#include "longigate/config.hpp"

namespace lg = longigate;
using lg::kTwoPi;
using nlohmann::json;

namespace {

json load(const std::string& name) { return lg::load_config_file(std::string(LONGIGATE_SOURCE_DIR) + "/configs/" + name); }

// Parses and returns the config_error message, or "" when parsing succeeds.
std::string config_error(const json& doc) {
  try {
    lg::parse_run_config(doc);
  } catch (const lg::Error& e) {
    EXPECT_EQ(e.code(), lg::ErrorCode::config_error) << e.what();
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ShippedConfigsParse) {
  for (const char* name : {"benchmark.json", "t1t2.json", "detuning_sweep.json", "coupling_sweep.json",
                           "squeezing_sweep.json", "remote.json"})
    EXPECT_NO_THROW(lg::parse_run_config(load(name))) << name;
}

TEST(Config, UnitsConvertToAngularSi) {
  const auto rc = lg::parse_run_config(load("t1t2.json"));
  const auto& p = rc.spec.params;
  EXPECT_DOUBLE_EQ(p.omega_r, kTwoPi * 6e9);
  EXPECT_DOUBLE_EQ(p.g1, kTwoPi * 60e6);
  EXPECT_NEAR(p.omega_r - p.omega_m, kTwoPi * 537e6, 1e-3);
  EXPECT_DOUBLE_EQ(p.kappa, kTwoPi * 0.05e6);
  ASSERT_TRUE(p.qubit_noise.has_value());
  EXPECT_DOUBLE_EQ((*p.qubit_noise)[0].t1, 30e-6);
  EXPECT_DOUBLE_EQ((*p.qubit_noise)[1].t2, 20e-6);
  EXPECT_EQ(rc.spec.study, lg::StudyKind::t1t2_point);
  ASSERT_EQ(rc.spec.axis.size(), 1u);
  EXPECT_EQ(rc.spec.axis[0], 537.0);
}

TEST(Config, SqueezingPowerInDecibels) {
  const auto rc = lg::parse_run_config(load("squeezing_sweep.json"));
  json doc = load("squeezing_sweep.json");
  doc["system"]["squeezing"]["power_db"] = 10.0 * std::log10(std::exp(2.0));
  EXPECT_NEAR(lg::parse_run_config(doc).spec.params.squeezing->r, 1.0, 1e-12);
  EXPECT_EQ(rc.spec.axis.size(), 13u);
}

TEST(Config, UnknownKeyIsNamed) {
  json doc = load("benchmark.json");
  doc["system"]["kapa_mhz_over_2pi"] = 1.0;
  EXPECT_NE(config_error(doc).find("kapa_mhz_over_2pi"), std::string::npos);
  doc = load("benchmark.json");
  doc["solver"]["bogus"] = true;
  EXPECT_NE(config_error(doc).find("bogus"), std::string::npos);
}

TEST(Config, RejectsInvalidPhysics) {
  json doc = load("t1t2.json");
  doc["system"]["qubit_noise"]["t2_us"] = 70.0;  // T2 > 2 T1
  EXPECT_NE(config_error(doc), "");
  doc = load("benchmark.json");
  doc["system"]["delta_mhz_over_2pi"] = 0.0;
  EXPECT_NE(config_error(doc), "");
  doc = load("benchmark.json");
  doc["system"]["omega_m_ghz_over_2pi"] = 5.4;
  EXPECT_NE(config_error(doc).find("exactly one"), std::string::npos);
  doc = load("benchmark.json");
  doc["system"]["g1_mhz_over_2pi"] = "sixty";
  EXPECT_NE(config_error(doc).find("g1_mhz_over_2pi"), std::string::npos);
}

TEST(Config, StudyRequirements) {
  json doc = load("t1t2.json");
  doc["system"].erase("qubit_noise");
  EXPECT_NE(config_error(doc).find("qubit_noise"), std::string::npos);
  doc = load("remote.json");
  doc["system"].erase("two_oscillator");
  doc["system"]["omega_r_ghz_over_2pi"] = 6.0;
  EXPECT_NE(config_error(doc).find("two_oscillator"), std::string::npos);
  doc = load("benchmark.json");
  doc["sweep"] = {{"delta_mhz_over_2pi", {300}}};
  EXPECT_NE(config_error(doc).find("sweep"), std::string::npos);
  doc = load("detuning_sweep.json");
  doc["study"] = "no_such_study";
  EXPECT_NE(config_error(doc).find("study"), std::string::npos);
}

TEST(Config, SweepAxisMustBeMonotone) {
  json doc = load("detuning_sweep.json");
  doc["sweep"]["delta_mhz_over_2pi"] = {300, 1000, 800};
  EXPECT_NE(config_error(doc).find("strictly increasing"), std::string::npos);
  doc = load("detuning_sweep.json");
  doc["sweep"]["g_mhz_over_2pi"] = {20, 20};
  EXPECT_NE(config_error(doc).find("g_mhz_over_2pi"), std::string::npos);
  doc = load("detuning_sweep.json");
  doc["sweep"].erase("delta_mhz_over_2pi");
  EXPECT_NE(config_error(doc).find("delta_mhz_over_2pi"), std::string::npos);
}

TEST(Config, OverridesSetDottedPaths) {
  json doc = load("benchmark.json");
  lg::apply_override(doc, "system.kappa_mhz_over_2pi=0");
  lg::apply_override(doc, "name=custom");
  lg::apply_override(doc, "output.record_timing=false");
  const auto rc = lg::parse_run_config(doc);
  EXPECT_EQ(rc.spec.params.kappa, 0.0);
  EXPECT_EQ(rc.spec.name, "custom");
  EXPECT_FALSE(rc.spec.record_timing);
  EXPECT_THROW(lg::apply_override(doc, "novalue"), lg::Error);
  EXPECT_THROW(lg::apply_override(doc, "system..g1=1"), lg::Error);
  EXPECT_THROW(lg::apply_override(doc, "name.x=1"), lg::Error);
}

TEST(Config, OutputDirectoryPrecedence) {
  json doc = load("benchmark.json");
  ::unsetenv("LONGIGATE_OUT");
  auto rc = lg::parse_run_config(doc);
  EXPECT_EQ(lg::resolve_output_dir(std::nullopt, rc), "longigate_out");
  ::setenv("LONGIGATE_OUT", "/tmp/from_env", 1);
  EXPECT_EQ(lg::resolve_output_dir(std::nullopt, rc), "/tmp/from_env");
  doc["output"] = {{"dir", "/tmp/from_config"}};
  rc = lg::parse_run_config(doc);
  EXPECT_EQ(lg::resolve_output_dir(std::nullopt, rc), "/tmp/from_config");
  EXPECT_EQ(lg::resolve_output_dir(std::string("/tmp/from_flag"), rc), "/tmp/from_flag");
  ::unsetenv("LONGIGATE_OUT");
}

TEST(Config, UnreadableFiles) {
  EXPECT_THROW(lg::load_config_file("/nonexistent/config.json"), lg::Error);
  const std::string path = ::testing::TempDir() + "broken.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(lg::load_config_file(path), lg::Error);
}
