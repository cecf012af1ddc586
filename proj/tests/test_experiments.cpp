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

#include <sstream>

#include "longigate/config.hpp"
#include "longigate/experiments.hpp"

namespace lg = longigate;
using lg::kPi;
using lg::kTwoPi;
using lg::Matrix;
using nlohmann::json;

namespace {

constexpr double kMHz = kTwoPi * 1e6;

json load(const std::string& name) { return lg::load_config_file(std::string(LONGIGATE_SOURCE_DIR) + "/configs/" + name); }

std::string csv_of(const lg::SweepResult& r) {
  std::ostringstream os;
  lg::write_csv(os, r);
  return os.str();
}

// Detuning sweep small enough for unit tests.
json small_sweep() {
  json c = load("detuning_sweep.json");
  c["sweep"]["delta_mhz_over_2pi"] = {300, 579, 1118};
  c["sweep"]["g_mhz_over_2pi"] = {20, 40};
  c["output"] = {{"record_timing", false}};
  return c;
}

lg::SystemParams benchmark() {
  lg::SystemParams p;
  p.omega_r = kTwoPi * 6e9;
  p.omega_a1 = kTwoPi * 5e9;
  p.omega_a2 = kTwoPi * 5.2e9;
  p.g1 = p.g2 = 60 * kMHz;
  p.omega_m = p.omega_r - 537 * kMHz;
  p.kappa = 0.05 * kMHz;
  return p;
}

lg::GateSetup rwa_setup(int cutoff) {
  lg::GateSetup s;
  s.plan.approx = lg::CouplingApprox::rwa;
  s.solver.fock_cutoff = cutoff;
  return s;
}

}  // namespace

TEST(RunGate, FrameChoiceDoesNotChangeFidelity) {
  const lg::SystemParams p = benchmark();
  lg::GateSetup a = rwa_setup(8), b = a;
  b.frame = lg::OscillatorFrame::modulation;
  const auto fa = lg::run_gate(p, a), fb = lg::run_gate(p, b);
  EXPECT_EQ(fa.schedule.n, 20);
  EXPECT_NEAR(fa.fidelity.f_avg, fb.fidelity.f_avg, 1e-9);
}

TEST(RunGate, NoiselessGateIsExactIncludingCoherentStart) {
  lg::SystemParams p = benchmark();
  p.kappa = 0.0;
  lg::GateSetup s = rwa_setup(8);
  EXPECT_GE(lg::run_gate(p, s).fidelity.f_avg, 1.0 - 1e-6);
  s.initial_alpha = {lg::cplx(0.3, 0.0)};
  EXPECT_GE(lg::run_gate(p, s).fidelity.f_avg, 1.0 - 1e-6);
}

TEST(RunGate, EffectiveModelTracksMicroscopic) {
  const lg::SystemParams p = benchmark();
  lg::GateSetup micro = rwa_setup(8), eff = micro;
  eff.model = lg::ModelLevel::polaron_effective;
  const double im = 1.0 - lg::run_gate(p, micro).fidelity.f_avg, ie = 1.0 - lg::run_gate(p, eff).fidelity.f_avg;
  EXPECT_NEAR(im / ie, 1.0, 0.05);
}

TEST(Oracle, BenchmarkTraceDistanceSmall) {
  const lg::SystemParams p = benchmark();
  const lg::Matrix plus = lg::Vector::Constant(4, 0.5);
  const auto c = lg::oracle_compare(p, rwa_setup(6), plus * plus.adjoint());
  EXPECT_EQ(c.schedule.n, 20);
  EXPECT_LE(c.trace_distance, 1e-4);
  lg::GateSetup eff = rwa_setup(6);
  eff.model = lg::ModelLevel::polaron_effective;
  EXPECT_THROW(lg::oracle_compare(p, eff, plus * plus.adjoint()), lg::Error);
}

TEST(Study, DeterministicAcrossJobs) {
  lg::RunConfig one = lg::parse_run_config(small_sweep());
  lg::RunConfig many = one;
  one.spec.setup.jobs = 1;
  many.spec.setup.jobs = 3;
  const auto a = lg::run_study(one.spec), b = lg::run_study(many.spec);
  EXPECT_EQ(csv_of(a), csv_of(b));
  EXPECT_EQ(a.provenance.dump(), b.provenance.dump());
  EXPECT_EQ(a.count("ok"), 6u);
}

TEST(Study, RowsComeBackInAxisOrderPerSeries) {
  const auto r = lg::run_study(lg::parse_run_config(small_sweep()).spec);
  ASSERT_EQ(r.rows.size(), 6u);
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i)
    if (r.rows[i].series == r.rows[i + 1].series) EXPECT_LT(r.rows[i].axis, r.rows[i + 1].axis);
  // 1 − F ∝ 1/δ and independent of g.
  EXPECT_NEAR(r.rows[0].infidelity / r.rows[3].infidelity, 1.0, 0.1);
  EXPECT_NEAR(r.rows[0].infidelity / r.rows[2].infidelity, 1118.0 / 300.0, 0.15 * 1118.0 / 300.0);
}

TEST(Study, PointConfigReproducesRow) {
  const lg::RunConfig rc = lg::parse_run_config(small_sweep());
  const auto full = lg::run_study(rc.spec);
  const json& row_cfg = full.provenance.at("rows").at(4).at("point_config");
  const auto single = lg::run_study(lg::parse_run_config(row_cfg).spec);
  ASSERT_EQ(single.rows.size(), 1u);
  EXPECT_EQ(single.rows[0].f_avg, full.rows[4].f_avg);
  EXPECT_EQ(single.rows[0].t_g_ns, full.rows[4].t_g_ns);
}

TEST(Study, UnreachablePointBecomesErrorRow) {
  json c = small_sweep();
  c["study"] = "coupling_sweep";
  // A coupling this strong needs n = 0 cycles at δ = 300 MHz.
  c["sweep"] = {{"g_mhz_over_2pi", {20, 400}}, {"delta_mhz_over_2pi", {300}}};
  const auto r = lg::run_study(lg::parse_run_config(c).spec);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].status, "ok");
  EXPECT_EQ(r.rows[1].status.rfind("error", 0), 0u) << r.rows[1].status;
  EXPECT_TRUE(r.has_failures());
  const std::string csv = csv_of(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "axis,series,t_g_ns,n,theta_achieved,F_avg,infidelity,cutoff,variant,model_level,wall_ms,status");
  EXPECT_EQ(lg::summary_json(r).at("errors"), 1);
}

TEST(Remote, ExclusionAndPole) {
  lg::RunConfig rc = lg::parse_run_config(load("remote.json"));
  const auto tasks = lg::detail::expand(rc.spec);
  int excluded = 0;
  for (const auto& t : tasks) excluded += t.exclusion.has_value();
  EXPECT_EQ(excluded, 4);  // 110 and 150 MHz, noiseless and lossy
  lg::SystemParams p = rc.spec.params;
  lg::detail::set_detuning(p, 100.0);  // ν = g_ab: pole of the effective coupling
  try {
    lg::plan_schedule(p, kPi, rc.spec.setup.plan);
    FAIL() << "pole not detected";
  } catch (const lg::Error& e) {
    EXPECT_EQ(e.code(), lg::ErrorCode::hybridized_mode_resonance);
  }
}

TEST(Remote, NoiselessGateAtWideDetuning) {
  json c = load("remote.json");
  c["system"]["kappa_mhz_over_2pi"] = 0.0;
  c["sweep"]["delta_bar_mhz_over_2pi"] = {300};
  const auto r = lg::run_study(lg::parse_run_config(c).spec);
  ASSERT_GE(r.rows.size(), 1u);
  for (const auto& row : r.rows) {
    ASSERT_EQ(row.status, "ok");
    EXPECT_GE(row.f_avg, 0.999);
  }
}

TEST(Squeezing, EffectiveSlopeAndFilterFactor) {
  json c = load("squeezing_sweep.json");
  c["sweep"]["model_levels"] = {"effective"};
  c["sweep"]["power_db"] = {0, 6, 12};
  c["solver"]["fock_cutoff"] = 6;
  const auto r = lg::run_study(lg::parse_run_config(c).spec);
  const auto& fits = r.fits;
  EXPECT_NEAR(fits.at("series").at("rotating_angle/effective").at("slope_log10_infidelity_per_db").get<double>(), -0.1,
              0.02);
  EXPECT_NEAR(fits.at("filtered_over_rotating_at_0db").get<double>(), 0.5, 0.125);
}
