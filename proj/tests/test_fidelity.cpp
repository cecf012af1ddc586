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

#include <random>

#include "longigate/fidelity.hpp"

namespace lg = longigate;
using lg::cplx;
using lg::kI;
using lg::kPi;
using lg::kTwoPi;
using lg::Matrix;
using lg::Vector;

namespace {

constexpr double kMHz = kTwoPi * 1e6;

using Channel = std::function<Matrix(const Matrix&)>;

std::array<Matrix, 16> images_of(const Channel& e) {
  std::array<Matrix, 16> images;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Matrix x = Matrix::Zero(4, 4);
      x(i, j) = 1.0;
      images[4 * i + j] = e(x);
    }
  return images;
}

lg::GateChannel channel_of(const Channel& e) {
  lg::GateChannel ch;
  ch.ptm = lg::ptm_from_images(images_of(e));
  return ch;
}

// CP(θ) followed by amplitude damping of strength γ on qubit 1.
Channel damped_cp(double theta, double gamma) {
  const Matrix u = lg::cp_unitary(theta);
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = std::sqrt(1.0 - gamma);
  k0(1, 1) = 1.0;
  k1(1, 0) = std::sqrt(gamma);
  const Matrix id2 = Matrix::Identity(2, 2);
  const Matrix a = lg::kron(k0, id2) * u, b = lg::kron(k1, id2) * u;
  return [a, b](const Matrix& x) -> Matrix { return a * x * a.adjoint() + b * x * b.adjoint(); };
}

Matrix random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix z(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) z(i, j) = cplx(n(rng), n(rng));
  return Eigen::HouseholderQR<Matrix>(z).householderQ();
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

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

}  // namespace

TEST(Pauli, BasisIsOrthogonal) {
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b)
      EXPECT_NEAR(std::abs((lg::pauli2(a) * lg::pauli2(b)).trace()), a == b ? 4.0 : 0.0, 1e-14);
  EXPECT_EQ(lg::pauli2_label(7), "XZ");
  EXPECT_THROW(lg::pauli(4), lg::Error);
}

TEST(Ptm, UnitaryPtmIsOrthogonalAndReproducesConjugation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix u = random_unitary(rng);
    const lg::Ptm r = lg::ptm_from_unitary(u);
    EXPECT_LT((r.transpose() * r - lg::Ptm::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r(0, 0), 1.0, 1e-12);
    const Matrix x = random_unitary(rng).leftCols(1) * random_unitary(rng).leftCols(1).adjoint();
    EXPECT_LT(max_abs(lg::apply_ptm(r, x) - u * x * u.adjoint()), 1e-12);
  }
  EXPECT_THROW(lg::ptm_from_unitary(Matrix::Identity(2, 2)), lg::Error);
}

TEST(Ptm, ComposeMultipliesInOrder) {
  std::mt19937_64 rng(11);
  const Matrix u = random_unitary(rng), v = random_unitary(rng);
  lg::GateChannel a, b;
  a.ptm = lg::ptm_from_unitary(u);
  b.ptm = lg::ptm_from_unitary(v);
  const lg::GateChannel c = lg::compose(a, b);  // u after v
  EXPECT_LT((c.ptm - lg::ptm_from_unitary(u * v)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Choi, PositiveForPhysicalChannels) {
  const lg::GateChannel ch = channel_of(damped_cp(0.9, 0.2));
  EXPECT_GE(lg::min_hermitian_eigenvalue(lg::choi_from_ptm(ch.ptm)), -1e-12);
  EXPECT_NO_THROW(ch.validate());
  EXPECT_NEAR(lg::choi_from_ptm(ch.ptm).trace().real(), 4.0, 1e-12);  // unnormalised: tr = d
}

TEST(Choi, ValidateRejectsUnphysical) {
  // Transpose is positive and trace preserving but not completely positive.
  const lg::GateChannel transpose = channel_of([](const Matrix& x) -> Matrix { return x.transpose(); });
  EXPECT_THROW(transpose.validate(), lg::Error);
  lg::GateChannel leaky;
  leaky.ptm(0, 0) = 0.9;
  EXPECT_THROW(leaky.validate(), lg::Error);
  lg::GateChannel nan;
  nan.ptm(0, 3) = std::nan("");
  EXPECT_THROW(nan.validate(), lg::Error);
}

TEST(Fidelity, IdentityAndDepolarizing) {
  const Matrix u = lg::cp_unitary(kPi);
  const lg::GateChannel ideal = channel_of([&](const Matrix& x) -> Matrix { return u * x * u.adjoint(); });
  EXPECT_NEAR(lg::average_gate_fidelity(ideal, u).f_avg, 1.0, 1e-13);
  const lg::GateChannel depol =
      channel_of([](const Matrix& x) -> Matrix { return x.trace() * Matrix::Identity(4, 4) / 4.0; });
  const lg::FidelityResult f = lg::average_gate_fidelity(depol, u);
  EXPECT_NEAR(f.f_pro, 1.0 / 16.0, 1e-13);
  EXPECT_NEAR(f.f_avg, 0.25, 1e-13);
}

// Haar Monte Carlo over input states against the closed form.
TEST(Fidelity, MatchesHaarAverage) {
  const double theta = 0.7 * kPi;
  const Channel e = damped_cp(theta, 0.3);
  const Matrix u = lg::cp_unitary(theta);
  const double formula = lg::average_gate_fidelity(channel_of(e), u).f_avg;
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> n;
  const int samples = 40000;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector psi(4);
    for (Eigen::Index i = 0; i < 4; ++i) psi(i) = cplx(n(rng), n(rng));
    psi.normalize();
    const Vector target = u * psi;
    const double f = (target.adjoint() * e(psi * psi.adjoint()) * target)(0, 0).real();
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / samples, stderr_ = std::sqrt((sum2 / samples - mean * mean) / samples);
  EXPECT_NEAR(mean, formula, 5.0 * stderr_);
  EXPECT_LT(formula, 0.99);  // not a trivial comparison
}

// e^{−iJ̄t σzσz} followed by the corrections is diag(1, 1, 1, e^{iθ'}) for either sign of J̄.
TEST(ZCorrections, SignCasesYieldControlledPhase) {
  for (const double j_bar : {-3.51 * kMHz, 2.2 * kMHz})
    for (const double t_g : {37.24e-9, 113.0e-9}) {
      const double phi = j_bar * t_g;
      Matrix ideal = Matrix::Zero(4, 4);
      const double zz[4] = {1, -1, -1, 1};
      for (int k = 0; k < 4; ++k) ideal(k, k) = std::exp(-kI * phi * zz[k]);
      const lg::ZCorrections z = lg::detail::z_corrections_for(j_bar, t_g);
      const Matrix got = lg::z_correction_unitary(z) * ideal;
      const double theta = lg::wrap_phase(-4.0 * phi);
      EXPECT_LT(max_abs(got - lg::cp_unitary(theta)), 1e-12) << "j_bar " << j_bar << " t_g " << t_g;
    }
}

TEST(ZCorrections, PlannedScheduleMatchesAchievedPhase) {
  const lg::SystemParams p = benchmark();
  lg::PlanOptions opts;
  opts.approx = lg::CouplingApprox::rwa;
  const lg::GateSchedule s = lg::plan_schedule(p, kPi, opts);
  Matrix ideal = Matrix::Zero(4, 4);
  const double zz[4] = {1, -1, -1, 1};
  for (int k = 0; k < 4; ++k) ideal(k, k) = std::exp(-kI * s.j_bar * s.t_g * zz[k]);
  lg::GateChannel ch;
  ch.ptm = lg::ptm_from_unitary(ideal);
  const lg::GateChannel corrected = lg::apply_z_corrections(ch, s);
  EXPECT_EQ(corrected.metadata.z_corrections_applied, 1);
  EXPECT_NEAR(lg::average_gate_fidelity(corrected, lg::cp_unitary(s.theta_achieved)).f_avg, 1.0, 1e-12);
  EXPECT_LT(lg::average_gate_fidelity(ch, lg::cp_unitary(s.theta_achieved)).f_avg, 0.9);
}

TEST(Json, ChannelRoundTripsExactly) {
  lg::GateChannel ch = channel_of(damped_cp(1.3, 0.05));
  lg::PlanOptions opts;
  opts.approx = lg::CouplingApprox::rwa;
  ch.metadata.schedule = lg::plan_schedule(benchmark(), kPi, opts);
  ch.metadata.frame = "rotating";
  ch.metadata.model_level = "microscopic";
  ch.metadata.path = "full";
  ch.metadata.cutoff = 12;
  ch.metadata.rel_tol = 1e-9;
  ch.metadata.abs_tol = 1e-11;
  ch.metadata.t_final = 37e-9;
  ch.metadata.hygiene = {1e-12, 2e-13, -3e-12};
  const nlohmann::json j = lg::to_json(ch);
  const lg::GateChannel back = lg::channel_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.ptm, ch.ptm);
  EXPECT_EQ(lg::to_json(back), j);
  ASSERT_TRUE(back.metadata.schedule.has_value());
  EXPECT_EQ(back.metadata.schedule->n, ch.metadata.schedule->n);
  nlohmann::json bad = j;
  bad["ptm"].erase(0);
  EXPECT_THROW(lg::channel_from_json(bad), lg::Error);
}
