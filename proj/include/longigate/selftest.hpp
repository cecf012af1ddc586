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

#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "longigate/experiments.hpp"

namespace longigate {

struct SelftestOptions {
  /// Conventions under test; perturbing them must make a named check fail.
  DissipatorConventions conventions;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

/// Parameters of the benchmark device, in rad/s.
inline SystemParams selftest_params() {
  SystemParams p;
  p.omega_r = kTwoPi * 6e9;
  p.omega_a1 = kTwoPi * 5e9;
  p.omega_a2 = kTwoPi * 5.2e9;
  p.g1 = p.g2 = kTwoPi * 60e6;
  p.omega_m = p.omega_r - kTwoPi * 537e6;
  p.kappa = kTwoPi * 0.05e6;
  return p;
}

inline LindbladModel bare_model(const HilbertSpace& space, double t_final) {
  return LindbladModel{OperatorSchedule(space), {}, t_final, Frame::rotating};
}

// Coherence of |+⟩ on qubit 1 must decay as e^{−t/T2}.
inline CheckResult check_dephasing(const SelftestOptions& o) {
  SystemParams p = selftest_params();
  const double t1 = 30e-6, t2 = 20e-6, t = 10e-6;
  p.qubit_noise = std::array<QubitNoise, 2>{QubitNoise{t1, t2}, QubitNoise{t1, t2}};
  const HilbertSpace space = gate_space(4);
  LindbladModel m = bare_model(space, t);
  m.dissipators = qubit_noise_dissipators(p, space, o.conventions);
  Vector psi = kron(kron(Vector(Vector::Constant(2, 1.0 / std::sqrt(2.0))), basis_ket(2, 0)), basis_ket(4, 0));
  const Trajectory tr = evolve(m, DensityState::pure(space, psi), SolverConfig{});
  const Matrix q1 = partial_trace(tr.final_state.matrix(), space, {kQubit1});
  const double got = std::abs(q1(0, 1)), want = 0.5 * std::exp(-t / t2);
  const double err = std::abs(got - want) / want;
  return {"dephasing_convention", err < 1e-6, "|rho01| rel. error " + sci(err), 0.0};
}

// Excited population (σ_z = +1) must decay as e^{−t/T1}.
inline CheckResult check_t1(const SelftestOptions& o) {
  SystemParams p = selftest_params();
  const double t1 = 30e-6, t = 15e-6;
  p.qubit_noise = std::array<QubitNoise, 2>{QubitNoise{t1, 2.0 * t1}, QubitNoise{t1, 2.0 * t1}};
  const HilbertSpace space = gate_space(4);
  LindbladModel m = bare_model(space, t);
  m.dissipators = qubit_noise_dissipators(p, space, o.conventions);
  const Vector psi = kron(kron(basis_ket(2, 0), basis_ket(2, 0)), basis_ket(4, 0));
  const Trajectory tr = evolve(m, DensityState::pure(space, psi), SolverConfig{});
  const double got = partial_trace(tr.final_state.matrix(), space, {kQubit1})(0, 0).real();
  const double want = std::exp(-t / t1);
  const double err = std::abs(got - want) / want;
  return {"t1_decay", err < 1e-6, "population rel. error " + sci(err), 0.0};
}

// ⟨a⟩ of a coherent state under Δa†a + κD[a] is α e^{−iΔt − κt/2}.
inline CheckResult check_damped_oscillator(const SelftestOptions&) {
  const int cutoff = 16;
  const double kappa = kTwoPi * 1e6, detuning = kTwoPi * 5e6, t = 200e-9;
  const cplx alpha(0.8, 0.3);
  const HilbertSpace space = gate_space(cutoff);
  LindbladModel m = bare_model(space, t);
  m.hamiltonian.add(detuning, embed(number_operator(cutoff), kOscillator, space));
  m.dissipators.push_back(photon_loss(kappa, space));
  const Vector psi = kron(kron(basis_ket(2, 0), basis_ket(2, 0)), coherent_ket(cutoff, alpha));
  const Trajectory tr = evolve(m, DensityState::pure(space, psi), SolverConfig{});
  const cplx got = tr.final_state.expectation(embed(annihilation(cutoff), kOscillator, space));
  const cplx want = alpha * std::exp(-kI * (detuning * t) - 0.5 * kappa * t);
  const double err = std::abs(got - want);
  return {"damped_oscillator", err < 1e-6, "|<a> - analytic| " + sci(err), 0.0};
}

// F_avg from the PTM against (Σ_P tr(U P U† E(P)) + d²)/(d²(d + 1)) over the 16 Paulis, d = 4.
inline CheckResult check_fidelity_formulas(const SelftestOptions&) {
  const Matrix u = cp_unitary(0.7 * kPi);
  // Amplitude-damped CP: E(ρ) = Σ K ρ K† with K acting on qubit 1 after the gate.
  const double gamma = 0.03;
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = std::sqrt(1.0 - gamma);
  k0(1, 1) = 1.0;
  k1(1, 0) = std::sqrt(gamma);
  const Matrix id2 = Matrix::Identity(2, 2);
  const Matrix ka = kron(k0, id2) * u, kb = kron(k1, id2) * u;
  auto channel = [&](const Matrix& x) -> Matrix { return ka * x * ka.adjoint() + kb * x * kb.adjoint(); };
  std::array<Matrix, 16> images;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Matrix e = Matrix::Zero(4, 4);
      e(i, j) = 1.0;
      images[4 * i + j] = channel(e);
    }
  GateChannel ch;
  ch.ptm = ptm_from_images(images);
  const FidelityResult f = average_gate_fidelity(ch, u);
  double sum = 0.0;
  for (int k = 0; k < 16; ++k) {
    const Matrix& pk = pauli2(k);
    sum += (u * pk * u.adjoint() * channel(pk)).trace().real();
  }
  const double nielsen = (sum + 16.0) / (16.0 * 5.0);
  // Kraus route to the process fidelity: Σ|tr(U†K)|²/d².
  const double f_pro = (std::norm((u.adjoint() * ka).trace()) + std::norm((u.adjoint() * kb).trace())) / 16.0;
  const double err = std::max(std::abs(f.f_avg - nielsen), std::abs(f.f_pro - f_pro));
  return {"fidelity_formulas", err < 1e-12, "max deviation " + sci(err), 0.0};
}

// κ = 0: corrected channel equals CP(θ') at cutoff 8, also from a coherent start.
inline CheckResult check_ideal_cp(const SelftestOptions& o) {
  SystemParams p = selftest_params();
  p.kappa = 0.0;
  GateSetup setup;
  setup.plan.approx = CouplingApprox::rwa;
  setup.solver.fock_cutoff = 8;
  setup.conventions = o.conventions;
  const double f0 = run_gate(p, setup).fidelity.f_avg;
  setup.initial_alpha = {cplx(0.3, 0.0)};
  const double f1 = run_gate(p, setup).fidelity.f_avg;
  const double worst = 1.0 - std::min(f0, f1);
  return {"ideal_cp", worst < 1e-6, "1 - F_avg " + sci(worst), 0.0};
}

// One δ period at cutoff 6: rotating model vs polaron frame.
inline CheckResult check_shrunk_oracle(const SelftestOptions& o) {
  SystemParams p = selftest_params();
  p.kappa = kTwoPi * 1e6;
  GateSetup setup;
  setup.plan.approx = CouplingApprox::rwa;
  setup.plan.target_t_g = kTwoPi / p.delta();
  setup.solver.fock_cutoff = 6;
  setup.conventions = o.conventions;
  const Vector plus = Vector::Constant(4, 0.5);
  const OracleComparison c = oracle_compare(p, setup, plus * plus.adjoint());
  return {"shrunk_oracle", c.schedule.n == 1 && c.trace_distance <= 1e-4, "trace distance " + sci(c.trace_distance), 0.0};
}

}  // namespace detail

/// Fast invariant suite; each check is isolated so one failure never hides another.
inline std::vector<CheckResult> run_selftest(const SelftestOptions& o = {}) {
  using Check = CheckResult (*)(const SelftestOptions&);
  const std::pair<const char*, Check> checks[] = {
      {"dephasing_convention", detail::check_dephasing},
      {"t1_decay", detail::check_t1},
      {"damped_oscillator", detail::check_damped_oscillator},
      {"fidelity_formulas", detail::check_fidelity_formulas},
      {"ideal_cp", detail::check_ideal_cp},
      {"shrunk_oracle", detail::check_shrunk_oracle},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = fn(o);
    } catch (const std::exception& e) {
      r = {name, false, std::string("threw: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace longigate
