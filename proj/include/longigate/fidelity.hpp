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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "longigate/algebra.hpp"
#include "longigate/dynamics.hpp"
#include "longigate/model.hpp"
#include "longigate/parallel.hpp"

namespace longigate {

/// Two-qubit Pauli transfer matrix, R_kl = ¼ tr(P_k E(P_l)).
using Ptm = Eigen::Matrix<double, 16, 16>;

/// Single-qubit Pauli in the order {I, X, Y, Z}.
inline Matrix pauli(int k) {
  switch (k) {
    case 0: return Matrix::Identity(2, 2);
    case 1: return pauli_x();
    case 2: return pauli_y();
    case 3: return pauli_z();
  }
  throw Error(ErrorCode::invalid_argument, "Pauli index must be 0..3");
}

/// P_{4a+b} = P_a ⊗ P_b, qubit 1 first; tr(P_k P_l) = 4δ_kl.
inline Matrix pauli2(int index) { return kron(pauli(index / 4), pauli(index % 4)); }

inline const std::array<Matrix, 16>& pauli2_table() {
  static const std::array<Matrix, 16> table = [] {
    std::array<Matrix, 16> t;
    for (int k = 0; k < 16; ++k) t[k] = pauli2(k);
    return t;
  }();
  return table;
}

inline std::string pauli2_label(int index) {
  static const char* names = "IXYZ";
  return {names[index / 4], names[index % 4]};
}

/// PTM from the images E(|i⟩⟨j|), stored at index 4i + j.
inline Ptm ptm_from_images(const std::array<Matrix, 16>& images) {
  const auto& p = pauli2_table();
  std::array<Matrix, 16> out_of_pauli;
  for (int l = 0; l < 16; ++l) {
    Matrix e = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (p[l](i, j) != cplx(0.0)) e += p[l](i, j) * images[4 * i + j];
    out_of_pauli[l] = std::move(e);
  }
  Ptm r;
  for (int k = 0; k < 16; ++k)
    for (int l = 0; l < 16; ++l) r(k, l) = 0.25 * (p[k] * out_of_pauli[l]).trace().real();
  return r;
}

inline Ptm ptm_from_unitary(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw Error(ErrorCode::dimension_mismatch, "two-qubit unitary must be 4x4");
  std::array<Matrix, 16> images;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) images[4 * i + j] = u.col(i) * u.col(j).adjoint();
  return ptm_from_images(images);
}

/// E(X) for a 4×4 operator X, reconstructed from the PTM.
inline Matrix apply_ptm(const Ptm& r, const Matrix& x) {
  const auto& p = pauli2_table();
  Matrix out = Matrix::Zero(4, 4);
  for (int l = 0; l < 16; ++l) {
    const cplx c = 0.25 * (p[l] * x).trace();
    if (c == cplx(0.0)) continue;
    for (int k = 0; k < 16; ++k)
      if (r(k, l) != 0.0) out += (c * r(k, l)) * p[k];
  }
  return out;
}

/// Unnormalised Choi operator Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|).
inline Matrix choi_from_ptm(const Ptm& r) {
  Matrix choi = Matrix::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Matrix eij = Matrix::Zero(4, 4);
      eij(i, j) = 1.0;
      choi.block(4 * i, 4 * j, 4, 4) = apply_ptm(r, eij);
    }
  return choi;
}

inline Matrix cp_unitary(double theta) {
  Matrix u = Matrix::Identity(4, 4);
  u(3, 3) = std::exp(kI * theta);
  return u;
}

inline Matrix rz(double beta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(-0.5 * kI * beta);
  m(1, 1) = std::exp(0.5 * kI * beta);
  return m;
}

/// e^{iγ} Rz(β₁) ⊗ Rz(β₂)
inline Matrix z_correction_unitary(const ZCorrections& z) {
  return std::exp(kI * z.global_phase) * kron(rz(z.rz1), rz(z.rz2));
}

// ---------------------------------------------------------------------------

struct ChannelMetadata {
  std::optional<GateSchedule> schedule;
  std::string frame;
  std::string model_level;
  std::string path;  ///< ket | block | full
  int cutoff = 0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  double t_final = 0.0;
  int z_corrections_applied = 0;
  Hygiene hygiene;
};

struct GateChannel {
  Ptm ptm = Ptm::Identity();
  ChannelMetadata metadata;

  /// Trace preservation (first row e₀ to 1e-6) and complete positivity (Choi ≥ −1e-5).
  void validate(double row_tol = 1e-6, double choi_tol = -1e-5) const {
    for (int l = 0; l < 16; ++l) {
      const double expected = l == 0 ? 1.0 : 0.0;
      if (!std::isfinite(ptm(0, l)) || std::abs(ptm(0, l) - expected) > row_tol)
        throw Error(ErrorCode::unphysical_channel, "PTM first row deviates from (1, 0, ..., 0): not trace preserving");
    }
    if (min_hermitian_eigenvalue(choi_from_ptm(ptm)) < choi_tol)
      throw Error(ErrorCode::unphysical_channel, "Choi operator has a negative eigenvalue: not completely positive");
  }
};

inline GateChannel compose(const GateChannel& after, const GateChannel& before) {
  GateChannel out = before;
  out.ptm = after.ptm * before.ptm;
  return out;
}

/// Follows the channel with the schedule's Z rotations and global phase.
inline GateChannel apply_z_corrections(const GateChannel& ch, const GateSchedule& schedule) {
  GateChannel out = ch;
  out.ptm = ptm_from_unitary(z_correction_unitary(schedule.z)) * ch.ptm;
  ++out.metadata.z_corrections_applied;
  return out;
}

struct FidelityResult {
  double f_avg = 0.0;
  double f_pro = 0.0;
};

/// F_pro = tr(R_Uᵀ R)/16 and F_avg = (4F_pro + 1)/5.
inline FidelityResult average_gate_fidelity(const GateChannel& ch, const Matrix& target) {
  const Ptm ru = ptm_from_unitary(target);
  const double f_pro = (ru.transpose() * ch.ptm).trace() / 16.0;
  return {(4.0 * f_pro + 1.0) / 5.0, f_pro};
}

// ---------------------------------------------------------------------------
// Tomography

/// A configured model plus the oscillator state every tomography input starts from.
struct Simulation {
  LindbladModel model;
  /// Density matrix on the oscillator factors (all factors after the two qubits).
  Matrix oscillator_state;
  SolverConfig solver;
  std::string model_level;
};

/// |0⟩⟨0| on every oscillator factor, or a product of coherent states.
inline Matrix oscillator_state(const HilbertSpace& space, const std::vector<cplx>& alphas = {}) {
  Vector ket = Vector::Ones(1);
  std::size_t k = 0;
  for (std::size_t f = 0; f < space.num_factors(); ++f) {
    if (space.factors()[f].kind != FactorKind::oscillator) continue;
    const cplx alpha = k < alphas.size() ? alphas[k] : cplx(0.0);
    ++k;
    const Vector local = alpha == cplx(0.0) ? basis_ket(space.dim(f), 0) : coherent_ket(space.dim(f), alpha);
    Vector next(ket.size() * local.size());
    for (Eigen::Index i = 0; i < ket.size(); ++i) next.segment(i * local.size(), local.size()) = ket(i) * local;
    ket = std::move(next);
  }
  return ket * ket.adjoint();
}

struct TomographyOptions {
  int jobs = 1;
  /// Evenly spaced checkpoints where the eigenvalues of physical inputs are checked.
  int samples = 9;
  double trace_error = 1e-6;
  double min_eigenvalue_error = -1e-5;
};

namespace detail {

inline void merge(Hygiene& into, const Hygiene& h) {
  into.max_trace_deviation = std::max(into.max_trace_deviation, h.max_trace_deviation);
  into.max_hermiticity_defect = std::max(into.max_hermiticity_defect, h.max_hermiticity_defect);
  into.min_eigenvalue = std::min(into.min_eigenvalue, h.min_eigenvalue);
}

inline std::vector<double> checkpoints(double t_final, int samples) {
  std::vector<double> out;
  const int n = std::max(samples, 2);
  for (int k = 1; k < n; ++k) out.push_back(t_final * k / (n - 1));
  return out;
}

/**
 * Linear evolution of x0 under `gen`. When `physical` the operator is a
 * density matrix and is checked on every accepted step and at checkpoints.
 */
inline Matrix evolve_operator(const LindbladGenerator& gen, Matrix x0, double t_final, const StepControl& ctl,
                              bool physical, const TomographyOptions& opts, Hygiene& hyg) {
  LindbladGenerator::Workspace ws;
  auto rhs = [&](double t, const Matrix& x, Matrix& dx) { gen.apply(t, x, dx, ws); };
  const std::vector<double> stops = physical ? checkpoints(t_final, opts.samples) : std::vector<double>{};
  auto on_accept = [&](double, const Matrix& x) {
    if (!physical) return;
    const double dtr = std::abs(x.trace() - cplx(1.0));
    hyg.max_trace_deviation = std::max(hyg.max_trace_deviation, dtr);
    hyg.max_hermiticity_defect = std::max(hyg.max_hermiticity_defect, hermiticity_defect(x));
    if (dtr > opts.trace_error)
      throw Error(ErrorCode::integration_failure, "trace drift exceeds tolerance (tolerance too loose or cutoff too small)");
  };
  auto eig_check = [&](const Matrix& x) {
    const double ev = min_hermitian_eigenvalue(x);
    hyg.min_eigenvalue = std::min(hyg.min_eigenvalue, ev);
    if (ev < opts.min_eigenvalue_error)
      throw Error(ErrorCode::integration_failure, "negative eigenvalue during evolution (cutoff or tolerance too loose)");
  };
  if (physical) eig_check(x0);
  Matrix out = integrate_dopri5(rhs, std::move(x0), 0.0, t_final, ctl, stops, on_accept,
                                [&](std::size_t, const Matrix& x) { eig_check(x); });
  if (!all_finite(out)) throw Error(ErrorCode::non_finite, "non-finite state after evolution");
  return out;
}

inline std::optional<Vector> pure_state_ket(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  const Eigen::Index top = rho.rows() - 1;
  if (std::abs(es.eigenvalues()(top) - 1.0) > 1e-12) return std::nullopt;
  Vector v = es.eigenvectors().col(top);
  // Fix the arbitrary eigenvector phase so results are reproducible.
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  v *= std::abs(v(arg)) / v(arg);
  return v;
}

inline void check_simulation(const Simulation& sim) {
  sim.solver.validate();
  sim.model.validate();
  const auto& space = sim.model.space();
  if (space.num_factors() < 3 || space.factors()[0].kind != FactorKind::qubit ||
      space.factors()[1].kind != FactorKind::qubit || !space.qubits_leading() ||
      space.factors_of_kind(FactorKind::qubit).size() != 2)
    throw Error(ErrorCode::invalid_argument, "tomography expects two leading qubits followed by oscillators");
  const Eigen::Index dosc = space.dim() / 4;
  if (sim.oscillator_state.rows() != dosc || sim.oscillator_state.cols() != dosc)
    throw Error(ErrorCode::dimension_mismatch, "oscillator state does not match the oscillator factors");
  if (std::abs(sim.oscillator_state.trace() - cplx(1.0)) > 1e-10)
    throw Error(ErrorCode::unphysical_state, "oscillator state must have unit trace");
}

}  // namespace detail

/**
 * Final joint state for the product input ρ_q ⊗ ρ_osc.
 *
 * With all operators diagonal in the qubit basis the state stays a sum of
 * blocks |i⟩⟨j| ⊗ X_ij(t), so only the ten blocks with i ≤ j are integrated
 * (X_ji = X_ij† by hermiticity preservation of the generator).
 */
struct ProductEvolution {
  std::array<Matrix, 16> blocks;  ///< X_ij(t_final) at 4i + j, for block-diagonal generators
  bool block_structured = false;
  Matrix joint;                   ///< ρ(t_final) when not block structured
  Hygiene hygiene;
};

inline Matrix assemble_joint(const ProductEvolution& ev, const Matrix& rho_q) {
  if (!ev.block_structured) return ev.joint;
  const Eigen::Index d = ev.blocks[0].rows();
  Matrix out = Matrix::Zero(4 * d, 4 * d);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (rho_q(i, j) != cplx(0.0)) out.block(i * d, j * d, d, d) = rho_q(i, j) * ev.blocks[4 * i + j];
  return out;
}

/// Evolves the block family when possible, otherwise the single joint product state.
inline ProductEvolution evolve_product(const Simulation& sim, const Matrix& rho_q, const TomographyOptions& opts = {}) {
  detail::check_simulation(sim);
  const auto& space = sim.model.space();
  const Eigen::Index dosc = space.dim() / 4;
  const LindbladGenerator gen = sim.model.generator();
  const StepControl ctl = sim.solver.step_control(sim.model.max_step_hint());
  ProductEvolution ev;
  if (gen.block_diagonal(dosc)) {
    ev.block_structured = true;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) pairs.emplace_back(i, j);
    std::vector<Hygiene> hyg(pairs.size());
    parallel_for(pairs.size(), opts.jobs, [&](std::size_t k) {
      const auto [i, j] = pairs[k];
      const LindbladGenerator sub = gen.restrict_to_blocks(i, j, dosc);
      ev.blocks[4 * i + j] =
          detail::evolve_operator(sub, sim.oscillator_state, sim.model.t_final, ctl, i == j, opts, hyg[k]);
    });
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < i; ++j) ev.blocks[4 * i + j] = ev.blocks[4 * j + i].adjoint();
    for (const auto& h : hyg) detail::merge(ev.hygiene, h);
  } else {
    ev.joint = detail::evolve_operator(gen, kron(rho_q, sim.oscillator_state), sim.model.t_final, ctl, true, opts,
                                       ev.hygiene);
  }
  return ev;
}

/**
 * Reconstructs the two-qubit channel at t_final from the inputs
 * |i⟩⟨j| ⊗ ρ_osc, tracing out the oscillators at the final time.
 *
 * Dissipator-free runs with a pure oscillator state propagate four kets;
 * qubit-diagonal generators integrate oscillator blocks; anything else
 * integrates the full joint operators for i ≤ j and fills i > j by adjoint.
 */
inline GateChannel channel_tomography(const Simulation& sim, const std::optional<GateSchedule>& schedule,
                                      const TomographyOptions& opts = {}) {
  detail::check_simulation(sim);
  const auto& space = sim.model.space();
  const Eigen::Index dosc = space.dim() / 4;
  const double t_final = sim.model.t_final;
  const StepControl ctl = sim.solver.step_control(sim.model.max_step_hint());

  GateChannel ch;
  auto& meta = ch.metadata;
  meta.schedule = schedule;
  meta.frame = to_string(sim.model.frame);
  meta.model_level = sim.model_level;
  meta.cutoff = space.dim(2);
  meta.rel_tol = sim.solver.rel_tol;
  meta.abs_tol = sim.solver.abs_tol;
  meta.t_final = t_final;

  std::array<Matrix, 16> images;
  const auto osc_ket = sim.model.dissipators.empty() ? detail::pure_state_ket(sim.oscillator_state) : std::nullopt;
  if (osc_ket) {
    meta.path = "ket";
    const KetGenerator gen(sim.model.hamiltonian);
    std::array<Vector, 4> finals;
    std::array<Hygiene, 4> hyg;
    parallel_for(4, opts.jobs, [&](std::size_t i) {
      Vector psi = Vector::Zero(space.dim());
      psi.segment(static_cast<Eigen::Index>(i) * dosc, dosc) = *osc_ket;
      Vector scratch;
      auto rhs = [&](double t, const Vector& y, Vector& dy) { gen.apply(t, y, dy, scratch); };
      auto on_accept = [&](double, const Vector& y) {
        const double dev = std::abs(y.squaredNorm() - 1.0);
        hyg[i].max_trace_deviation = std::max(hyg[i].max_trace_deviation, dev);
        if (dev > opts.trace_error) throw Error(ErrorCode::integration_failure, "norm drift exceeds tolerance");
      };
      finals[i] = integrate_dopri5(rhs, std::move(psi), 0.0, t_final, ctl, std::span<const double>{}, on_accept,
                                   [](std::size_t, const Vector&) {});
      // ψψ† is positive semidefinite and Hermitian by construction.
      hyg[i].min_eigenvalue = 0.0;
    });
    for (const auto& h : hyg) detail::merge(meta.hygiene, h);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Eigen::Map<const Matrix> a(finals[i].data(), dosc, 4), b(finals[j].data(), dosc, 4);
        images[4 * i + j] = a.transpose() * b.conjugate();
      }
  } else {
    const LindbladGenerator gen = sim.model.generator();
    if (gen.block_diagonal(dosc)) {
      meta.path = "block";
      const ProductEvolution ev = evolve_product(sim, Matrix::Identity(4, 4) / 4.0, opts);
      meta.hygiene = ev.hygiene;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          Matrix e = Matrix::Zero(4, 4);
          e(i, j) = ev.blocks[4 * i + j].trace();
          images[4 * i + j] = std::move(e);
        }
    } else {
      meta.path = "full";
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) pairs.emplace_back(i, j);
      std::vector<Hygiene> hyg(pairs.size());
      parallel_for(pairs.size(), opts.jobs, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        Matrix eij = Matrix::Zero(4, 4);
        eij(i, j) = 1.0;
        const Matrix out =
            detail::evolve_operator(gen, kron(eij, sim.oscillator_state), t_final, ctl, i == j, opts, hyg[k]);
        images[4 * i + j] = partial_trace(out, space, {kQubit1, kQubit2});
      });
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) images[4 * i + j] = images[4 * j + i].adjoint();
      for (const auto& h : hyg) detail::merge(meta.hygiene, h);
    }
  }
  ch.ptm = ptm_from_images(images);
  ch.validate();
  return ch;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const GateSchedule& s) {
  return {{"theta", s.theta},
          {"t_g", s.t_g},
          {"n", s.n},
          {"m", s.m},
          {"soft_constraint_met", s.soft_constraint_met},
          {"detuning_used", s.detuning_used},
          {"closure_residual", s.closure_residual},
          {"j_bar", s.j_bar},
          {"theta_achieved", s.theta_achieved},
          {"phase_mismatch", s.phase_mismatch},
          {"phase_within_tolerance", s.phase_within_tolerance},
          {"g2_scale", s.g2_scale},
          {"approx", to_string(s.approx)},
          {"z_corrections", {{"rz1", s.z.rz1}, {"rz2", s.z.rz2}, {"global_phase", s.z.global_phase}}}};
}

inline GateSchedule schedule_from_json(const nlohmann::json& j) {
  GateSchedule s;
  s.theta = j.at("theta").get<double>();
  s.t_g = j.at("t_g").get<double>();
  s.n = j.at("n").get<long>();
  s.m = j.at("m").get<long>();
  s.soft_constraint_met = j.at("soft_constraint_met").get<bool>();
  s.detuning_used = j.at("detuning_used").get<double>();
  s.closure_residual = j.at("closure_residual").get<double>();
  s.j_bar = j.at("j_bar").get<double>();
  s.theta_achieved = j.at("theta_achieved").get<double>();
  s.phase_mismatch = j.at("phase_mismatch").get<double>();
  s.phase_within_tolerance = j.at("phase_within_tolerance").get<bool>();
  s.g2_scale = j.at("g2_scale").get<double>();
  s.approx = j.at("approx").get<std::string>() == "rwa" ? CouplingApprox::rwa : CouplingApprox::full;
  const auto& z = j.at("z_corrections");
  s.z = {z.at("rz1").get<double>(), z.at("rz2").get<double>(), z.at("global_phase").get<double>()};
  return s;
}

/// PTM as a row-major array plus a metadata block; doubles round-trip exactly.
inline nlohmann::json to_json(const GateChannel& ch) {
  nlohmann::json ptm = nlohmann::json::array();
  for (int k = 0; k < 16; ++k)
    for (int l = 0; l < 16; ++l) ptm.push_back(ch.ptm(k, l));
  const auto& m = ch.metadata;
  nlohmann::json meta = {{"frame", m.frame},
                         {"model_level", m.model_level},
                         {"path", m.path},
                         {"cutoff", m.cutoff},
                         {"rel_tol", m.rel_tol},
                         {"abs_tol", m.abs_tol},
                         {"t_final", m.t_final},
                         {"z_corrections_applied", m.z_corrections_applied},
                         {"hygiene",
                          {{"max_trace_deviation", m.hygiene.max_trace_deviation},
                           {"max_hermiticity_defect", m.hygiene.max_hermiticity_defect},
                           {"min_eigenvalue", m.hygiene.min_eigenvalue}}}};
  meta["schedule"] = m.schedule ? to_json(*m.schedule) : nlohmann::json(nullptr);
  return {{"basis", "two-qubit Paulis P_a(x)P_b at index 4a+b, order I,X,Y,Z, normalised by 1/2"},
          {"ptm", std::move(ptm)},
          {"metadata", std::move(meta)}};
}

inline GateChannel channel_from_json(const nlohmann::json& j) {
  GateChannel ch;
  const auto& ptm = j.at("ptm");
  if (!ptm.is_array() || ptm.size() != 256) throw Error(ErrorCode::config_error, "ptm must hold 256 numbers");
  for (int k = 0; k < 16; ++k)
    for (int l = 0; l < 16; ++l) ch.ptm(k, l) = ptm.at(16 * k + l).get<double>();
  const auto& m = j.at("metadata");
  auto& out = ch.metadata;
  out.frame = m.at("frame").get<std::string>();
  out.model_level = m.at("model_level").get<std::string>();
  out.path = m.at("path").get<std::string>();
  out.cutoff = m.at("cutoff").get<int>();
  out.rel_tol = m.at("rel_tol").get<double>();
  out.abs_tol = m.at("abs_tol").get<double>();
  out.t_final = m.at("t_final").get<double>();
  out.z_corrections_applied = m.at("z_corrections_applied").get<int>();
  const auto& h = m.at("hygiene");
  out.hygiene = {h.at("max_trace_deviation").get<double>(), h.at("max_hermiticity_defect").get<double>(),
                 h.at("min_eigenvalue").get<double>()};
  if (!m.at("schedule").is_null()) out.schedule = schedule_from_json(m.at("schedule"));
  return ch;
}

}  // namespace longigate
