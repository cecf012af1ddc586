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

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "longigate/algebra.hpp"
#include "longigate/integrator.hpp"
#include "longigate/model.hpp"

namespace longigate {

enum class DissipatorKind { photon_loss, qubit_decay, qubit_dephasing, collective_dephasing_modulated, squeezed_bath };

inline const char* to_string(DissipatorKind k) {
  switch (k) {
    case DissipatorKind::photon_loss: return "photon_loss";
    case DissipatorKind::qubit_decay: return "qubit_decay";
    case DissipatorKind::qubit_dephasing: return "qubit_dephasing";
    case DissipatorKind::collective_dephasing_modulated: return "collective_dephasing_modulated";
    case DissipatorKind::squeezed_bath: return "squeezed_bath";
  }
  return "?";
}

/**
 * rate(t) · D[jump], with D[x]ρ = xρx† − ½{x†x, ρ}.
 *
 * For squeezed_bath the entry stands for
 *   κ[(N+1)D[a] + N D[a†] + M(t) S[a†] + M*(t) S[a]],  S[x]ρ = xρx − ½{xx, ρ},
 * with κ = rate, a = jump, N = n_thermal and M = m_coefficient.
 */
struct Dissipator {
  DissipatorKind kind = DissipatorKind::photon_loss;
  std::string label;
  Waveform rate;
  Operator jump;
  double n_thermal = 0.0;
  Waveform m_coefficient;

  double rate_at(double t) const { return rate(t).real(); }

  void validate(std::span<const double> times) const {
    for (double t : times) {
      const cplx r = rate(t);
      if (!(r.real() >= -1e-12 * std::max(1.0, std::abs(r))) || std::abs(r.imag()) > 1e-9 * std::max(1.0, std::abs(r)))
        throw Error(ErrorCode::unphysical_params, "dissipator '" + label + "' has a negative or complex rate");
      if (kind == DissipatorKind::squeezed_bath) {
        const double m2 = std::norm(m_coefficient(t));
        if (m2 > n_thermal * (n_thermal + 1.0) + 1e-12)
          throw Error(ErrorCode::unphysical_params, "squeezed bath violates |M|^2 <= N(N+1)");
      }
    }
  }
};

struct DissipatorConventions {
  /// Rate multiplying D[σ_z] relative to γ_φ; ½ makes coherences decay as e^{−γ_φ t}.
  double dephasing_rate_factor = 0.5;
};

inline Dissipator photon_loss(double kappa, const HilbertSpace& space, std::size_t osc = kOscillator) {
  if (kappa < 0) throw Error(ErrorCode::unphysical_params, "kappa must be non-negative");
  return {DissipatorKind::photon_loss, "photon_loss", Waveform::constant(kappa),
          embed(annihilation(space.dim(osc)), osc, space), 0.0, {}};
}

/// Γ = 2κ(g/2δ)²
inline double polaron_dephasing_rate(const SystemParams& p) {
  const double delta = p.omega_r - p.omega_m;
  if (delta == 0.0) throw Error(ErrorCode::resonant_modulation, "delta = 0");
  const double x = p.g1 / (2.0 * delta);
  return 2.0 * p.kappa * x * x;
}

namespace detail {
inline void require_equal_couplings(const SystemParams& p) {
  if (std::abs(p.g1 - p.g2) > 1e-12 * std::max(std::abs(p.g1), std::abs(p.g2)))
    throw Error(ErrorCode::unsupported_model, "effective polaron model needs g1 == g2; use the lab or rotating model");
}
}  // namespace detail

/// Γ[1 − cos(δt)] D[σ_{z1} + σ_{z2}]
inline Dissipator polaron_dephasing_dissipator(const SystemParams& p, const HilbertSpace& space) {
  detail::require_equal_couplings(p);
  const double gamma = polaron_dephasing_rate(p);
  return {DissipatorKind::collective_dephasing_modulated, "collective_dephasing",
          Waveform::one_minus_cosine(gamma, p.omega_r - p.omega_m),
          embed(pauli_z(), kQubit1, space) + embed(pauli_z(), kQubit2, space), 0.0, {}};
}

/// Polaron-frame dephasing with Γ → e^{−2r}Γ, halved again for the filtered fixed-angle variant.
inline Dissipator effective_squeezed_dephasing(const SystemParams& p, const HilbertSpace& space) {
  if (!p.squeezing) throw Error(ErrorCode::invalid_argument, "squeezing parameters missing");
  Dissipator d = polaron_dephasing_dissipator(p, space);
  double scale = std::exp(-2.0 * p.squeezing->r);
  if (p.squeezing->variant == SqueezeVariant::fixed_angle_filtered) scale *= 0.5;
  d.rate = d.rate.scaled(scale);
  d.label = "effective_squeezed_dephasing";
  return d;
}

/**
 * Broadband squeezed-vacuum bath on one oscillator.
 *
 * M is specified in the frame rotating at ω_r, where
 *   M_r(t) = −e^{i(χδt + 2φ₀)} sinh r cosh r,  χ = 1 (rotating angle) or 0 (fixed angle),
 * and expressed in the simulation frame rotating at `frame_frequency` by the
 * factor e^{−2i(ω_r − frame_frequency)t}.
 */
inline Dissipator squeezed_bath_dissipator(const SystemParams& p, const HilbertSpace& space, double frame_frequency,
                                           std::size_t osc = kOscillator) {
  if (!p.squeezing) throw Error(ErrorCode::invalid_argument, "squeezing parameters missing");
  const auto& sq = *p.squeezing;
  const double sh = std::sinh(sq.r), ch = std::cosh(sq.r);
  const double chi = sq.variant == SqueezeVariant::rotating_angle ? 1.0 : 0.0;
  const double osc_freq = p.two_oscillator ? (osc == kOscillator ? p.two_oscillator->omega_a : p.two_oscillator->omega_b)
                                           : p.omega_r;
  const double omega = chi * (osc_freq - p.omega_m) - 2.0 * (osc_freq - frame_frequency);
  const cplx amp = -std::exp(kI * (2.0 * sq.phi0)) * (sh * ch);
  Dissipator d{DissipatorKind::squeezed_bath, "squeezed_bath", Waveform::constant(p.kappa),
               embed(annihilation(space.dim(osc)), osc, space), sh * sh, Waveform::exp_i(amp, omega)};
  d.validate(std::span<const double>{});
  if (std::norm(amp) > d.n_thermal * (d.n_thermal + 1.0) + 1e-12)
    throw Error(ErrorCode::unphysical_params, "squeezed bath violates |M|^2 <= N(N+1)");
  return d;
}

/// Per qubit: D[σ_−] at 1/T1 and D[σ_z] at γ_φ/2, γ_φ = 1/T2 − 1/(2T1).
inline std::vector<Dissipator> qubit_noise_dissipators(const SystemParams& p, const HilbertSpace& space,
                                                       const DissipatorConventions& conv = {}) {
  if (!p.qubit_noise) throw Error(ErrorCode::invalid_argument, "qubit noise parameters missing");
  std::vector<Dissipator> out;
  const std::size_t qubits[] = {kQubit1, kQubit2};
  for (int q = 0; q < 2; ++q) {
    const auto& n = (*p.qubit_noise)[q];
    if (n.t2 > 2.0 * n.t1) throw Error(ErrorCode::unphysical_params, "T2 must not exceed 2*T1");
    const double gamma_phi = 1.0 / n.t2 - 1.0 / (2.0 * n.t1);
    const std::string tag = std::to_string(q + 1);
    out.push_back({DissipatorKind::qubit_decay, "qubit_decay_" + tag, Waveform::constant(1.0 / n.t1),
                   embed(sigma_minus(), qubits[q], space), 0.0, {}});
    if (gamma_phi > 0.0)
      out.push_back({DissipatorKind::qubit_dephasing, "qubit_dephasing_" + tag,
                     Waveform::constant(conv.dephasing_rate_factor * gamma_phi), embed(pauli_z(), qubits[q], space), 0.0,
                     {}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generator: ρ̇ = Σ_k c_k(t) A_k ρ B_k with sparse A, B (absent = identity).

class LindbladGenerator {
 public:
  struct Term {
    Waveform coefficient;
    std::optional<SparseMatrix> left;
    std::optional<SparseMatrix> right;
  };

  struct Workspace {
    Matrix a, b;
  };

  LindbladGenerator() = default;
  explicit LindbladGenerator(Eigen::Index dim) : dim_(dim) {}

  Eigen::Index dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  void add(Waveform c, std::optional<Matrix> left, std::optional<Matrix> right) {
    Term t{std::move(c), {}, {}};
    if (left) t.left = to_sparse(*left);
    if (right) t.right = to_sparse(*right);
    terms_.push_back(std::move(t));
  }

  void add_hamiltonian(const Waveform& c, const Matrix& h) {
    add(c.scaled(-kI), h, std::nullopt);
    add(c.scaled(kI), std::nullopt, h);
  }

  void add_dissipator(const Waveform& rate, const Matrix& l) {
    const Matrix ldl = l.adjoint() * l;
    add(rate, l, Matrix(l.adjoint()));
    add(rate.scaled(-0.5), ldl, std::nullopt);
    add(rate.scaled(-0.5), std::nullopt, ldl);
  }

  /// c · S[x], S[x]ρ = xρx − ½{xx, ρ}
  void add_two_photon(const Waveform& c, const Matrix& x) {
    const Matrix xx = x * x;
    add(c, x, x);
    add(c.scaled(-0.5), xx, std::nullopt);
    add(c.scaled(-0.5), std::nullopt, xx);
  }

  /// Folds constant one-sided terms into a single left and a single right operator.
  void compress() {
    std::vector<Term> kept;
    SparseMatrix left_sum(dim_, dim_), right_sum(dim_, dim_);
    bool has_left = false, has_right = false;
    for (auto& t : terms_) {
      if (t.coefficient.is_constant() && (t.left.has_value() != t.right.has_value())) {
        const cplx c = t.coefficient(0.0);
        if (t.left) {
          left_sum += c * *t.left;
          has_left = true;
        } else {
          right_sum += c * *t.right;
          has_right = true;
        }
      } else {
        kept.push_back(std::move(t));
      }
    }
    if (has_left) {
      left_sum.prune(cplx(0.0));
      kept.push_back({Waveform::constant(1.0), left_sum, std::nullopt});
    }
    if (has_right) {
      right_sum.prune(cplx(0.0));
      kept.push_back({Waveform::constant(1.0), std::nullopt, right_sum});
    }
    terms_ = std::move(kept);
  }

  void apply(double t, const Matrix& rho, Matrix& out, Workspace& ws) const {
    out.setZero(rho.rows(), rho.cols());
    for (const auto& term : terms_) {
      const cplx c = term.coefficient(t);
      if (c == cplx(0.0)) continue;
      if (term.left && term.right) {
        ws.a.noalias() = *term.left * rho;
        ws.b.noalias() = ws.a * *term.right;
        out += c * ws.b;
      } else if (term.left) {
        ws.a.noalias() = *term.left * rho;
        out += c * ws.a;
      } else if (term.right) {
        ws.a.noalias() = rho * *term.right;
        out += c * ws.a;
      } else {
        out += c * rho;
      }
    }
  }

  /// True when every operator is block diagonal in blocks of `block_dim`.
  bool block_diagonal(Eigen::Index block_dim) const {
    auto check = [&](const SparseMatrix& m) {
      for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
          if (it.row() / block_dim != it.col() / block_dim) return false;
      return true;
    };
    for (const auto& t : terms_) {
      if (t.left && !check(*t.left)) return false;
      if (t.right && !check(*t.right)) return false;
    }
    return true;
  }

  /**
   * Generator for the (row_block, col_block) sub-matrix of ρ when every
   * operator is block diagonal: A_k restricted to row_block, B_k to col_block.
   */
  LindbladGenerator restrict_to_blocks(Eigen::Index row_block, Eigen::Index col_block, Eigen::Index block_dim) const {
    LindbladGenerator g(block_dim);
    for (const auto& t : terms_) {
      Term r{t.coefficient, {}, {}};
      if (t.left) r.left = SparseMatrix(t.left->block(row_block * block_dim, row_block * block_dim, block_dim, block_dim));
      if (t.right) r.right = SparseMatrix(t.right->block(col_block * block_dim, col_block * block_dim, block_dim, block_dim));
      if ((r.left && r.left->nonZeros() == 0) || (r.right && r.right->nonZeros() == 0)) continue;
      g.terms_.push_back(std::move(r));
    }
    return g;
  }

  double max_frequency() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, t.coefficient.max_frequency());
    return m;
  }

 private:
  Eigen::Index dim_ = 0;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------

enum class Frame { lab, rotating, polaron };

inline const char* to_string(Frame f) {
  switch (f) {
    case Frame::lab: return "lab";
    case Frame::rotating: return "rotating";
    case Frame::polaron: return "polaron";
  }
  return "?";
}

struct LindbladModel {
  OperatorSchedule hamiltonian;
  std::vector<Dissipator> dissipators;
  double t_final = 0.0;
  Frame frame = Frame::rotating;

  const HilbertSpace& space() const { return hamiltonian.space(); }

  void validate() const {
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw Error(ErrorCode::invalid_argument, "t_final must be finite and >= 0");
    std::vector<double> probe;
    constexpr int kProbe = 64;
    for (int k = 0; k <= kProbe; ++k) probe.push_back(t_final * k / kProbe);
    for (const auto& d : dissipators) {
      if (!(d.jump.space() == space())) throw Error(ErrorCode::dimension_mismatch, "dissipator on a different space");
      d.validate(probe);
    }
  }

  /// Fastest explicit modulation frequency in H(t) or any rate schedule.
  double max_frequency() const {
    double m = hamiltonian.max_frequency();
    for (const auto& d : dissipators) m = std::max({m, d.rate.max_frequency(), d.m_coefficient.max_frequency()});
    return m;
  }

  /// An eighth of the fastest modulation period, so no modulation is stepped over.
  double max_step_hint() const {
    const double w = max_frequency();
    return w > 0.0 ? (kTwoPi / w) / 8.0 : std::numeric_limits<double>::infinity();
  }

  LindbladGenerator generator() const {
    LindbladGenerator g(space().dim());
    for (const auto& term : hamiltonian.terms()) g.add_hamiltonian(term.coefficient, term.op.matrix());
    for (const auto& d : dissipators) {
      const Matrix& a = d.jump.matrix();
      if (d.kind == DissipatorKind::squeezed_bath) {
        const Matrix ad = a.adjoint();
        g.add_dissipator(d.rate.scaled(d.n_thermal + 1.0), a);
        if (d.n_thermal > 0.0) g.add_dissipator(d.rate.scaled(d.n_thermal), ad);
        if (!d.m_coefficient.terms().empty()) {
          const cplx kappa = d.rate(0.0);
          if (!d.rate.is_constant()) throw Error(ErrorCode::unsupported_model, "squeezed bath needs a constant kappa");
          g.add_two_photon(d.m_coefficient.scaled(kappa), ad);
          g.add_two_photon(d.m_coefficient.conj().scaled(kappa), a);
        }
      } else {
        g.add_dissipator(d.rate, a);
      }
    }
    g.compress();
    return g;
  }
};

struct CutoffEscalation {
  bool enabled = false;
  double fidelity_delta_threshold = 1e-7;
};

struct SolverConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  int fock_cutoff = 12;
  CutoffEscalation cutoff_escalation;

  void validate() const {
    for (double tol : {rel_tol, abs_tol})
      if (!(tol > 0.0) || tol > 1e-3) throw Error(ErrorCode::invalid_argument, "solver tolerances must lie in (0, 1e-3]");
    if (!(max_step > 0.0)) throw Error(ErrorCode::invalid_argument, "max_step must be positive");
    if (fock_cutoff < 4) throw Error(ErrorCode::invalid_argument, "Fock cutoff must be >= 4");
    if (!(cutoff_escalation.fidelity_delta_threshold > 0.0))
      throw Error(ErrorCode::invalid_argument, "fidelity_delta_threshold must be positive");
  }

  StepControl step_control(double hint = std::numeric_limits<double>::infinity()) const {
    StepControl c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.max_step = std::min(max_step, hint);
    return c;
  }
};

/// Raw linear propagation of any operator (not necessarily a density matrix).
inline Matrix propagate(const LindbladGenerator& g, Matrix x0, double t0, double t1, const StepControl& ctl,
                        IntegrationStats* stats = nullptr) {
  LindbladGenerator::Workspace ws;
  auto rhs = [&](double t, const Matrix& x, Matrix& dx) { g.apply(t, x, dx, ws); };
  return integrate_dopri5(rhs, std::move(x0), t0, t1, ctl, stats);
}

/// ψ̇ = −iH(t)ψ with constant terms folded into one sparse operator.
class KetGenerator {
 public:
  explicit KetGenerator(const OperatorSchedule& h) : constant_(h.space().dim(), h.space().dim()) {
    for (const auto& term : h.terms()) {
      if (term.coefficient.is_constant()) constant_ += (-kI * term.coefficient(0.0)) * to_sparse(term.op.matrix());
      else pieces_.push_back({term.coefficient.scaled(-kI), to_sparse(term.op.matrix())});
    }
  }

  void apply(double t, const Vector& y, Vector& dy, Vector& scratch) const {
    dy.noalias() = constant_ * y;
    for (const auto& p : pieces_) {
      scratch.noalias() = p.op * y;
      dy += p.c(t) * scratch;
    }
  }

 private:
  struct Piece {
    Waveform c;
    SparseMatrix op;
  };
  SparseMatrix constant_;
  std::vector<Piece> pieces_;
};

/// Schrödinger propagation for dissipator-free models.
inline Vector propagate_ket(const OperatorSchedule& h, Vector psi0, double t0, double t1, const StepControl& ctl,
                            IntegrationStats* stats = nullptr) {
  const KetGenerator gen(h);
  Vector scratch;
  auto rhs = [&](double t, const Vector& y, Vector& dy) { gen.apply(t, y, dy, scratch); };
  return integrate_dopri5(rhs, std::move(psi0), t0, t1, ctl, stats);
}

struct Hygiene {
  double max_trace_deviation = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
};

struct TrajectorySample {
  double t = 0.0;
  double trace = 0.0;
  double purity = 0.0;
  std::vector<cplx> observables;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<std::string> observable_names;
  DensityState final_state;
  Hygiene hygiene;
  IntegrationStats stats;

  void write_csv(std::ostream& os) const {
    os << "t,tr_rho,purity";
    for (const auto& n : observable_names) os << ",re_" << n << ",im_" << n;
    os << '\n';
    os.precision(17);
    for (const auto& s : samples) {
      os << s.t << ',' << s.trace << ',' << s.purity;
      for (const auto& v : s.observables) os << ',' << v.real() << ',' << v.imag();
      os << '\n';
    }
  }
};

struct EvolveOptions {
  /// Evenly spaced sample count over [0, t_final] (both ends included); eigenvalues are checked there.
  int samples = 17;
  std::vector<std::pair<std::string, Operator>> observables;
  double trace_error = 1e-6;
  double min_eigenvalue_error = -1e-5;
};

/**
 * Integrates ρ̇ = −i[H(t), ρ] + Σ dissipators over [0, t_final].
 *
 * The trace is never renormalised: drift beyond `trace_error` raises, as does
 * a sampled eigenvalue below `min_eigenvalue_error`.
 */
inline Trajectory evolve(const LindbladModel& model, const DensityState& rho0, const SolverConfig& cfg,
                         const EvolveOptions& opts = {}) {
  cfg.validate();
  model.validate();
  if (!(rho0.space() == model.space())) throw Error(ErrorCode::dimension_mismatch, "initial state on a different space");
  const LindbladGenerator gen = model.generator();

  Trajectory traj;
  for (const auto& [name, op] : opts.observables) traj.observable_names.push_back(name);
  auto record = [&](double t, const Matrix& rho) {
    TrajectorySample s;
    s.t = t;
    s.trace = rho.trace().real();
    s.purity = (rho.cwiseAbs2()).sum();
    for (const auto& [name, op] : opts.observables) s.observables.push_back((op.matrix() * rho).trace());
    const double ev = min_hermitian_eigenvalue(rho);
    traj.hygiene.min_eigenvalue = std::min(traj.hygiene.min_eigenvalue, ev);
    if (ev < opts.min_eigenvalue_error)
      throw Error(ErrorCode::integration_failure, "negative eigenvalue during evolution (cutoff or tolerance too loose)");
    traj.samples.push_back(std::move(s));
  };
  auto check = [&](double, const Matrix& rho) {
    const double dtr = std::abs(rho.trace() - cplx(1.0));
    traj.hygiene.max_trace_deviation = std::max(traj.hygiene.max_trace_deviation, dtr);
    traj.hygiene.max_hermiticity_defect = std::max(traj.hygiene.max_hermiticity_defect, hermiticity_defect(rho));
    if (dtr > opts.trace_error)
      throw Error(ErrorCode::integration_failure, "trace drift exceeds tolerance (tolerance too loose or cutoff too small)");
    if (!all_finite(rho)) throw Error(ErrorCode::non_finite, "non-finite density matrix");
  };

  const int ns = std::max(opts.samples, 2);
  std::vector<double> stops;
  for (int k = 1; k < ns; ++k) stops.push_back(model.t_final * k / (ns - 1));
  record(0.0, rho0.matrix());
  check(0.0, rho0.matrix());

  LindbladGenerator::Workspace ws;
  auto rhs = [&](double t, const Matrix& x, Matrix& dx) { gen.apply(t, x, dx, ws); };
  Matrix final = integrate_dopri5(
      rhs, Matrix(rho0.matrix()), 0.0, model.t_final, cfg.step_control(model.max_step_hint()), stops, check,
      [&](std::size_t k, const Matrix& rho) { record(stops[k], rho); }, &traj.stats);
  if (model.t_final == 0.0) traj.samples.resize(1);
  DensityState::Tolerances tol;
  tol.trace = opts.trace_error;
  tol.hermiticity = 1e-6;
  tol.min_eigenvalue = opts.min_eigenvalue_error;
  traj.final_state = DensityState(model.space(), std::move(final), tol);
  return traj;
}

// ---------------------------------------------------------------------------

template <class R>
struct EscalationResult {
  R result;
  int cutoff = 0;
  std::vector<std::pair<int, double>> history;  ///< (cutoff, metric) in run order
};

/**
 * Reruns `run(cutoff)` with the cutoff raised by `step` until `metric` moves
 * by less than the configured threshold. The returned result is the one at
 * the first cutoff shown to be converged.
 */
template <class Run, class Metric>
auto escalate_cutoff(Run&& run, Metric&& metric, const SolverConfig& cfg, int step = 4, int max_cutoff = 64)
    -> EscalationResult<decltype(run(0))> {
  using R = decltype(run(0));
  int cutoff = cfg.fock_cutoff;
  R current = run(cutoff);
  double m_current = metric(current);
  EscalationResult<R> out{current, cutoff, {{cutoff, m_current}}};
  while (true) {
    const int next = cutoff + step;
    if (next > max_cutoff) throw Error(ErrorCode::cutoff_not_converged, "cutoff exceeds " + std::to_string(max_cutoff));
    R candidate = run(next);
    const double m_next = metric(candidate);
    out.history.emplace_back(next, m_next);
    if (std::abs(m_next - m_current) < cfg.cutoff_escalation.fidelity_delta_threshold) {
      out.result = std::move(current);
      out.cutoff = cutoff;
      return out;
    }
    cutoff = next;
    current = std::move(candidate);
    m_current = m_next;
  }
}

}  // namespace longigate
