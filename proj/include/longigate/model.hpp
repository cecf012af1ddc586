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
#include <utility>
#include <vector>

#include "longigate/algebra.hpp"

namespace longigate {

// ---------------------------------------------------------------------------
// Parameters. All frequencies and rates are angular (rad/s), times in seconds.

enum class SqueezeVariant { rotating_angle, fixed_angle_filtered };

inline const char* to_string(SqueezeVariant v) {
  return v == SqueezeVariant::rotating_angle ? "rotating_angle" : "fixed_angle_filtered";
}

inline double squeezing_db_from_r(double r) { return 10.0 * std::log10(std::exp(2.0 * r)); }
inline double squeezing_r_from_db(double db) { return db * std::log(10.0) / 20.0; }

struct SqueezeParams {
  double r = 0.0;
  SqueezeVariant variant = SqueezeVariant::rotating_angle;
  double phi0 = 0.0;

  double db() const { return squeezing_db_from_r(r); }
};

struct QubitNoise {
  double t1 = 0.0;
  double t2 = 0.0;
};

struct TwoOscillatorParams {
  double omega_a = 0.0;
  double omega_b = 0.0;
  double g_ab = 0.0;
};

struct SystemParams {
  double omega_r = 0.0;
  double omega_a1 = 0.0;
  double omega_a2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double omega_m = 0.0;
  double kappa = 0.0;
  std::optional<TwoOscillatorParams> two_oscillator;
  std::optional<std::array<QubitNoise, 2>> qubit_noise;
  std::optional<SqueezeParams> squeezing;

  /// Oscillator frequency the modulation is detuned from (mean of the pair for two oscillators).
  double reference_frequency() const {
    return two_oscillator ? 0.5 * (two_oscillator->omega_a + two_oscillator->omega_b) : omega_r;
  }
  /// δ = ω_r − ω_m, or δ̄ for two oscillators.
  double delta() const { return reference_frequency() - omega_m; }

  /// Frequencies positive, rates non-negative, T2 ≤ 2 T1. Does not require δ ≠ 0.
  void validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    for (double x : {omega_r, omega_a1, omega_a2, g1, g2, omega_m, kappa})
      if (!finite(x)) throw Error(ErrorCode::non_finite, "system parameter is not finite");
    if (omega_r <= 0 || omega_a1 <= 0 || omega_a2 <= 0 || omega_m <= 0)
      throw Error(ErrorCode::unphysical_params, "frequencies must be positive");
    if (kappa < 0) throw Error(ErrorCode::unphysical_params, "kappa must be non-negative");
    if (two_oscillator) {
      const auto& t = *two_oscillator;
      if (!finite(t.omega_a) || !finite(t.omega_b) || !finite(t.g_ab))
        throw Error(ErrorCode::non_finite, "two-oscillator parameter is not finite");
      if (t.omega_a <= 0 || t.omega_b <= 0) throw Error(ErrorCode::unphysical_params, "oscillator frequencies must be positive");
    }
    if (qubit_noise) {
      for (const auto& q : *qubit_noise) {
        if (!(q.t1 > 0) || !(q.t2 > 0)) throw Error(ErrorCode::unphysical_params, "T1 and T2 must be positive");
        if (q.t2 > 2.0 * q.t1) throw Error(ErrorCode::unphysical_params, "T2 must not exceed 2*T1");
      }
    }
    if (squeezing) {
      if (!(squeezing->r >= 0) || !finite(squeezing->phi0))
        throw Error(ErrorCode::unphysical_params, "squeezing parameter r must be >= 0");
    }
  }
};

enum class CouplingApprox {
  full,  ///< both the 1/δ and the counter-rotating 1/(ω_r+ω_m) contributions
  rwa,   ///< 1/δ only, the coupling realised by the rotating-wave Hamiltonian
};

inline const char* to_string(CouplingApprox a) { return a == CouplingApprox::full ? "full" : "rwa"; }

// ---------------------------------------------------------------------------
// Time-dependent coefficients: c(t) = Σ_k c_k e^{i ω_k t}.

class Waveform {
 public:
  static Waveform constant(cplx c) { return Waveform({{c, 0.0}}); }
  static Waveform exp_i(cplx amplitude, double omega) { return Waveform({{amplitude, omega}}); }
  static Waveform cosine(double amplitude, double omega) {
    return Waveform({{0.5 * amplitude, omega}, {0.5 * amplitude, -omega}});
  }
  /// amplitude · (1 − cos ωt)
  static Waveform one_minus_cosine(double amplitude, double omega) {
    return Waveform({{amplitude, 0.0}, {-0.5 * amplitude, omega}, {-0.5 * amplitude, -omega}});
  }

  Waveform() = default;
  explicit Waveform(std::vector<std::pair<cplx, double>> terms) : terms_(std::move(terms)) {}

  cplx operator()(double t) const {
    cplx s = 0.0;
    for (const auto& [c, w] : terms_) s += w == 0.0 ? c : c * std::exp(kI * (w * t));
    return s;
  }

  Waveform conj() const {
    std::vector<std::pair<cplx, double>> out;
    for (const auto& [c, w] : terms_) out.emplace_back(std::conj(c), -w);
    return Waveform(std::move(out));
  }

  Waveform scaled(cplx s) const {
    std::vector<std::pair<cplx, double>> out;
    for (const auto& [c, w] : terms_) out.emplace_back(s * c, w);
    return Waveform(std::move(out));
  }

  bool is_constant() const {
    for (const auto& t : terms_)
      if (t.second != 0.0 && t.first != cplx(0.0)) return false;
    return true;
  }

  double max_frequency() const {
    double m = 0.0;
    for (const auto& [c, w] : terms_)
      if (c != cplx(0.0)) m = std::max(m, std::abs(w));
    return m;
  }

  const std::vector<std::pair<cplx, double>>& terms() const { return terms_; }

 private:
  std::vector<std::pair<cplx, double>> terms_;
};

/// H(t) = Σ_k c_k(t) O_k on a fixed space.
class OperatorSchedule {
 public:
  struct Term {
    Waveform coefficient;
    Operator op;
  };

  explicit OperatorSchedule(HilbertSpace space) : space_(std::move(space)) {}

  void add(Waveform coefficient, Operator op) {
    if (!(op.space() == space_)) throw Error(ErrorCode::dimension_mismatch, "schedule term on a different space");
    terms_.push_back({std::move(coefficient), std::move(op)});
  }
  void add(cplx constant, Operator op) { add(Waveform::constant(constant), std::move(op)); }

  Operator at(double t) const {
    if (!std::isfinite(t)) throw Error(ErrorCode::non_finite, "time is not finite");
    Matrix m = Matrix::Zero(space_.dim(), space_.dim());
    for (const auto& term : terms_) m += term.coefficient(t) * term.op.matrix();
    return {space_, std::move(m)};
  }

  bool time_independent() const {
    for (const auto& term : terms_)
      if (!term.coefficient.is_constant()) return false;
    return true;
  }

  double max_frequency() const {
    double m = 0.0;
    for (const auto& term : terms_) m = std::max(m, term.coefficient.max_frequency());
    return m;
  }

  const HilbertSpace& space() const { return space_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  HilbertSpace space_;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Spaces

inline constexpr std::size_t kQubit1 = 0;
inline constexpr std::size_t kQubit2 = 1;
inline constexpr std::size_t kOscillator = 2;
inline constexpr std::size_t kOscillatorB = 3;

inline HilbertSpace gate_space(int cutoff) {
  const int c[] = {cutoff};
  return HilbertSpace::qubits_then_oscillators(2, c);
}

inline HilbertSpace remote_space(int cutoff) {
  const int c[] = {cutoff, cutoff};
  return HilbertSpace::qubits_then_oscillators(2, c);
}

struct BuildOptions {
  int fock_cutoff = 12;
  /// Angular frequency of the oscillator rotating frame; ω_m when unset.
  std::optional<double> oscillator_frame;
  /// ½ω_a σ_z terms; they commute with every other term, so drivers drop them
  /// and work in the qubit rotating frame.
  bool include_qubit_terms = true;
};

namespace detail {

inline void require_cutoff(const BuildOptions& o) {
  if (o.fock_cutoff < 2) throw Error(ErrorCode::invalid_argument, "Fock cutoff must be set (>= 2)");
}

inline void add_qubit_terms(OperatorSchedule& h, const SystemParams& p, const BuildOptions& o) {
  if (!o.include_qubit_terms) return;
  const auto& s = h.space();
  h.add(0.5 * p.omega_a1, embed(pauli_z(), kQubit1, s));
  h.add(0.5 * p.omega_a2, embed(pauli_z(), kQubit2, s));
}

inline void require_single_oscillator(const SystemParams& p) {
  if (p.two_oscillator) throw Error(ErrorCode::unsupported_model, "builder needs single-oscillator parameters");
}

}  // namespace detail

/// ω_r a†a + ½ω_{a1}σ_{z1} + ½ω_{a2}σ_{z2} + Σ_i g_i cos(ω_m t) σ_{zi}(a† + a)
inline OperatorSchedule lab_hamiltonian_schedule(const SystemParams& p, const BuildOptions& o = {}) {
  detail::require_cutoff(o);
  detail::require_single_oscillator(p);
  const auto space = gate_space(o.fock_cutoff);
  OperatorSchedule h(space);
  const Matrix a = annihilation(o.fock_cutoff);
  h.add(p.omega_r, embed(number_operator(o.fock_cutoff), kOscillator, space));
  detail::add_qubit_terms(h, p, o);
  const Operator x = embed(Matrix(a + a.adjoint()), kOscillator, space);
  const Operator z1 = embed(pauli_z(), kQubit1, space);
  const Operator z2 = embed(pauli_z(), kQubit2, space);
  if (p.g1 != 0.0) h.add(Waveform::cosine(p.g1, p.omega_m), z1 * x);
  if (p.g2 != 0.0) h.add(Waveform::cosine(p.g2, p.omega_m), z2 * x);
  return h;
}

inline Operator lab_hamiltonian(const SystemParams& p, double t, const BuildOptions& o = {}) {
  return lab_hamiltonian_schedule(p, o).at(t);
}

/**
 * Oscillator frame rotating at ω_f (default ω_m):
 *   (ω_r − ω_f) a†a + qubit terms
 *     + Σ_i (g_i/2) σ_{zi} [a† (e^{i(ω_f−ω_m)t} + e^{i(ω_f+ω_m)t}) + H.c.].
 * For ω_f = ω_m this is δa†a + Σ_i (g_i/2)σ_{zi}(a† + a + a†e^{2iω_m t} + a e^{−2iω_m t}).
 * With `rwa` the ω_f + ω_m terms are dropped; at ω_f = ω_m the result is time independent.
 */
inline OperatorSchedule rotating_hamiltonian_schedule(const SystemParams& p, bool rwa, const BuildOptions& o = {}) {
  detail::require_cutoff(o);
  detail::require_single_oscillator(p);
  const double wf = o.oscillator_frame.value_or(p.omega_m);
  const auto space = gate_space(o.fock_cutoff);
  OperatorSchedule h(space);
  const Matrix a = annihilation(o.fock_cutoff);
  if (p.omega_r != wf) h.add(p.omega_r - wf, embed(number_operator(o.fock_cutoff), kOscillator, space));
  detail::add_qubit_terms(h, p, o);
  if (p.g1 == 0.0 && p.g2 == 0.0) return h;
  const Operator zsum = 0.5 * p.g1 * embed(pauli_z(), kQubit1, space) + 0.5 * p.g2 * embed(pauli_z(), kQubit2, space);
  const Operator ea = embed(a, kOscillator, space);
  const Operator ead = ea.adjoint();
  if (wf == p.omega_m) {
    h.add(1.0, zsum * (ea + ead));
  } else {
    h.add(Waveform::exp_i(1.0, wf - p.omega_m), zsum * ead);
    h.add(Waveform::exp_i(1.0, p.omega_m - wf), zsum * ea);
  }
  if (!rwa) {
    h.add(Waveform::exp_i(1.0, wf + p.omega_m), zsum * ead);
    h.add(Waveform::exp_i(1.0, -(wf + p.omega_m)), zsum * ea);
  }
  return h;
}

inline Operator rotating_hamiltonian(const SystemParams& p, double t, bool rwa, const BuildOptions& o = {}) {
  return rotating_hamiltonian_schedule(p, rwa, o).at(t);
}

namespace detail {
inline const TwoOscillatorParams& require_two(const SystemParams& p) {
  if (!p.two_oscillator) throw Error(ErrorCode::unsupported_model, "two-oscillator parameters missing");
  return *p.two_oscillator;
}
}  // namespace detail

/// Two qubits on separate oscillators coupled by −g_ab (a† − a)(b† − b), lab frame.
inline OperatorSchedule remote_lab_hamiltonian_schedule(const SystemParams& p, const BuildOptions& o = {}) {
  detail::require_cutoff(o);
  const auto& two = detail::require_two(p);
  const auto space = remote_space(o.fock_cutoff);
  OperatorSchedule h(space);
  const Matrix a = annihilation(o.fock_cutoff);
  const Matrix n = number_operator(o.fock_cutoff);
  const Operator ea = embed(a, kOscillator, space), eb = embed(a, kOscillatorB, space);
  h.add(two.omega_a, embed(n, kOscillator, space));
  h.add(two.omega_b, embed(n, kOscillatorB, space));
  detail::add_qubit_terms(h, p, o);
  if (p.g1 != 0.0) h.add(Waveform::cosine(p.g1, p.omega_m), embed(pauli_z(), kQubit1, space) * (ea + ea.adjoint()));
  if (p.g2 != 0.0) h.add(Waveform::cosine(p.g2, p.omega_m), embed(pauli_z(), kQubit2, space) * (eb + eb.adjoint()));
  if (two.g_ab != 0.0) h.add(-two.g_ab, (ea.adjoint() - ea) * (eb.adjoint() - eb));
  return h;
}

/// Two-oscillator Hamiltonian with both oscillators in the frame rotating at ω_f (default ω_m).
inline OperatorSchedule remote_hamiltonian_schedule(const SystemParams& p, bool rwa, const BuildOptions& o = {}) {
  detail::require_cutoff(o);
  const auto& two = detail::require_two(p);
  const double wf = o.oscillator_frame.value_or(p.omega_m);
  const auto space = remote_space(o.fock_cutoff);
  OperatorSchedule h(space);
  const Matrix a = annihilation(o.fock_cutoff);
  const Matrix n = number_operator(o.fock_cutoff);
  const Operator ea = embed(a, kOscillator, space), eb = embed(a, kOscillatorB, space);
  const Operator ead = ea.adjoint(), ebd = eb.adjoint();
  if (two.omega_a != wf) h.add(two.omega_a - wf, embed(n, kOscillator, space));
  if (two.omega_b != wf) h.add(two.omega_b - wf, embed(n, kOscillatorB, space));
  detail::add_qubit_terms(h, p, o);
  const Operator z1 = 0.5 * p.g1 * embed(pauli_z(), kQubit1, space);
  const Operator z2 = 0.5 * p.g2 * embed(pauli_z(), kQubit2, space);
  if (wf == p.omega_m) {
    h.add(1.0, z1 * (ea + ead) + z2 * (eb + ebd));
  } else {
    h.add(Waveform::exp_i(1.0, wf - p.omega_m), z1 * ead + z2 * ebd);
    h.add(Waveform::exp_i(1.0, p.omega_m - wf), z1 * ea + z2 * eb);
  }
  if (two.g_ab != 0.0) h.add(two.g_ab, ead * eb + ea * ebd);
  if (!rwa) {
    h.add(Waveform::exp_i(1.0, wf + p.omega_m), z1 * ead + z2 * ebd);
    h.add(Waveform::exp_i(1.0, -(wf + p.omega_m)), z1 * ea + z2 * eb);
    if (two.g_ab != 0.0) {
      h.add(Waveform::exp_i(-two.g_ab, 2.0 * wf), ead * ebd);
      h.add(Waveform::exp_i(-two.g_ab, -2.0 * wf), ea * eb);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Effective couplings

inline double effective_coupling(const SystemParams& p, CouplingApprox approx = CouplingApprox::full) {
  const double delta = p.omega_r - p.omega_m;
  if (delta == 0.0)
    throw Error(ErrorCode::resonant_modulation, "delta = 0: modulation resonant with the oscillator (readout regime)");
  double inv = 1.0 / delta;
  if (approx == CouplingApprox::full) inv += 1.0 / (p.omega_r + p.omega_m);
  return -0.5 * p.g1 * p.g2 * inv;
}

/// g_ab √(1 + ζ²), written so the g_ab → 0 limit is finite.
inline double normal_mode_splitting(const TwoOscillatorParams& t) {
  return std::hypot(t.g_ab, 0.5 * (t.omega_b - t.omega_a));
}

inline double effective_coupling_remote(const SystemParams& p) {
  const auto& two = detail::require_two(p);
  if (two.g_ab == 0.0) return 0.0;
  const double dbar = p.delta();
  const double split = normal_mode_splitting(two);
  const double denom = dbar * dbar - split * split;
  if (denom == 0.0 || std::abs(denom) < 1e-6 * dbar * dbar)
    throw Error(ErrorCode::hybridized_mode_resonance, "modulation resonant with a normal mode of the coupled oscillators");
  return 0.5 * p.g1 * p.g2 * two.g_ab / denom;
}

/**
 * α_i(t) solving α̇ = −iω_r α − i g_i cos(ω_m t), α(0) = 0 (lab frame):
 *   α_i(t) = −(g_i/2)[(e^{−iω_m t} − e^{−iω_r t})/δ + (e^{iω_m t} − e^{−iω_r t})/(ω_r + ω_m)]
 */
inline cplx polaron_alpha(const SystemParams& p, int qubit, double t) {
  if (qubit != 1 && qubit != 2) throw Error(ErrorCode::invalid_argument, "qubit index must be 1 or 2");
  const double delta = p.omega_r - p.omega_m;
  if (delta == 0.0) throw Error(ErrorCode::resonant_modulation, "delta = 0");
  const double g = qubit == 1 ? p.g1 : p.g2;
  const cplx em = std::exp(-kI * (p.omega_m * t));
  const cplx ep = std::exp(kI * (p.omega_m * t));
  const cplx er = std::exp(-kI * (p.omega_r * t));
  return -0.5 * g * ((em - er) / delta + (ep - er) / (p.omega_r + p.omega_m));
}

// ---------------------------------------------------------------------------
// Schedules

/// Rz(β) = exp(−iβσ_z/2) on each qubit, times e^{iγ}.
struct ZCorrections {
  double rz1 = 0.0;
  double rz2 = 0.0;
  double global_phase = 0.0;
};

struct GateSchedule {
  double theta = 0.0;           ///< requested controlled phase
  double t_g = 0.0;
  long n = 0;                   ///< δ_used · t_g = 2πn
  long m = 0;                   ///< nearest integer to ω_m t_g / π
  bool soft_constraint_met = false;
  double detuning_used = 0.0;   ///< |δ|, or the slower normal-mode detuning for two oscillators
  double closure_residual = 0.0;  ///< two oscillators: distance of the faster mode's cycle count from an integer
  double j_bar = 0.0;           ///< coupling realised during the gate (after optional g2 rescale)
  double theta_achieved = 0.0;  ///< in [0, 2π)
  double phase_mismatch = 0.0;  ///< (4|J̄|t_g − target)/target before any rescale
  bool phase_within_tolerance = false;
  double g2_scale = 1.0;
  CouplingApprox approx = CouplingApprox::full;
  ZCorrections z;
};

struct PlanOptions {
  CouplingApprox approx = CouplingApprox::full;
  /// Choose the commensurate t_g nearest this duration instead of θ/4|J̄|.
  std::optional<double> target_t_g;
  /// Rescale g2 by the phase ratio so the achieved phase equals θ.
  bool exact_phase = false;
};

inline double wrap_phase(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

namespace detail {

/// Corrections turning exp(−iJ̄t σ_zσ_z) into diag(1, 1, 1, e^{−4iJ̄t}).
inline ZCorrections z_corrections_for(double j_bar, double t_g) {
  const double phi = j_bar * t_g;
  return {-2.0 * phi, -2.0 * phi, -phi};
}

inline void finish_schedule(GateSchedule& s, const SystemParams& p, double j_bar, double phase_target, bool exact) {
  const double achieved_magnitude = 4.0 * std::abs(j_bar) * s.t_g;
  s.phase_mismatch = (achieved_magnitude - phase_target) / phase_target;
  s.phase_within_tolerance = std::abs(s.phase_mismatch) <= 0.02;
  s.g2_scale = 1.0;
  if (exact) {
    s.g2_scale = phase_target / achieved_magnitude;
    j_bar *= s.g2_scale;
  }
  s.j_bar = j_bar;
  s.theta_achieved = wrap_phase(-4.0 * j_bar * s.t_g);
  const double turns = p.omega_m * s.t_g / kPi;
  s.m = std::lround(turns);
  s.soft_constraint_met = std::abs(turns - static_cast<double>(s.m)) * kPi <= 1e-6 * kPi;
  s.z = z_corrections_for(j_bar, s.t_g);
}

inline GateSchedule plan_remote(const SystemParams& p, double theta, const PlanOptions& opts) {
  const auto& two = require_two(p);
  const double j_bar = effective_coupling_remote(p);
  const double dbar = p.delta();
  const double split = normal_mode_splitting(two);
  double nu_slow = std::abs(dbar - split), nu_fast = std::abs(dbar + split);
  if (nu_fast < nu_slow) std::swap(nu_slow, nu_fast);
  if (nu_slow == 0.0) throw Error(ErrorCode::hybridized_mode_resonance, "normal mode resonant with the modulation");

  const double phase_target = j_bar < 0 ? theta : kTwoPi - theta;
  double t_ideal;
  if (opts.target_t_g) {
    t_ideal = *opts.target_t_g;
  } else {
    if (j_bar == 0.0 || phase_target <= 0.0)
      throw Error(ErrorCode::no_commensurate_schedule, "vanishing effective coupling; no finite gate time");
    t_ideal = phase_target / (4.0 * std::abs(j_bar));
  }
  const double n0 = nu_slow * t_ideal / kTwoPi;
  if (n0 < 0.5) throw Error(ErrorCode::no_commensurate_schedule, "coupling too strong for a commensurate schedule (n = 0)");
  const long lo = std::max(1L, static_cast<long>(std::floor(0.9 * n0)));
  const long hi = std::max(lo, static_cast<long>(std::ceil(1.1 * n0)));
  long best = std::max(1L, std::lround(n0));
  double best_res = 1.0, best_dist = 1e300;
  for (long n = lo; n <= hi; ++n) {
    const double cycles = nu_fast * (kTwoPi * n / nu_slow) / kTwoPi;
    const double res = std::abs(cycles - std::round(cycles));
    const double dist = std::abs(static_cast<double>(n) - n0);
    if (res < best_res - 1e-12 || (std::abs(res - best_res) <= 1e-12 && dist < best_dist)) {
      best = n;
      best_res = res;
      best_dist = dist;
    }
  }
  GateSchedule s;
  s.theta = theta;
  s.approx = CouplingApprox::rwa;
  s.n = best;
  s.detuning_used = nu_slow;
  s.t_g = kTwoPi * static_cast<double>(best) / nu_slow;
  s.closure_residual = best_res;
  if (j_bar == 0.0) {
    s.j_bar = 0.0;
    s.theta_achieved = 0.0;
    s.phase_mismatch = -1.0;
    s.phase_within_tolerance = false;
    const double turns = p.omega_m * s.t_g / kPi;
    s.m = std::lround(turns);
    s.soft_constraint_met = std::abs(turns - static_cast<double>(s.m)) <= 1e-6;
    return s;
  }
  finish_schedule(s, p, j_bar, phase_target, opts.exact_phase);
  return s;
}

}  // namespace detail

/**
 * Commensurate schedule for CP(θ): t_g = 2πn/|δ| with n the integer nearest
 * the ideal duration θ/4|J̄|. For J̄ > 0 local Z rotations only reach
 * CP(−4J̄t), so the magnitude target becomes 2π − θ (identical for θ = π).
 */
inline GateSchedule plan_schedule(const SystemParams& p, double theta, const PlanOptions& opts = {}) {
  if (!(theta > 0.0) || theta > kTwoPi) throw Error(ErrorCode::invalid_argument, "theta must lie in (0, 2pi]");
  if (p.two_oscillator) return detail::plan_remote(p, theta, opts);

  const double j_bar = effective_coupling(p, opts.approx);
  const double delta = std::abs(p.delta());
  const double phase_target = j_bar < 0 ? theta : kTwoPi - theta;
  double n_real;
  if (opts.target_t_g) {
    n_real = delta * *opts.target_t_g / kTwoPi;
  } else {
    if (j_bar == 0.0 || phase_target <= 0.0)
      throw Error(ErrorCode::no_commensurate_schedule, "vanishing effective coupling; no finite gate time");
    n_real = delta * phase_target / (8.0 * kPi * std::abs(j_bar));
  }
  const long n = std::lround(n_real);
  if (n < 1) throw Error(ErrorCode::no_commensurate_schedule, "coupling too strong for any commensurate schedule (n = 0)");

  GateSchedule s;
  s.theta = theta;
  s.approx = opts.approx;
  s.n = n;
  s.detuning_used = delta;
  s.t_g = kTwoPi * static_cast<double>(n) / delta;
  if (j_bar == 0.0) {
    s.j_bar = 0.0;
    s.phase_mismatch = -1.0;
    const double turns = p.omega_m * s.t_g / kPi;
    s.m = std::lround(turns);
    s.soft_constraint_met = std::abs(turns - static_cast<double>(s.m)) <= 1e-6;
    return s;
  }
  detail::finish_schedule(s, p, j_bar, phase_target, opts.exact_phase);
  return s;
}

/// Parameters actually driven during the gate (g2 rescaled when the schedule asks for it).
inline SystemParams with_schedule_scaling(SystemParams p, const GateSchedule& s) {
  p.g2 *= s.g2_scale;
  return p;
}

/// ω_r a†a + J̄ σ_{z1}σ_{z2}, with J̄ taken from the schedule.
inline Operator polaron_hamiltonian(const SystemParams& p, const GateSchedule& schedule, const BuildOptions& o = {}) {
  detail::require_cutoff(o);
  detail::require_single_oscillator(p);
  const auto space = gate_space(o.fock_cutoff);
  return p.omega_r * embed(number_operator(o.fock_cutoff), kOscillator, space) +
         schedule.j_bar * (embed(pauli_z(), kQubit1, space) * embed(pauli_z(), kQubit2, space));
}

/// Σ_i α_i σ_{zi} a† − H.c.; e^{G} maps polaron-frame states back to the lab frame.
inline Operator polaron_generator(cplx alpha1, cplx alpha2, const HilbertSpace& space, std::size_t osc = kOscillator) {
  const Operator a = embed(annihilation(space.dim(osc)), osc, space);
  const Operator z = alpha1 * embed(pauli_z(), kQubit1, space) + alpha2 * embed(pauli_z(), kQubit2, space);
  const Operator g = z * a.adjoint();
  return g - g.adjoint();
}

}  // namespace longigate
