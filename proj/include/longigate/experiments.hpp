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

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "longigate/dynamics.hpp"
#include "longigate/fidelity.hpp"
#include "longigate/model.hpp"
#include "longigate/parallel.hpp"
#include "longigate/version.hpp"

#ifndef LONGIGATE_VERSION
#define LONGIGATE_VERSION "0.1.0"
#endif

namespace longigate {

enum class StudyKind { detuning_sweep, coupling_sweep, squeezing_sweep, remote_gate, benchmark_point, t1t2_point };

inline const char* to_string(StudyKind s) {
  switch (s) {
    case StudyKind::detuning_sweep: return "detuning_sweep";
    case StudyKind::coupling_sweep: return "coupling_sweep";
    case StudyKind::squeezing_sweep: return "squeezing_sweep";
    case StudyKind::remote_gate: return "remote_gate";
    case StudyKind::benchmark_point: return "benchmark_point";
    case StudyKind::t1t2_point: return "t1t2_point";
  }
  return "?";
}

enum class ModelLevel { lab, rotating, polaron_effective };

inline const char* to_string(ModelLevel m) {
  switch (m) {
    case ModelLevel::lab: return "lab";
    case ModelLevel::rotating: return "rotating";
    case ModelLevel::polaron_effective: return "polaron_effective";
  }
  return "?";
}

/// Oscillator frame used by the rotating model: at the oscillator (ω_r) or the modulation (ω_m).
enum class OscillatorFrame { oscillator, modulation };

/// Everything besides SystemParams that fixes one simulated gate.
struct GateSetup {
  ModelLevel model = ModelLevel::rotating;
  bool rwa = true;
  OscillatorFrame frame = OscillatorFrame::oscillator;
  double theta = kPi;
  PlanOptions plan;
  SolverConfig solver;
  std::vector<cplx> initial_alpha;
  DissipatorConventions conventions;
  int jobs = 1;
};

inline double frame_frequency(const SystemParams& p, const GateSetup& setup) {
  if (setup.model == ModelLevel::lab) return 0.0;
  return setup.frame == OscillatorFrame::oscillator ? p.reference_frequency() : p.omega_m;
}

namespace detail {

inline Simulation finish_simulation(LindbladModel model, const GateSetup& setup, int cutoff) {
  SolverConfig solver = setup.solver;
  solver.fock_cutoff = cutoff;
  Matrix osc = oscillator_state(model.space(), setup.initial_alpha);
  return Simulation{std::move(model), std::move(osc), solver, std::string(to_string(setup.model))};
}

}  // namespace detail

/**
 * Lindblad model for one gate. Lab and rotating levels carry the full
 * oscillator dynamics (microscopic squeezed bath when squeezing is set);
 * the polaron level is J̄σ_zσ_z with the modulated collective dephasing
 * (scaled by e^{−2r} when squeezing is set). Qubit free terms are omitted
 * throughout: all runs are in the qubit rotating frame.
 */
inline Simulation build_simulation(const SystemParams& p0, const GateSchedule& s, const GateSetup& setup, int cutoff) {
  const SystemParams p = with_schedule_scaling(p0, s);
  p.validate();
  const bool two = p.two_oscillator.has_value();
  BuildOptions bo;
  bo.fock_cutoff = cutoff;
  bo.include_qubit_terms = false;

  if (setup.model == ModelLevel::polaron_effective) {
    if (two) throw Error(ErrorCode::unsupported_model, "no effective polaron model for two oscillators");
    if (p.qubit_noise)
      throw Error(ErrorCode::unsupported_model, "qubit noise is not polaron invariant; use the lab or rotating model");
    const auto space = gate_space(cutoff);
    OperatorSchedule h(space);
    h.add(s.j_bar, embed(pauli_z(), kQubit1, space) * embed(pauli_z(), kQubit2, space));
    std::vector<Dissipator> ds;
    if (p.kappa > 0.0) {
      ds.push_back(photon_loss(p.kappa, space));
      ds.push_back(p.squeezing ? effective_squeezed_dephasing(p, space) : polaron_dephasing_dissipator(p, space));
    }
    return detail::finish_simulation(LindbladModel{std::move(h), std::move(ds), s.t_g, Frame::polaron}, setup, cutoff);
  }
  {
    const bool lab = setup.model == ModelLevel::lab;
    const double wf = frame_frequency(p, setup);
    if (!lab) bo.oscillator_frame = wf;
    OperatorSchedule h = two ? (lab ? remote_lab_hamiltonian_schedule(p, bo) : remote_hamiltonian_schedule(p, setup.rwa, bo))
                             : (lab ? lab_hamiltonian_schedule(p, bo) : rotating_hamiltonian_schedule(p, setup.rwa, bo));
    const HilbertSpace space = h.space();
    std::vector<Dissipator> ds;
    if (p.kappa > 0.0) {
      if (p.squeezing) {
        if (two) throw Error(ErrorCode::unsupported_model, "squeezed bath is implemented for one oscillator");
        ds.push_back(squeezed_bath_dissipator(p, space, wf));
      } else {
        ds.push_back(photon_loss(p.kappa, space, kOscillator));
        if (two) ds.push_back(photon_loss(p.kappa, space, kOscillatorB));
      }
    }
    if (p.qubit_noise)
      for (auto& d : qubit_noise_dissipators(p, space, setup.conventions)) ds.push_back(std::move(d));
    return detail::finish_simulation(LindbladModel{std::move(h), std::move(ds), s.t_g, lab ? Frame::lab : Frame::rotating},
                             setup, cutoff);
  }
}

struct GateOutcome {
  GateSchedule schedule;
  GateChannel channel;  ///< Z corrections applied
  FidelityResult fidelity;
  int cutoff = 0;
  std::vector<std::pair<int, double>> cutoff_history;
};

/// Plans, simulates and scores one gate against CP(θ') with θ' the achieved phase.
inline GateOutcome run_gate(const SystemParams& p, const GateSetup& setup) {
  p.validate();
  const GateSchedule s = plan_schedule(p, setup.theta, setup.plan);
  const Matrix target = cp_unitary(s.theta_achieved);
  TomographyOptions topts;
  topts.jobs = setup.jobs;
  auto run = [&](int cutoff) {
    const Simulation sim = build_simulation(p, s, setup, cutoff);
    GateOutcome out;
    out.schedule = s;
    out.channel = apply_z_corrections(channel_tomography(sim, s, topts), s);
    out.fidelity = average_gate_fidelity(out.channel, target);
    out.cutoff = cutoff;
    return out;
  };
  if (!setup.solver.cutoff_escalation.enabled) {
    GateOutcome out = run(setup.solver.fock_cutoff);
    out.cutoff_history = {{out.cutoff, out.fidelity.f_avg}};
    return out;
  }
  auto esc = escalate_cutoff(run, [](const GateOutcome& o) { return o.fidelity.f_avg; }, setup.solver);
  esc.result.cutoff_history = esc.history;
  return esc.result;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SqueezeStudy {
  std::vector<SqueezeVariant> variants{SqueezeVariant::rotating_angle, SqueezeVariant::fixed_angle_filtered};
  std::vector<std::string> model_levels{"effective", "microscopic"};
  int phi0_scan = 16;
  double microscopic_max_db = 8.0;
};

/**
 * A named study. Axis and series values are in the units of the config keys
 * (MHz as ω/2π, or dB for squeezing); `params` holds the fixed physics in rad/s.
 */
struct SweepSpec {
  StudyKind study = StudyKind::benchmark_point;
  std::string name;
  SystemParams params;
  GateSetup setup;
  std::vector<double> axis;
  std::vector<double> series;
  SqueezeStudy squeeze;
  bool record_timing = true;
  /// Resolved configuration in config units; copied into provenance and narrowed per row.
  nlohmann::json config;
};

/// Config key of the axis and series for each study.
inline const char* axis_key(StudyKind s) {
  switch (s) {
    case StudyKind::detuning_sweep: return "delta_mhz_over_2pi";
    case StudyKind::coupling_sweep: return "g_mhz_over_2pi";
    case StudyKind::squeezing_sweep: return "power_db";
    case StudyKind::remote_gate: return "delta_bar_mhz_over_2pi";
    default: return "delta_mhz_over_2pi";
  }
}

inline const char* series_key(StudyKind s) {
  switch (s) {
    case StudyKind::detuning_sweep: return "g_mhz_over_2pi";
    case StudyKind::coupling_sweep: return "delta_mhz_over_2pi";
    default: return "";
  }
}

struct SweepRow {
  double axis = 0.0;
  std::optional<double> series;
  std::string variant;
  std::string model_level;
  double t_g_ns = std::nan("");
  long n = 0;
  double theta_achieved = std::nan("");
  double f_avg = std::nan("");
  double infidelity = std::nan("");
  int cutoff = 0;
  double wall_ms = 0.0;
  std::string status = "ok";
  nlohmann::json provenance;

  bool ok() const { return status == "ok"; }
  bool failed() const { return status.rfind("error", 0) == 0; }
};

struct SweepResult {
  StudyKind study = StudyKind::benchmark_point;
  std::string name;
  std::vector<SweepRow> rows;
  nlohmann::json fits = nlohmann::json::object();
  nlohmann::json provenance;

  std::size_t count(const char* prefix) const {
    std::size_t c = 0;
    for (const auto& r : rows)
      if (r.status.rfind(prefix, 0) == 0) ++c;
    return c;
  }
  bool has_failures() const { return count("error") > 0; }
};

namespace detail {

inline constexpr double kMHz = kTwoPi * 1e6;

inline void set_detuning(SystemParams& p, double delta_mhz) { p.omega_m = p.reference_frequency() - delta_mhz * kMHz; }

inline void set_coupling(SystemParams& p, double g_mhz) { p.g1 = p.g2 = g_mhz * kMHz; }

inline nlohmann::json params_json(const SystemParams& p) {
  nlohmann::json j = {{"omega_r", p.omega_r}, {"omega_a1", p.omega_a1}, {"omega_a2", p.omega_a2}, {"g1", p.g1},
                      {"g2", p.g2},           {"omega_m", p.omega_m},   {"kappa", p.kappa},       {"delta", p.delta()}};
  if (p.two_oscillator)
    j["two_oscillator"] = {{"omega_a", p.two_oscillator->omega_a},
                           {"omega_b", p.two_oscillator->omega_b},
                           {"g_ab", p.two_oscillator->g_ab}};
  if (p.qubit_noise) {
    j["qubit_noise"] = nlohmann::json::array();
    for (const auto& q : *p.qubit_noise) j["qubit_noise"].push_back({{"t1", q.t1}, {"t2", q.t2}});
  }
  if (p.squeezing)
    j["squeezing"] = {{"r", p.squeezing->r}, {"variant", to_string(p.squeezing->variant)}, {"phi0", p.squeezing->phi0}};
  return j;
}

struct PointTask {
  double axis = 0.0;
  std::optional<double> series;
  std::string variant;
  std::string model_level;
  SystemParams params;
  GateSetup setup;
  int phi0_scan = 0;  ///< > 0: scan the squeezing angle and keep the best fidelity
  std::optional<std::string> skip;  ///< reason the point is reported without running
  std::optional<std::string> exclusion;
};

inline void fill_from_outcome(SweepRow& row, const GateOutcome& o) {
  row.t_g_ns = o.schedule.t_g * 1e9;
  row.n = o.schedule.n;
  row.theta_achieved = o.schedule.theta_achieved;
  row.f_avg = o.fidelity.f_avg;
  row.infidelity = 1.0 - o.fidelity.f_avg;
  row.cutoff = o.cutoff;
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [c, f] : o.cutoff_history) hist.push_back({{"cutoff", c}, {"F_avg", f}});
  const auto& h = o.channel.metadata.hygiene;
  row.provenance["schedule"] = to_json(o.schedule);
  row.provenance["cutoff_history"] = std::move(hist);
  row.provenance["tomography_path"] = o.channel.metadata.path;
  row.provenance["hygiene"] = {{"max_trace_deviation", h.max_trace_deviation},
                               {"max_hermiticity_defect", h.max_hermiticity_defect},
                               {"min_eigenvalue", h.min_eigenvalue}};
  row.provenance["F_pro"] = o.fidelity.f_pro;
}

inline SweepRow run_point(const PointTask& task, bool record_timing) {
  SweepRow row;
  row.axis = task.axis;
  row.series = task.series;
  row.variant = task.variant;
  row.model_level = task.model_level;
  row.provenance["params"] = params_json(task.params);
  if (task.skip) {
    row.status = "skipped: " + *task.skip;
    return row;
  }
  if (task.exclusion) {
    row.status = "excluded: " + *task.exclusion;
    return row;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    if (task.phi0_scan > 0) {
      std::optional<GateOutcome> best;
      double best_phi0 = 0.0;
      nlohmann::json scan = nlohmann::json::array();
      for (int k = 0; k < task.phi0_scan; ++k) {
        SystemParams p = task.params;
        p.squeezing->phi0 = kPi * k / task.phi0_scan;
        GateOutcome o = run_gate(p, task.setup);
        scan.push_back({{"phi0_rad", p.squeezing->phi0}, {"F_avg", o.fidelity.f_avg}});
        if (!best || o.fidelity.f_avg > best->fidelity.f_avg) {
          best = std::move(o);
          best_phi0 = p.squeezing->phi0;
        }
      }
      fill_from_outcome(row, *best);
      row.provenance["phi0_scan"] = std::move(scan);
      row.provenance["phi0_best_rad"] = best_phi0;
    } else {
      fill_from_outcome(row, run_gate(task.params, task.setup));
    }
  } catch (const Error& e) {
    row = SweepRow{};
    row.axis = task.axis;
    row.series = task.series;
    row.variant = task.variant;
    row.model_level = task.model_level;
    row.provenance["params"] = params_json(task.params);
    row.status = std::string("error: ") + e.what();
  }
  if (record_timing)
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

/// Pole of the remote coupling: the slower normal mode sits within max(g1, g2) of the modulation.
inline std::optional<std::string> remote_exclusion(const SystemParams& p) {
  const auto& two = *p.two_oscillator;
  const double split = normal_mode_splitting(two);
  const double nu_slow = std::min(std::abs(p.delta() - split), std::abs(p.delta() + split));
  try {
    effective_coupling_remote(p);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::hybridized_mode_resonance) return std::string(to_string(e.code()));
    throw;
  }
  if (two.g_ab != 0.0 && nu_slow <= std::max(std::abs(p.g1), std::abs(p.g2)))
    return std::string(to_string(ErrorCode::hybridized_mode_resonance)) + " (normal mode within the coupling strength)";
  return std::nullopt;
}

inline std::vector<PointTask> expand(const SweepSpec& spec) {
  std::vector<PointTask> tasks;
  auto base = [&](double axis) {
    PointTask t;
    t.axis = axis;
    t.params = spec.params;
    t.setup = spec.setup;
    t.model_level = to_string(spec.setup.model);
    return t;
  };
  switch (spec.study) {
    case StudyKind::benchmark_point:
    case StudyKind::t1t2_point: {
      PointTask t = base(spec.axis.empty() ? spec.params.delta() / kMHz : spec.axis.front());
      if (!spec.axis.empty()) set_detuning(t.params, spec.axis.front());
      if (spec.study == StudyKind::benchmark_point) t.params.qubit_noise.reset();
      tasks.push_back(std::move(t));
      break;
    }
    case StudyKind::detuning_sweep:
    case StudyKind::coupling_sweep: {
      const std::vector<std::optional<double>> series =
          spec.series.empty() ? std::vector<std::optional<double>>{std::nullopt}
                              : std::vector<std::optional<double>>(spec.series.begin(), spec.series.end());
      for (const auto& s : series)
        for (double v : spec.axis) {
          PointTask t = base(v);
          t.series = s;
          if (spec.study == StudyKind::detuning_sweep) {
            set_detuning(t.params, v);
            if (s) set_coupling(t.params, *s);
          } else {
            set_coupling(t.params, v);
            if (s) set_detuning(t.params, *s);
          }
          tasks.push_back(std::move(t));
        }
      break;
    }
    case StudyKind::squeezing_sweep: {
      for (const auto variant : spec.squeeze.variants)
        for (const auto& level : spec.squeeze.model_levels)
          for (double db : spec.axis) {
            PointTask t = base(db);
            t.variant = to_string(variant);
            SqueezeParams sq = spec.params.squeezing.value_or(SqueezeParams{});
            sq.r = squeezing_r_from_db(db);
            sq.variant = variant;
            t.params.squeezing = sq;
            if (level == "effective") {
              t.setup.model = ModelLevel::polaron_effective;
              t.model_level = "effective";
            } else {
              t.setup.model = spec.setup.model == ModelLevel::polaron_effective ? ModelLevel::rotating : spec.setup.model;
              // The κ(ω_m) = 0 filter has no microscopic model here.
              t.model_level = variant == SqueezeVariant::fixed_angle_filtered ? "microscopic_unfiltered" : "microscopic";
              t.phi0_scan = std::max(1, spec.squeeze.phi0_scan);
              if (db > spec.squeeze.microscopic_max_db)
                t.skip = "above the microscopic model's validity limit";
            }
            tasks.push_back(std::move(t));
          }
      break;
    }
    case StudyKind::remote_gate: {
      if (!spec.params.two_oscillator) throw Error(ErrorCode::config_error, "remote_gate needs system.two_oscillator");
      for (double v : spec.axis) {
        SystemParams p = spec.params;
        set_detuning(p, v);
        std::optional<std::string> excl = remote_exclusion(p);
        PointTask noiseless = base(v);
        noiseless.params = p;
        noiseless.params.kappa = 0.0;
        noiseless.variant = "noiseless";
        noiseless.exclusion = excl;
        tasks.push_back(noiseless);
        if (p.kappa > 0.0) {
          PointTask lossy = base(v);
          lossy.params = p;
          lossy.variant = "lossy";
          lossy.exclusion = excl;
          tasks.push_back(std::move(lossy));
        }
      }
      break;
    }
  }
  return tasks;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::nan("");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

inline std::string series_label(const std::optional<double>& s) {
  if (!s) return "all";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, *s);
  return std::string(buf, res.ptr);
}

inline nlohmann::json compute_fits(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  nlohmann::json fits = nlohmann::json::object();
  auto ok_rows = [&](auto pred) {
    std::vector<const SweepRow*> out;
    for (const auto& r : rows)
      if (r.ok() && pred(r)) out.push_back(&r);
    return out;
  };
  // Group by series value, keeping first-appearance order.
  std::vector<std::optional<double>> series_order;
  for (const auto& r : rows)
    if (std::find(series_order.begin(), series_order.end(), r.series) == series_order.end())
      series_order.push_back(r.series);

  if (spec.study == StudyKind::detuning_sweep || spec.study == StudyKind::coupling_sweep) {
    const bool detuning = spec.study == StudyKind::detuning_sweep;
    nlohmann::json per = nlohmann::json::object();
    std::map<double, std::vector<double>> by_axis;
    for (const auto& s : series_order) {
      const auto sel = ok_rows([&](const SweepRow& r) { return r.series == s; });
      std::vector<double> lx, ly, lt;
      double fmin = 1e300, fmax = -1e300;
      for (const auto* r : sel) {
        lx.push_back(std::log10(r->axis));
        ly.push_back(std::log10(r->infidelity));
        lt.push_back(std::log10(r->t_g_ns));
        fmin = std::min(fmin, r->infidelity);
        fmax = std::max(fmax, r->infidelity);
        by_axis[r->axis].push_back(r->infidelity);
      }
      nlohmann::json f = {{"points", sel.size()}};
      if (detuning) {
        f["slope_log_infidelity_vs_log_delta"] = fit_slope(lx, ly);
      } else {
        f["exponent_t_g_vs_g"] = fit_slope(lx, lt);
        f["infidelity_relative_variation"] = sel.empty() ? std::nan("") : (fmax - fmin) / fmin;
      }
      per[series_label(s)] = std::move(f);
    }
    fits["series"] = std::move(per);
    if (detuning) {
      double spread = 0.0;
      for (const auto& [axis, v] : by_axis) {
        if (v.size() < 2) continue;
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        spread = std::max(spread, (*hi - *lo) / *lo);
      }
      fits["max_pointwise_relative_spread"] = spread;
    }
  } else if (spec.study == StudyKind::squeezing_sweep) {
    nlohmann::json per = nlohmann::json::object();
    std::map<std::string, double> at_zero;
    for (const auto variant : spec.squeeze.variants)
      for (const auto& level : {std::string("effective"), std::string("microscopic"), std::string("microscopic_unfiltered")}) {
        const auto sel = ok_rows([&](const SweepRow& r) { return r.variant == to_string(variant) && r.model_level == level; });
        if (sel.empty()) continue;
        std::vector<double> x, y;
        for (const auto* r : sel) {
          x.push_back(r->axis);
          y.push_back(std::log10(r->infidelity));
          if (r->axis == 0.0) at_zero[std::string(to_string(variant)) + "/" + level] = r->infidelity;
        }
        per[std::string(to_string(variant)) + "/" + level] = {{"points", sel.size()},
                                                              {"slope_log10_infidelity_per_db", fit_slope(x, y)}};
      }
    fits["series"] = std::move(per);
    const auto rot = at_zero.find("rotating_angle/effective"), fil = at_zero.find("fixed_angle_filtered/effective");
    if (rot != at_zero.end() && fil != at_zero.end()) fits["filtered_over_rotating_at_0db"] = fil->second / rot->second;
  }
  return fits;
}

/// The config that reproduces one row in isolation.
inline nlohmann::json point_config(const SweepSpec& spec, const SweepRow& row) {
  nlohmann::json c = spec.config;
  if (c.is_null()) return c;
  if (spec.study == StudyKind::benchmark_point || spec.study == StudyKind::t1t2_point) return c;
  auto& sweep = c["sweep"];
  sweep[axis_key(spec.study)] = nlohmann::json::array({row.axis});
  if (row.series) sweep[series_key(spec.study)] = nlohmann::json::array({*row.series});
  if (spec.study == StudyKind::squeezing_sweep) {
    sweep["variants"] = nlohmann::json::array({row.variant});
    const std::string level = row.model_level == "effective" ? "effective" : "microscopic";
    sweep["model_levels"] = nlohmann::json::array({level});
  }
  return c;
}

}  // namespace detail

/// Runs every point of the study on up to `setup.jobs` workers; rows come back in axis order.
inline SweepResult run_study(const SweepSpec& spec) {
  std::vector<detail::PointTask> tasks = detail::expand(spec);
  const int jobs = spec.setup.jobs;
  // A single point parallelises its tomography instead.
  if (tasks.size() > 1)
    for (auto& t : tasks) t.setup.jobs = 1;
  std::vector<SweepRow> rows(tasks.size());
  parallel_for(tasks.size(), tasks.size() > 1 ? jobs : 1,
               [&](std::size_t i) { rows[i] = detail::run_point(tasks[i], spec.record_timing); });

  SweepResult res;
  res.study = spec.study;
  res.name = spec.name;
  res.fits = detail::compute_fits(spec, rows);
  nlohmann::json prov_rows = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::json pr = rows[i].provenance;
    pr["index"] = i;
    pr["axis"] = rows[i].axis;
    pr["series"] = rows[i].series ? nlohmann::json(*rows[i].series) : nlohmann::json(nullptr);
    pr["variant"] = rows[i].variant;
    pr["model_level"] = rows[i].model_level;
    pr["status"] = rows[i].status;
    pr["infidelity"] = rows[i].infidelity;
    pr["point_config"] = detail::point_config(spec, rows[i]);
    prov_rows.push_back(std::move(pr));
  }
  res.provenance = {{"library", "longigate"},
                    {"version", kVersion},
                    {"study", to_string(spec.study)},
                    {"config", spec.config},
                    {"fits", res.fits},
                    {"rows", std::move(prov_rows)}};
  res.rows = std::move(rows);
  return res;
}

// Named entry points; each checks the study kind and delegates to run_study.

namespace detail {
inline SweepResult run_checked(const SweepSpec& spec, std::initializer_list<StudyKind> allowed) {
  if (std::find(allowed.begin(), allowed.end(), spec.study) == allowed.end())
    throw Error(ErrorCode::invalid_argument, std::string("study kind mismatch: ") + to_string(spec.study));
  return run_study(spec);
}
}  // namespace detail

inline SweepResult run_detuning_sweep(const SweepSpec& spec) { return detail::run_checked(spec, {StudyKind::detuning_sweep}); }
inline SweepResult run_coupling_sweep(const SweepSpec& spec) { return detail::run_checked(spec, {StudyKind::coupling_sweep}); }
inline SweepResult run_squeezing_sweep(const SweepSpec& spec) {
  return detail::run_checked(spec, {StudyKind::squeezing_sweep});
}
inline SweepResult run_remote_gate(const SweepSpec& spec) { return detail::run_checked(spec, {StudyKind::remote_gate}); }
inline SweepResult run_benchmark_point(const SweepSpec& spec) {
  return detail::run_checked(spec, {StudyKind::benchmark_point, StudyKind::t1t2_point});
}

// ---------------------------------------------------------------------------
// Oracle: the same gate in the oscillator picture and in the polaron frame

/// Conditional displacement α_i(t) expressed in the simulation frame of `setup`.
inline cplx frame_alpha(const SystemParams& p, int qubit, double t, const GateSetup& setup) {
  const double wf = frame_frequency(p, setup);
  if (setup.model == ModelLevel::lab || !setup.rwa) return polaron_alpha(p, qubit, t) * std::exp(kI * (wf * t));
  const double g = qubit == 1 ? p.g1 : p.g2;
  const double d = p.delta();
  if (d == 0.0) throw Error(ErrorCode::resonant_modulation, "delta = 0");
  return -(g / (2.0 * d)) * (std::exp(kI * ((wf - p.omega_m) * t)) - std::exp(kI * ((wf - p.omega_r) * t)));
}

struct OracleComparison {
  GateSchedule schedule;
  Matrix qubits_direct;   ///< qubit-reduced state from the lab/rotating model
  Matrix qubits_polaron;  ///< from the polaron model, mapped back with e^{G}
  double trace_distance = 0.0;
  Hygiene hygiene;
};

/**
 * Evolves ρ_q ⊗ |0⟩⟨0| for one gate under the lab or rotating model of
 * `setup` and under J̄σ_zσ_z + κD[a] + Γ(1 − cos δt)D[σ_z1 + σ_z2], undoes the
 * polaron transform at t_g and compares the two qubit-reduced states.
 */
inline OracleComparison oracle_compare(const SystemParams& p, const GateSetup& setup, const Matrix& rho_q,
                                       std::optional<GateSchedule> schedule = std::nullopt) {
  if (setup.model == ModelLevel::polaron_effective)
    throw Error(ErrorCode::invalid_argument, "oracle route (a) needs the lab or rotating model");
  if (p.two_oscillator || p.qubit_noise || p.squeezing)
    throw Error(ErrorCode::unsupported_model, "oracle comparison covers one oscillator with photon loss only");
  if (rho_q.rows() != 4 || rho_q.cols() != 4) throw Error(ErrorCode::dimension_mismatch, "two-qubit state expected");
  OracleComparison out;
  out.schedule = schedule ? *schedule : plan_schedule(p, setup.theta, setup.plan);
  const GateSchedule& s = out.schedule;
  const int cutoff = setup.solver.fock_cutoff;

  GateSetup direct_setup = setup;
  direct_setup.initial_alpha.clear();
  const Simulation direct = build_simulation(p, s, direct_setup, cutoff);
  GateSetup polaron_setup = direct_setup;
  polaron_setup.model = ModelLevel::polaron_effective;
  const Simulation polaron = build_simulation(p, s, polaron_setup, cutoff);

  auto run = [&](const Simulation& sim) {
    const HilbertSpace& space = sim.model.space();
    Matrix rho0 = kron(rho_q, sim.oscillator_state);
    EvolveOptions eo;
    eo.samples = 5;
    Trajectory tr = evolve(sim.model, DensityState(space, std::move(rho0)), sim.solver, eo);
    out.hygiene.max_trace_deviation = std::max(out.hygiene.max_trace_deviation, tr.hygiene.max_trace_deviation);
    out.hygiene.max_hermiticity_defect = std::max(out.hygiene.max_hermiticity_defect, tr.hygiene.max_hermiticity_defect);
    out.hygiene.min_eigenvalue = std::min(out.hygiene.min_eigenvalue, tr.hygiene.min_eigenvalue);
    return tr.final_state;
  };
  const DensityState a = run(direct);
  out.qubits_direct = partial_trace(a.matrix(), a.space(), {kQubit1, kQubit2});

  const DensityState b = run(polaron);
  const SystemParams driven = with_schedule_scaling(p, s);
  const Matrix u = expm(polaron_generator(frame_alpha(driven, 1, s.t_g, setup), frame_alpha(driven, 2, s.t_g, setup),
                                          b.space())
                            .matrix());
  const Matrix back = u * b.matrix() * u.adjoint();
  out.qubits_polaron = partial_trace(back, b.space(), {kQubit1, kQubit2});
  out.trace_distance = trace_distance(out.qubits_direct, out.qubits_polaron);
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

inline void write_csv(std::ostream& os, const SweepResult& res) {
  os << "axis,series,t_g_ns,n,theta_achieved,F_avg,infidelity,cutoff,variant,model_level,wall_ms,status\n";
  for (const auto& r : res.rows) {
    const bool ran = r.ok();
    os << format_number(r.axis) << ',' << (r.series ? format_number(*r.series) : "") << ','
       << format_number(r.t_g_ns) << ',' << (ran ? std::to_string(r.n) : "") << ',' << format_number(r.theta_achieved)
       << ',' << format_number(r.f_avg) << ',' << format_number(r.infidelity) << ','
       << (ran ? std::to_string(r.cutoff) : "") << ',' << csv_field(r.variant) << ',' << csv_field(r.model_level) << ','
       << format_number(r.wall_ms) << ',' << csv_field(r.status) << '\n';
  }
}

/// One-line machine-readable summary.
inline nlohmann::json summary_json(const SweepResult& res) {
  return {{"study", to_string(res.study)}, {"name", res.name},
          {"rows", res.rows.size()},       {"ok", res.count("ok")},
          {"errors", res.count("error")},  {"excluded", res.count("excluded")},
          {"skipped", res.count("skipped")}, {"fits", res.fits}};
}

}  // namespace longigate
