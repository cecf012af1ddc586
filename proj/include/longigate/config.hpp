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

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "longigate/experiments.hpp"

namespace longigate {

/*
 * Run configuration (UTF-8 JSON). Frequencies are given as ω/2π with the unit
 * in the key name and converted to rad/s once, here. Unknown keys are errors.
 *
 * {
 *   "study": "benchmark_point",            detuning_sweep | coupling_sweep | squeezing_sweep |
 *                                          remote_gate | benchmark_point | t1t2_point
 *   "name": "benchmark",                   output file stem (default: study)
 *   "model": "rotating",                   lab | rotating | polaron_effective
 *   "rwa": true,                           drop counter-rotating terms (rotating model)
 *   "oscillator_frame": "oscillator",      oscillator (ω_r) | modulation (ω_m)
 *   "system": {
 *     "omega_r_ghz_over_2pi", "omega_a1_ghz_over_2pi", "omega_a2_ghz_over_2pi",
 *     "g1_mhz_over_2pi", "g2_mhz_over_2pi", "kappa_mhz_over_2pi",
 *     "delta_mhz_over_2pi" | "omega_m_ghz_over_2pi",
 *     "two_oscillator": {"omega_a_ghz_over_2pi", "omega_b_ghz_over_2pi", "g_ab_mhz_over_2pi"},
 *     "qubit_noise": {"t1_us", "t2_us"} or a list of two such objects,
 *     "squeezing": {"power_db", "variant", "phi0_rad"}
 *   },
 *   "gate": {"theta_over_pi", "coupling_approx", "target_t_g_ns", "exact_phase",
 *            "initial_alpha_re", "initial_alpha_im"},
 *   "solver": {"rel_tol", "abs_tol", "max_step_ns", "fock_cutoff",
 *              "cutoff_escalation": {"enabled", "fidelity_delta_threshold"}},
 *   "sweep": {<axis key>: [...], <series key>: [...], "variants", "model_levels",
 *             "phi0_scan", "microscopic_max_db"},
 *   "output": {"dir", "record_timing"},
 *   "jobs": 0
 * }
 */

namespace detail {

class Reader {
 public:
  Reader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "must be an object");
  }

  [[noreturn]] static void fail(const std::string& key, const std::string& what) {
    throw Error(ErrorCode::config_error, "'" + key + "' " + what);
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k) && !j_.at(k).is_null();
  }

  const nlohmann::json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  double number(const std::string& k, std::optional<double> def = std::nullopt) {
    if (!has(k)) {
      if (def) return *def;
      fail(key(k), "is required");
    }
    const auto& v = j_.at(k);
    if (!v.is_number()) fail(key(k), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key(k), "must be finite");
    return x;
  }

  int integer(const std::string& k, int def) {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_number_integer()) fail(key(k), "must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_boolean()) fail(key(k), "must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& k, std::optional<std::string> def, std::initializer_list<const char*> allowed) {
    if (!has(k)) {
      if (def) return *def;
      fail(key(k), "is required");
    }
    const auto& v = j_.at(k);
    if (!v.is_string()) fail(key(k), "must be a string");
    std::string s = v.get<std::string>();
    if (allowed.size() == 0) return s;
    for (const char* a : allowed)
      if (s == a) return s;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    fail(key(k), "must be one of: " + list);
  }

  std::vector<double> numbers(const std::string& k) {
    std::vector<double> out;
    if (!has(k)) return out;
    const auto& v = j_.at(k);
    if (!v.is_array()) fail(key(k), "must be an array of numbers");
    for (const auto& x : v) {
      if (!x.is_number()) fail(key(k), "must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& k, std::initializer_list<const char*> allowed) {
    std::vector<std::string> out;
    if (!has(k)) return out;
    const auto& v = j_.at(k);
    if (!v.is_array()) fail(key(k), "must be an array of strings");
    for (const auto& x : v) {
      if (!x.is_string()) fail(key(k), "must be an array of strings");
      const std::string s = x.get<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || s == a;
      if (!ok) fail(key(k), "contains unknown value '" + s + "'");
      out.push_back(s);
    }
    return out;
  }

  /// Rejects every key that was never asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(key(it.key()), "is not a recognised key");
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline constexpr double kGHz = kTwoPi * 1e9;

inline void require_monotone(const std::vector<double>& v, const std::string& key) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) Reader::fail(key, "must be strictly increasing");
}

inline QubitNoise parse_noise(const nlohmann::json& j, const std::string& path) {
  Reader r(j, path);
  QubitNoise n{r.number("t1_us") * 1e-6, r.number("t2_us") * 1e-6};
  r.finish();
  return n;
}

inline SystemParams parse_system(const nlohmann::json& j) {
  Reader r(j, "system");
  SystemParams p;
  if (r.has("two_oscillator")) {
    Reader t(r.raw("two_oscillator"), "system.two_oscillator");
    p.two_oscillator = TwoOscillatorParams{t.number("omega_a_ghz_over_2pi") * kGHz,
                                           t.number("omega_b_ghz_over_2pi") * kGHz, t.number("g_ab_mhz_over_2pi") * kMHz};
    t.finish();
  }
  const double default_r = p.two_oscillator ? p.reference_frequency() / kGHz : std::nan("");
  p.omega_r = r.number("omega_r_ghz_over_2pi", p.two_oscillator ? std::optional<double>(default_r) : std::nullopt) * kGHz;
  p.omega_a1 = r.number("omega_a1_ghz_over_2pi") * kGHz;
  p.omega_a2 = r.number("omega_a2_ghz_over_2pi") * kGHz;
  p.g1 = r.number("g1_mhz_over_2pi") * kMHz;
  p.g2 = r.number("g2_mhz_over_2pi") * kMHz;
  p.kappa = r.number("kappa_mhz_over_2pi", 0.0) * kMHz;
  const bool has_delta = r.has("delta_mhz_over_2pi"), has_wm = r.has("omega_m_ghz_over_2pi");
  if (has_delta == has_wm) Reader::fail("system", "needs exactly one of delta_mhz_over_2pi and omega_m_ghz_over_2pi");
  // ω_m is derived from δ when δ is given.
  p.omega_m = has_delta ? p.reference_frequency() - r.number("delta_mhz_over_2pi") * kMHz
                        : r.number("omega_m_ghz_over_2pi") * kGHz;
  if (!p.two_oscillator && p.omega_m == p.omega_r)
    Reader::fail(has_delta ? "system.delta_mhz_over_2pi" : "system.omega_m_ghz_over_2pi",
                 "gives zero detuning: resonant modulation is a readout, not a gate");
  if (r.has("qubit_noise")) {
    const auto& q = r.raw("qubit_noise");
    if (q.is_array()) {
      if (q.size() != 2) Reader::fail("system.qubit_noise", "must list exactly two qubits");
      p.qubit_noise = std::array<QubitNoise, 2>{parse_noise(q[0], "system.qubit_noise[0]"),
                                                parse_noise(q[1], "system.qubit_noise[1]")};
    } else {
      const QubitNoise n = parse_noise(q, "system.qubit_noise");
      p.qubit_noise = std::array<QubitNoise, 2>{n, n};
    }
  }
  if (r.has("squeezing")) {
    Reader s(r.raw("squeezing"), "system.squeezing");
    SqueezeParams sq;
    const double db = s.number("power_db", 0.0);
    if (db < 0) Reader::fail("system.squeezing.power_db", "must be >= 0");
    sq.r = squeezing_r_from_db(db);
    sq.variant = s.string("variant", "rotating_angle", {"rotating_angle", "fixed_angle_filtered"}) == "rotating_angle"
                     ? SqueezeVariant::rotating_angle
                     : SqueezeVariant::fixed_angle_filtered;
    sq.phi0 = s.number("phi0_rad", 0.0);
    s.finish();
    p.squeezing = sq;
  }
  r.finish();
  return p;
}

inline StudyKind parse_study(const std::string& s) {
  for (auto k : {StudyKind::detuning_sweep, StudyKind::coupling_sweep, StudyKind::squeezing_sweep,
                 StudyKind::remote_gate, StudyKind::benchmark_point, StudyKind::t1t2_point})
    if (s == to_string(k)) return k;
  Reader::fail("study", "is not a known study");
}

}  // namespace detail

struct RunConfig {
  SweepSpec spec;
  std::optional<std::string> output_dir;
};

/// Validates the document and converts it to a study specification.
inline RunConfig parse_run_config(const nlohmann::json& doc) {
  using detail::Reader;
  Reader r(doc, "");
  RunConfig rc;
  auto& spec = rc.spec;
  spec.config = doc;
  spec.study = detail::parse_study(r.string("study", std::nullopt, {}));
  spec.name = r.string("name", std::string(to_string(spec.study)), {});
  if (spec.name.empty() || spec.name.find('/') != std::string::npos) Reader::fail("name", "must be a plain file stem");

  auto& setup = spec.setup;
  const std::string model = r.string("model", "rotating", {"lab", "rotating", "polaron_effective"});
  setup.model = model == "lab" ? ModelLevel::lab : model == "rotating" ? ModelLevel::rotating : ModelLevel::polaron_effective;
  setup.rwa = r.boolean("rwa", true);
  setup.frame = r.string("oscillator_frame", "oscillator", {"oscillator", "modulation"}) == "oscillator"
                    ? OscillatorFrame::oscillator
                    : OscillatorFrame::modulation;

  if (!r.has("system")) Reader::fail("system", "is required");
  spec.params = detail::parse_system(r.raw("system"));
  try {
    spec.params.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config_error, std::string("system: ") + e.what());
  }

  if (r.has("gate")) {
    Reader g(r.raw("gate"), "gate");
    const double theta_over_pi = g.number("theta_over_pi", 1.0);
    if (!(theta_over_pi > 0.0) || theta_over_pi > 2.0) Reader::fail("gate.theta_over_pi", "must lie in (0, 2]");
    setup.theta = theta_over_pi * kPi;
    setup.plan.approx = g.string("coupling_approx", "full", {"full", "rwa"}) == "rwa" ? CouplingApprox::rwa
                                                                                     : CouplingApprox::full;
    if (g.has("target_t_g_ns")) {
      const double t = g.number("target_t_g_ns");
      if (!(t > 0)) Reader::fail("gate.target_t_g_ns", "must be positive");
      setup.plan.target_t_g = t * 1e-9;
    }
    setup.plan.exact_phase = g.boolean("exact_phase", false);
    const cplx alpha(g.number("initial_alpha_re", 0.0), g.number("initial_alpha_im", 0.0));
    if (alpha != cplx(0.0)) setup.initial_alpha = {alpha};
    g.finish();
  }

  if (r.has("solver")) {
    Reader s(r.raw("solver"), "solver");
    auto& sc = setup.solver;
    sc.rel_tol = s.number("rel_tol", sc.rel_tol);
    sc.abs_tol = s.number("abs_tol", sc.abs_tol);
    if (s.has("max_step_ns")) {
      const double h = s.number("max_step_ns");
      if (!(h > 0)) Reader::fail("solver.max_step_ns", "must be positive");
      sc.max_step = h * 1e-9;
    }
    sc.fock_cutoff = s.integer("fock_cutoff", spec.params.two_oscillator ? 8 : 12);
    if (s.has("cutoff_escalation")) {
      Reader e(s.raw("cutoff_escalation"), "solver.cutoff_escalation");
      sc.cutoff_escalation.enabled = e.boolean("enabled", false);
      sc.cutoff_escalation.fidelity_delta_threshold =
          e.number("fidelity_delta_threshold", sc.cutoff_escalation.fidelity_delta_threshold);
      e.finish();
    }
    s.finish();
  } else if (spec.params.two_oscillator) {
    setup.solver.fock_cutoff = 8;
  }
  try {
    setup.solver.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config_error, std::string("solver: ") + e.what());
  }

  const char* axis = axis_key(spec.study);
  const char* series = series_key(spec.study);
  const bool point = spec.study == StudyKind::benchmark_point || spec.study == StudyKind::t1t2_point;
  if (r.has("sweep")) {
    if (point) Reader::fail("sweep", "is not used by single-point studies");
    Reader s(r.raw("sweep"), "sweep");
    spec.axis = s.numbers(axis);
    if (*series) spec.series = s.numbers(series);
    if (spec.study == StudyKind::squeezing_sweep) {
      const auto variants = s.strings("variants", {"rotating_angle", "fixed_angle_filtered"});
      if (!variants.empty()) {
        spec.squeeze.variants.clear();
        for (const auto& v : variants)
          spec.squeeze.variants.push_back(v == "rotating_angle" ? SqueezeVariant::rotating_angle
                                                                : SqueezeVariant::fixed_angle_filtered);
      }
      const auto levels = s.strings("model_levels", {"effective", "microscopic"});
      if (!levels.empty()) spec.squeeze.model_levels = levels;
      spec.squeeze.phi0_scan = s.integer("phi0_scan", spec.squeeze.phi0_scan);
      if (spec.squeeze.phi0_scan < 1) Reader::fail("sweep.phi0_scan", "must be >= 1");
      spec.squeeze.microscopic_max_db = s.number("microscopic_max_db", spec.squeeze.microscopic_max_db);
    }
    s.finish();
  }
  if (point) {
    const auto& sys = doc.at("system");
    if (sys.contains("delta_mhz_over_2pi")) spec.axis = {sys.at("delta_mhz_over_2pi").get<double>()};
  } else {
    if (spec.axis.empty()) Reader::fail(std::string("sweep.") + axis, "is required for " + std::string(to_string(spec.study)));
    detail::require_monotone(spec.axis, std::string("sweep.") + axis);
    if (*series) detail::require_monotone(spec.series, std::string("sweep.") + series);
  }
  if (spec.study == StudyKind::t1t2_point && !spec.params.qubit_noise)
    Reader::fail("system.qubit_noise", "is required for t1t2_point");
  if (spec.study == StudyKind::remote_gate && !spec.params.two_oscillator)
    Reader::fail("system.two_oscillator", "is required for remote_gate");
  if (spec.params.qubit_noise && setup.model == ModelLevel::polaron_effective && spec.study != StudyKind::benchmark_point)
    Reader::fail("model", "polaron_effective cannot carry qubit noise; use lab or rotating");

  if (r.has("output")) {
    Reader o(r.raw("output"), "output");
    if (o.has("dir")) rc.output_dir = o.string("dir", std::nullopt, {});
    spec.record_timing = o.boolean("record_timing", true);
    o.finish();
  }
  const int jobs = r.integer("jobs", 0);
  if (jobs < 0) Reader::fail("jobs", "must be >= 0");
  setup.jobs = resolve_jobs(jobs);
  r.finish();
  return rc;
}

/// Sets a dotted path (e.g. system.kappa_mhz_over_2pi) to VALUE, parsed as JSON when possible.
inline void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::config_error, "override '" + assignment + "' must look like KEY=VALUE");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  nlohmann::json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw Error(ErrorCode::config_error, "override key '" + path + "' has an empty component");
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    nlohmann::json& next = (*node)[parts[i]];
    if (next.is_null()) next = nlohmann::json::object();
    if (!next.is_object()) throw Error(ErrorCode::config_error, "override key '" + path + "' crosses a non-object");
    node = &next;
  }
  (*node)[parts.back()] = std::move(value);
}

inline nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_error, "cannot read config file '" + path + "'");
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::config_error, "config file '" + path + "' is not valid JSON");
  return doc;
}

/// --out, then the config's output.dir, then $LONGIGATE_OUT, then ./longigate_out.
inline std::string resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& rc) {
  if (flag && !flag->empty()) return *flag;
  if (rc.output_dir) return *rc.output_dir;
  if (const char* env = std::getenv("LONGIGATE_OUT"); env && *env) return env;
  return "longigate_out";
}

}  // namespace longigate
