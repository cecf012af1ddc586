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

// longigate command-line driver: run | validate | selftest.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "longigate.hpp"

namespace lg = longigate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct Options {
  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<double> dephasing_factor;
};

lg::RunConfig load(const std::string& path, const Options& o) {
  nlohmann::json doc = lg::load_config_file(path);
  for (const auto& ov : o.overrides) lg::apply_override(doc, ov);
  if (o.jobs) doc["jobs"] = *o.jobs;
  lg::RunConfig rc = lg::parse_run_config(doc);
  if (o.dephasing_factor) rc.spec.setup.conventions.dephasing_rate_factor = *o.dephasing_factor;
  return rc;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw lg::Error(lg::ErrorCode::invalid_argument, "cannot write '" + path.string() + "'");
}

int cmd_run(const Options& o) {
  int code = kExitOk;
  for (const auto& path : o.configs) {
    const lg::RunConfig rc = load(path, o);
    const std::filesystem::path dir = lg::resolve_output_dir(o.out, rc);
    std::filesystem::create_directories(dir);
    const lg::SweepResult res = lg::run_study(rc.spec);
    std::ostringstream csv;
    lg::write_csv(csv, res);
    const auto csv_path = dir / (res.name + ".csv");
    write_text(csv_path, csv.str());
    write_text(dir / (res.name + ".provenance.json"), res.provenance.dump(2) + "\n");
    nlohmann::json summary = lg::summary_json(res);
    summary["csv"] = csv_path.string();
    std::cout << summary.dump() << std::endl;
    if (res.has_failures()) code = kExitPartial;
  }
  return code;
}

nlohmann::json schedule_line(const lg::GateSchedule& s) {
  return {{"t_g_ns", s.t_g * 1e9},
          {"n", s.n},
          {"j_bar_mhz_over_2pi", s.j_bar / (lg::kTwoPi * 1e6)},
          {"theta_achieved", s.theta_achieved},
          {"phase_within_tolerance", s.phase_within_tolerance}};
}

int cmd_validate(const Options& o) {
  int code = kExitOk;
  for (const auto& path : o.configs) {
    const lg::RunConfig rc = load(path, o);
    nlohmann::json points = nlohmann::json::array();
    bool valid = true;
    for (const auto& task : lg::detail::expand(rc.spec)) {
      nlohmann::json pt = {{"axis", task.axis},
                           {"series", task.series ? nlohmann::json(*task.series) : nlohmann::json(nullptr)},
                           {"variant", task.variant},
                           {"model_level", task.model_level}};
      try {
        if (task.exclusion) {
          // Inside the excluded band only the pole itself is fatal.
          try {
            pt.update(schedule_line(lg::plan_schedule(task.params, task.setup.theta, task.setup.plan)));
          } catch (const lg::Error& e) {
            if (e.code() == lg::ErrorCode::hybridized_mode_resonance) throw;
          }
          pt["status"] = "excluded: " + *task.exclusion;
        } else {
          const lg::GateSchedule s = lg::plan_schedule(task.params, task.setup.theta, task.setup.plan);
          pt.update(schedule_line(s));
          // Building the model catches unsupported combinations without integrating anything.
          lg::build_simulation(task.params, s, task.setup, task.setup.solver.fock_cutoff);
          pt["status"] = task.skip ? "skipped: " + *task.skip : std::string("ok");
        }
      } catch (const lg::Error& e) {
        valid = false;
        pt["status"] = std::string("error: ") + e.what();
        std::cerr << path << ": axis " << task.axis << ": " << e.what() << '\n';
      }
      points.push_back(std::move(pt));
    }
    std::cout << nlohmann::json{{"study", lg::to_string(rc.spec.study)},
                                {"name", rc.spec.name},
                                {"valid", valid},
                                {"points", std::move(points)}}
                     .dump()
              << std::endl;
    if (!valid) code = kExitFatal;
  }
  return code;
}

int cmd_selftest(const Options& o) {
  lg::SelftestOptions so;
  if (o.dephasing_factor) so.conventions.dephasing_rate_factor = *o.dephasing_factor;
  bool ok = true;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : lg::run_selftest(so)) {
    ok = ok && r.passed;
    if (!r.passed) std::cerr << "FAILED " << r.name << ": " << r.detail << '\n';
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  std::cout << nlohmann::json{{"selftest", ok ? "pass" : "fail"}, {"checks", std::move(checks)}}.dump() << std::endl;
  return ok ? kExitOk : kExitFatal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Longitudinal-coupling controlled-phase gate simulator"};
  app.set_version_flag("--version", std::string(lg::kVersion));
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", o.configs, "JSON run configuration (repeatable)")->check(CLI::ExistingFile);
    if (needs_config) c->required();
    sub->add_option("--override", o.overrides, "Set a config field, KEY=VALUE with a dotted KEY (repeatable)");
    sub->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  };
  CLI::App* run = app.add_subcommand("run", "Run the configured study and write CSV + provenance");
  add_common(run, true);
  run->add_option("--out", o.out, "Output directory (default: config output.dir, $LONGIGATE_OUT, ./longigate_out)");
  CLI::App* validate = app.add_subcommand("validate", "Check a config and print the planned schedules");
  add_common(validate, true);
  CLI::App* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");
  for (CLI::App* sub : {run, validate, selftest})
    sub->add_option("--dephasing-factor", o.dephasing_factor)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*run) return cmd_run(o);
    if (*validate) return cmd_validate(o);
    return cmd_selftest(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}
