// Copyright 2026 The mafsim Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mafsim/analysis.hpp"
#include "mafsim/error.hpp"
#include "mafsim/scenario.hpp"
#include "mafsim/simulation.hpp"
#include "mafsim/trajectory_io.hpp"

namespace {

using mafsim::ErrorCode;
using mafsim::Scenario;
using mafsim::SimError;
using mafsim::TrajectoryLog;
using nlohmann::json;

constexpr int kExitArrived = 0;
constexpr int kExitNotArrived = 2;
constexpr int kExitCollision = 3;
constexpr int kExitConfig = 4;

int exit_code_for(const SimError& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::UnknownScenario:
    case ErrorCode::NotSymmetric:
    case ErrorCode::NonBinaryEntry:
    case ErrorCode::SelfLoop:
    case ErrorCode::Disconnected:
    case ErrorCode::NonPositiveRadius:
    case ErrorCode::IndexOutOfRange:
      return kExitConfig;
    default:
      return 1;
  }
}

std::string default_out_dir() {
  if (const char* env = std::getenv("MAFSIM_OUT_DIR")) return env;
  return "mafsim_out";
}

// A scenario reference is a file path if it exists on disk, else a builtin name.
json resolve_config_json(const std::string& ref) {
  if (std::filesystem::exists(ref)) {
    std::ifstream in(ref);
    if (!in) throw SimError(ErrorCode::IoError, "cannot open '" + ref + "'");
    try {
      return json::parse(in);
    } catch (const json::parse_error& e) {
      throw SimError(ErrorCode::ParseError, ref + ": " + e.what());
    }
  }
  return mafsim::scenario_to_json(mafsim::builtin_scenario(ref));
}

Scenario prepare_scenario(const std::string& ref, const std::vector<std::string>& overrides,
                          long long seed, double randomize_radius) {
  json cfg = resolve_config_json(ref);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw SimError(ErrorCode::ValidationError, "--set expects key=value, got '" + kv + "'");
    }
    mafsim::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed >= 0) cfg["sim"]["seed"] = seed;
  Scenario s = mafsim::scenario_from_json(cfg);
  if (s.name.empty()) s.name = std::filesystem::path(ref).stem().string();
  if (randomize_radius > 0.0) {
    mafsim::Rng rng(s.config.seed);
    for (mafsim::AgentState& st : s.config.initial_states) {
      st.position = rng.in_disc(st.position, randomize_radius);
    }
  }
  for (const std::string& w : s.warnings) std::cerr << "warning: " << w << "\n";
  return s;
}

int outcome_exit(const TrajectoryLog& log) {
  switch (log.outcome) {
    case mafsim::Outcome::Arrived: return kExitArrived;
    case mafsim::Outcome::NotArrived: return kExitNotArrived;
    case mafsim::Outcome::CollisionAbort: return kExitCollision;
  }
  return 1;
}

int cmd_run(const std::string& ref, const std::vector<std::string>& overrides, long long seed,
            double randomize_radius, std::string out_dir, const std::string& format) {
  Scenario s = prepare_scenario(ref, overrides, seed, randomize_radius);
  const TrajectoryLog log = mafsim::run(s.config);

  std::filesystem::create_directories(out_dir);
  const std::string stem = (std::filesystem::path(out_dir) / s.name).string();
  std::string traj_path;
  if (format == "json") {
    traj_path = stem + "_trajectory.json";
    mafsim::write_trajectory_json(log, traj_path);
  } else {
    traj_path = stem + "_trajectory.csv";
    mafsim::write_trajectory_csv(log, traj_path);
  }
  const json summary = mafsim::summarize(log, s);
  const std::string summary_path = stem + "_summary.json";
  mafsim::write_json(summary, summary_path);

  std::cout << "scenario: " << s.name << "\n"
            << "outcome: " << to_string(log.outcome);
  if (log.outcome == mafsim::Outcome::Arrived) {
    std::cout << " (step " << log.arrival_step << ")";
  }
  if (log.outcome == mafsim::Outcome::CollisionAbort) {
    std::cout << " (" << log.collision_detail << ")";
  }
  std::cout << "\n"
            << "snapshots: " << log.steps.size() << "\n"
            << "srm triggers: " << summary["srm_triggers"] << "\n"
            << "min inter-agent distance: " << summary["safety"]["min_interagent"] << "\n"
            << "min obstacle clearance: " << summary["safety"]["min_obstacle"] << "\n"
            << "terminal formation rms: " << summary["safety"]["terminal_formation_rms"] << "\n"
            << "wrote " << traj_path << "\n"
            << "wrote " << summary_path << "\n";
  return outcome_exit(log);
}

int cmd_list() {
  for (const std::string& name : mafsim::builtin_scenario_names()) {
    const Scenario s = mafsim::builtin_scenario(name);
    std::cout << name << "  (N=" << s.config.topology.size() << ")  " << s.description << "\n";
  }
  return 0;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

int cmd_verify(const std::string& ref, const std::vector<std::string>& overrides,
               long long seed) {
  Scenario s = prepare_scenario(ref, overrides, seed, 0.0);
  const TrajectoryLog log = mafsim::run(s.config);
  const mafsim::SafetyMetrics safety = mafsim::safety_metrics(log);
  std::vector<Check> checks;

  {
    Check c;
    c.name = "arrival";
    c.pass = log.outcome == mafsim::Outcome::Arrived;
    c.detail = c.pass ? "step " + std::to_string(log.arrival_step) + " <= " +
                            std::to_string(s.config.k_max)
                      : to_string(log.outcome);
    checks.push_back(c);
  }
  if (!log.eval_edges.empty()) {
    Check c;
    c.name = "formation-error";
    double worst = 0.0;
    const std::size_t first = log.steps.size() > 50 ? log.steps.size() - 50 : 0;
    for (std::size_t k = first; k < log.steps.size(); ++k) {
      const std::vector<mafsim::Vec2> q = log.positions_at(static_cast<int>(k));
      for (std::size_t e = 0; e < log.eval_edges.size(); ++e) {
        if (log.eval_dist[e] <= 0.0) continue;
        const double have = mafsim::distance(q[log.eval_edges[e].first],
                                             q[log.eval_edges[e].second]);
        worst = std::max(worst, std::abs(have - log.eval_dist[e]) / log.eval_dist[e]);
      }
    }
    c.pass = worst < 0.05;
    c.detail = "max |omega|/d = " + std::to_string(worst) + " over final 50 snapshots";
    checks.push_back(c);
  }
  if (!s.config.env.obstacles.empty()) {
    Check c;
    c.name = "obstacle-clearance";
    c.pass = log.outcome != mafsim::Outcome::CollisionAbort && safety.min_obstacle > 0.0;
    c.detail = "min " + std::to_string(safety.min_obstacle);
    checks.push_back(c);
  }
  if (s.config.topology.size() >= 2) {
    Check c;
    c.name = "inter-agent-distance";
    c.pass = safety.min_interagent > 0.1;
    c.detail = "min " + std::to_string(safety.min_interagent) + " > 0.1";
    checks.push_back(c);
  }
  {
    Check c;
    c.name = "determinism";
    const std::string a = mafsim::trajectory_csv_string(log);
    const std::string b = mafsim::trajectory_csv_string(mafsim::run(s.config));
    c.pass = a == b;
    c.detail = c.pass ? "identical csv (" + std::to_string(a.size()) + " bytes)"
                      : "reruns differ";
    checks.push_back(c);
  }

  bool all_ok = true;
  std::cout << "verify " << s.name << "\n";
  for (const Check& c : checks) {
    all_ok = all_ok && c.pass;
    std::cout << "  " << std::left << std::setw(24) << c.name << (c.pass ? "PASS" : "FAIL")
              << "  " << c.detail << "\n";
  }
  std::cout << (all_ok ? "all checks passed" : "some checks FAILED") << "\n";
  return all_ok ? 0 : 1;
}

int cmd_plotdata(const std::string& csv_path, const std::string& out_dir) {
  const auto paths = mafsim::read_trajectory_paths(csv_path);
  const std::string stem = std::filesystem::path(csv_path).stem().string();
  for (const std::string& f : mafsim::write_polylines(paths, out_dir, stem)) {
    std::cout << "wrote " << f << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D multi-agent formation control simulator"};
  app.require_subcommand(1);

  std::string scenario_ref;
  std::string out_dir = default_out_dir();
  std::string format = "csv";
  long long seed = -1;
  double randomize_radius = 0.0;
  std::vector<std::string> overrides;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and export trajectory + summary");
  run_cmd->add_option("scenario", scenario_ref, "builtin name or config file path")->required();
  run_cmd->add_option("--out", out_dir, "output directory (default $MAFSIM_OUT_DIR or mafsim_out)");
  run_cmd->add_option("--format", format, "trajectory format")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--seed", seed, "override the run seed");
  run_cmd->add_option("--set", overrides, "override a config field, e.g. control.epsilon=2");
  run_cmd->add_option("--randomize-init", randomize_radius,
                      "resample each initial position in a disc of this radius");

  auto* list_cmd = app.add_subcommand("list", "List builtin scenarios");

  auto* verify_cmd =
      app.add_subcommand("verify", "Run a scenario and print its pass/fail check table");
  verify_cmd->add_option("scenario", scenario_ref, "builtin name or config file path")->required();
  verify_cmd->add_option("--seed", seed, "override the run seed");
  verify_cmd->add_option("--set", overrides, "override a config field");

  std::string csv_path;
  auto* plot_cmd =
      app.add_subcommand("plotdata", "Emit per-agent x/y polyline files from a trajectory csv");
  plot_cmd->add_option("trajectory", csv_path, "trajectory csv produced by run")->required();
  plot_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(scenario_ref, overrides, seed, randomize_radius, out_dir, format);
    if (*list_cmd) return cmd_list();
    if (*verify_cmd) return cmd_verify(scenario_ref, overrides, seed);
    if (*plot_cmd) return cmd_plotdata(csv_path, out_dir);
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
