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

#include "mafsim/trajectory_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mafsim/analysis.hpp"
#include "mafsim/error.hpp"

namespace mafsim {

namespace {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw SimError(ErrorCode::IoError, "double formatting failed");
  return std::string(buf, ptr);
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& os) {
  os << "k,agent,x,y,ux,uy,fatt_x,fatt_y,frep_x,frep_y,srm,lmp\n";
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    const StepRecord& rec = log.steps[k];
    for (std::size_t i = 0; i < rec.agents.size(); ++i) {
      const AgentRecord& a = rec.agents[i];
      os << k << ',' << i << ',' << format_double(a.position.x) << ','
         << format_double(a.position.y) << ',' << format_double(a.input.x) << ','
         << format_double(a.input.y) << ',' << format_double(a.attraction.x) << ','
         << format_double(a.attraction.y) << ',' << format_double(a.repulsion.x) << ','
         << format_double(a.repulsion.y) << ',' << (a.srm_active ? 1 : 0) << ','
         << (a.lmp ? 1 : 0) << '\n';
    }
  }
}

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SimError(ErrorCode::IoError, "cannot write '" + path + "'");
  write_trajectory_csv(log, out);
  if (!out) throw SimError(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::string trajectory_csv_string(const TrajectoryLog& log) {
  std::ostringstream os;
  write_trajectory_csv(log, os);
  return os.str();
}

json trajectory_to_json(const TrajectoryLog& log) {
  json j;
  j["control_mode"] = to_string(log.mode);
  j["leader"] = log.leader;
  j["target"] = json::array({log.target.x, log.target.y});
  j["dt"] = log.dt;
  json edges = json::array();
  for (const Edge& e : log.eval_edges) edges.push_back(json::array({e.first, e.second}));
  j["eval_edges"] = edges;
  j["eval_dist"] = log.eval_dist;
  j["outcome"] = to_string(log.outcome);
  j["arrival_step"] = log.arrival_step < 0 ? json(nullptr) : json(log.arrival_step);
  j["collision_step"] = log.collision_step < 0 ? json(nullptr) : json(log.collision_step);
  if (!log.collision_detail.empty()) j["collision_detail"] = log.collision_detail;
  j["disconnected_steps"] = log.disconnected_steps;

  json steps = json::array();
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    const StepRecord& rec = log.steps[k];
    json agents = json::array();
    for (const AgentRecord& a : rec.agents) {
      agents.push_back({{"x", a.position.x},
                        {"y", a.position.y},
                        {"ux", a.input.x},
                        {"uy", a.input.y},
                        {"fatt", json::array({a.attraction.x, a.attraction.y})},
                        {"frep", json::array({a.repulsion.x, a.repulsion.y})},
                        {"srm", a.srm_active ? 1 : 0},
                        {"lmp", a.lmp ? 1 : 0}});
    }
    steps.push_back({{"k", k},
                     {"agents", agents},
                     {"metrics",
                      {{"lyapunov_v", rec.metrics.lyapunov_v},
                       {"min_interagent", finite_or_null(rec.metrics.min_interagent)},
                       {"min_obstacle", finite_or_null(rec.metrics.min_obstacle)},
                       {"leader_target_dist", rec.metrics.leader_target_dist}}}});
  }
  j["steps"] = steps;
  return j;
}

void write_trajectory_json(const TrajectoryLog& log, const std::string& path) {
  write_json(trajectory_to_json(log), path);
}

json summarize(const TrajectoryLog& log, const Scenario& scenario) {
  const SafetyMetrics safety = safety_metrics(log);
  int srm_triggers = 0;
  int lmp_events = 0;
  for (const StepRecord& rec : log.steps) {
    for (const AgentRecord& a : rec.agents) {
      srm_triggers += a.srm_active ? 1 : 0;
      lmp_events += a.lmp ? 1 : 0;
    }
  }

  // Reported for every control mode; only the rigidity-gradient controller
  // carries a monotone-decay guarantee, elsewhere this is a diagnostic.
  double v_initial = 0.0, v_final = 0.0;
  int nonincreasing = 0;
  if (!log.steps.empty()) {
    v_initial = log.steps.front().metrics.lyapunov_v;
    v_final = log.steps.back().metrics.lyapunov_v;
    for (std::size_t k = 0; k + 1 < log.steps.size(); ++k) {
      if (log.steps[k + 1].metrics.lyapunov_v <= log.steps[k].metrics.lyapunov_v) ++nonincreasing;
    }
  }
  const int transitions = log.steps.empty() ? 0 : static_cast<int>(log.steps.size()) - 1;

  json j;
  j["scenario"] = scenario.name;
  j["outcome"] = to_string(log.outcome);
  j["arrival_step"] = log.arrival_step < 0 ? json(nullptr) : json(log.arrival_step);
  j["snapshots"] = log.steps.size();
  j["srm_triggers"] = srm_triggers;
  j["lmp_events"] = lmp_events;
  j["collision_step"] = log.collision_step < 0 ? json(nullptr) : json(log.collision_step);
  j["disconnected_steps"] = log.disconnected_steps.size();
  j["safety"] = {{"min_interagent", finite_or_null(safety.min_interagent)},
                 {"min_obstacle", finite_or_null(safety.min_obstacle)},
                 {"path_length", safety.path_length},
                 {"terminal_formation_rms", safety.terminal_formation_rms}};
  j["lyapunov"] = {{"v_initial", v_initial},
                   {"v_final", v_final},
                   {"nonincreasing_fraction",
                    transitions > 0 ? json(static_cast<double>(nonincreasing) / transitions)
                                    : json(nullptr)}};
  j["provenance"] = scenario.provenance.empty() ? json::object() : json(scenario.provenance);
  if (!scenario.warnings.empty()) j["warnings"] = scenario.warnings;
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SimError(ErrorCode::IoError, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw SimError(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::vector<AgentPath> read_trajectory_paths(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw SimError(ErrorCode::IoError, "cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw SimError(ErrorCode::ParseError, csv_path + ": empty file");
  }
  if (line.rfind("k,agent,x,y", 0) != 0) {
    throw SimError(ErrorCode::ParseError, csv_path + ": not a trajectory csv");
  }
  std::vector<AgentPath> paths;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) {
      throw SimError(ErrorCode::ParseError,
                     csv_path + ":" + std::to_string(line_no) + ": short row");
    }
    try {
      const int agent = std::stoi(cells[1]);
      const Vec2 p{std::stod(cells[2]), std::stod(cells[3])};
      if (agent >= static_cast<int>(paths.size())) {
        paths.resize(agent + 1);
        for (int i = 0; i <= agent; ++i) paths[i].agent = i;
      }
      paths[agent].points.push_back(p);
    } catch (const std::exception&) {
      throw SimError(ErrorCode::ParseError,
                     csv_path + ":" + std::to_string(line_no) + ": bad number");
    }
  }
  return paths;
}

std::vector<std::string> write_polylines(const std::vector<AgentPath>& paths,
                                         const std::string& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const AgentPath& p : paths) {
    const std::string path =
        (std::filesystem::path(dir) / (stem + "_agent" + std::to_string(p.agent) + ".txt"))
            .string();
    std::ofstream out(path);
    if (!out) throw SimError(ErrorCode::IoError, "cannot write '" + path + "'");
    for (const Vec2& pt : p.points) {
      out << format_double(pt.x) << ' ' << format_double(pt.y) << '\n';
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace mafsim
