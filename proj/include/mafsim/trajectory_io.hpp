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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mafsim/scenario.hpp"
#include "mafsim/simulation.hpp"

namespace mafsim {

// Shortest round-trip decimal form; identical logs serialize byte-identically.
std::string format_double(double v);

// Columns: k,agent,x,y,ux,uy,fatt_x,fatt_y,frep_x,frep_y,srm,lmp — one row
// per (snapshot, agent).
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& os);
void write_trajectory_csv(const TrajectoryLog& log, const std::string& path);
std::string trajectory_csv_string(const TrajectoryLog& log);

// Mirrors the TrajectoryLog structure, per-step metrics included.
nlohmann::json trajectory_to_json(const TrajectoryLog& log);
void write_trajectory_json(const TrajectoryLog& log, const std::string& path);

// Arrival/safety/Lyapunov digest of a run plus the scenario's provenance echo.
nlohmann::json summarize(const TrajectoryLog& log, const Scenario& scenario);
void write_json(const nlohmann::json& j, const std::string& path);

struct AgentPath {
  int agent = 0;
  std::vector<Vec2> points;
};

// Reads the positions back out of a trajectory CSV, grouped per agent.
std::vector<AgentPath> read_trajectory_paths(const std::string& csv_path);

// One two-column "x y" polyline file per agent: <dir>/<stem>_agent<i>.txt.
// Returns the written paths.
std::vector<std::string> write_polylines(const std::vector<AgentPath>& paths,
                                         const std::string& dir, const std::string& stem);

}  // namespace mafsim
