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

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mafsim/control.hpp"
#include "mafsim/potential.hpp"
#include "mafsim/rng.hpp"
#include "mafsim/topology.hpp"
#include "mafsim/vec2.hpp"

namespace mafsim {

struct AgentState {
  Vec2 position;
  double heading = 0.0;  // radians in (-pi, pi]; logged, never drives motion
  Vec2 last_input;
};

// How an escape perturbation combines with the agent's field terms on an LMP
// step: Add keeps the field terms and adds the kick; Replace substitutes the
// kick for them.
enum class SrmMode { Add, Replace };

SrmMode srm_mode_from_string(const std::string& s);
std::string to_string(SrmMode m);

struct SimConfig {
  Topology topology;
  FormationSpec formation;
  Environment env;
  ApfGains apf;
  ControlGains gains;
  ControlMode mode = ControlMode::Lilf;
  LeaderBias leader_bias = LeaderBias::ErrorFeedback;
  SrmMode srm_mode = SrmMode::Add;
  bool srm_enabled = true;
  // Agent-agent repulsion radius; 0 means "derive the default" in finalize():
  // min(rho_m, 0.5 * smallest desired pair distance).
  double rho_a = 0.0;
  std::vector<AgentState> initial_states;
  int k_max = 800;
  double dt = 1.0;
  std::uint64_t seed = 1;

  // Fills derived defaults (rho_a). Call once before validate()/run().
  void finalize();
  // Throws SimError naming the violated invariant.
  void validate() const;
};

enum class Outcome { Arrived, NotArrived, CollisionAbort };

std::string to_string(Outcome o);

struct AgentRecord {
  Vec2 position;
  Vec2 input;
  Vec2 attraction;
  Vec2 repulsion;
  bool srm_active = false;
  bool lmp = false;
};

struct StepMetrics {
  double lyapunov_v = 0.0;
  double min_interagent = std::numeric_limits<double>::infinity();
  double min_obstacle = std::numeric_limits<double>::infinity();
  double leader_target_dist = 0.0;
};

struct StepRecord {
  std::vector<AgentRecord> agents;
  StepMetrics metrics;
  bool disconnected = false;  // radius mode only: graph not connected this step
};

// Full run history: snapshot k holds the positions at step k together with
// the inputs and forces computed from them (which produce snapshot k+1). The
// final snapshot carries positions and metrics only, with zero inputs.
struct TrajectoryLog {
  ControlMode mode = ControlMode::Lilf;
  int leader = 0;
  Vec2 target;
  double dt = 1.0;
  // Frozen evaluation edge set (V and formation-error metrics use it): the
  // static topology edges, or, in radius mode, the pairs within comm_radius
  // at the desired formation geometry.
  std::vector<Edge> eval_edges;
  std::vector<double> eval_dist;     // desired distance per eval edge
  std::vector<double> eval_dist_sq;  // squared form, exact at the desired shape
  std::vector<StepRecord> steps;
  Outcome outcome = Outcome::NotArrived;
  int arrival_step = -1;    // snapshot index, -1 when not arrived
  int collision_step = -1;  // snapshot index of the aborting step, -1 otherwise
  std::string collision_detail;
  std::vector<int> disconnected_steps;

  std::vector<Vec2> positions_at(int k) const;
};

// true iff ||q_leader - q_target|| <= eps_goal (boundary inclusive).
bool check_arrived(const Vec2& q_leader, const Vec2& q_target, double eps_goal);

// Mutable per-run state threaded through step(): the seeded generator and the
// per-agent rolling position windows used by stall detection.
struct StepContext {
  explicit StepContext(const SimConfig& cfg);

  Rng rng;
  std::vector<std::vector<Vec2>> windows;  // oldest first, capped at stall_window
  std::vector<Edge> eval_edges;
  std::vector<double> eval_dist;
  std::vector<double> eval_dist_sq;
};

struct StepResult {
  std::vector<AgentState> next;
  StepRecord record;
};

// One synchronous update: all N inputs are computed from the same snapshot,
// then q[k+1] = q[k] + dt * u[k] for every agent at once. Heading becomes
// atan2 of the input when it is nonzero, else keeps its previous value.
StepResult step(const std::vector<AgentState>& states, const SimConfig& cfg, StepContext& ctx,
                int k);

// Runs until arrival or k_max. A CoincidentWithObstacle during a step aborts
// the run with the partial log and a collision verdict; a non-finite state
// throws. Output is bit-identical for identical (config, seed).
TrajectoryLog run(const SimConfig& cfg);

}  // namespace mafsim
