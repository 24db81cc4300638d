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

#include <span>
#include <string>
#include <vector>

#include "mafsim/rng.hpp"
#include "mafsim/vec2.hpp"

namespace mafsim {

// Obstacle field and goal point shared by every agent.
struct Environment {
  std::vector<Vec2> obstacles;
  double rho_m = 1.0;  // obstacle action radius
  Vec2 target;

  // Soft checks only (hard invariants live in SimConfig::validate). Returns a
  // warning when the target lies strictly inside an obstacle's action disc.
  std::vector<std::string> soft_warnings() const;
};

struct ApfGains {
  double eta = 0.3;        // attraction gain
  double k_r = 0.1;        // repulsion gain
  double gamma_srm = 0.5;  // escape perturbation magnitude, must be in (0,1)
  double eps_lmp = 1e-3;   // force-balance threshold for stuck detection
  double eps_goal = 0.5;   // arrival distance
  int stall_window = 50;   // positions kept per agent for stall detection
  double stall_tol = 1e-4; // max displacement across a full window that still counts as stalled
};

// eta * (q_t - q_i): magnitude proportional to the distance to the target,
// directed from the agent toward it.
Vec2 attractive_force(const Vec2& q_i, const Vec2& q_t, double eta);

// Inverse-square barrier k_r * (1/rho_o - 1/rho_m) * (1/rho_o^2) away from the
// obstacle, zero outside rho_m (continuous at the boundary). Throws
// CoincidentWithObstacle once rho_o drops below the singularity floor
// 1e-6 * rho_m; such a state is a collision and must surface, not be clipped.
Vec2 repulsive_force(const Vec2& q_i, const Vec2& q_o, double rho_m, double k_r);

// Repulsion summed over all environment obstacles (radius env.rho_m) and all
// other agents treated as obstacles (radius rho_a).
Vec2 total_repulsion(int i, std::span<const Vec2> positions, const Environment& env,
                     const ApfGains& gains, double rho_a);

Vec2 resultant_force(const Vec2& f_att, const Vec2& f_rep);

// Stuck-in-local-minimum test: true iff the agent is not yet at the goal and
// either the net force has collapsed below eps_lmp or a full window of recent
// positions (oldest first) shows displacement below stall_tol.
bool detect_lmp(const Vec2& f_res, double rho_t, std::span<const Vec2> recent_positions,
                const ApfGains& gains);

// Escape kick: magnitude gamma_srm, uniformly random direction from the run's
// seeded generator. Consumed by the control layer only on LMP steps.
Vec2 srm_perturbation(const ApfGains& gains, Rng& rng);

}  // namespace mafsim
