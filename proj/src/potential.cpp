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

#include "mafsim/potential.hpp"

#include <algorithm>

#include "mafsim/error.hpp"

namespace mafsim {

std::vector<std::string> Environment::soft_warnings() const {
  std::vector<std::string> warnings;
  for (std::size_t m = 0; m < obstacles.size(); ++m) {
    if (distance(target, obstacles[m]) < rho_m) {
      warnings.push_back("target lies inside the action disc of obstacle " + std::to_string(m));
    }
  }
  return warnings;
}

Vec2 attractive_force(const Vec2& q_i, const Vec2& q_t, double eta) {
  return eta * (q_t - q_i);
}

Vec2 repulsive_force(const Vec2& q_i, const Vec2& q_o, double rho_m, double k_r) {
  const Vec2 away = q_i - q_o;
  const double rho_o = norm(away);
  if (rho_o > rho_m) return {0.0, 0.0};
  if (rho_o < 1e-6 * rho_m) {
    throw SimError(ErrorCode::CoincidentWithObstacle,
                   "separation " + std::to_string(rho_o) + " below singularity floor");
  }
  const double magnitude = k_r * (1.0 / rho_o - 1.0 / rho_m) / (rho_o * rho_o);
  return (magnitude / rho_o) * away;
}

Vec2 total_repulsion(int i, std::span<const Vec2> positions, const Environment& env,
                     const ApfGains& gains, double rho_a) {
  if (i < 0 || i >= static_cast<int>(positions.size())) {
    throw SimError(ErrorCode::IndexOutOfRange, "agent index " + std::to_string(i));
  }
  Vec2 sum;
  for (std::size_t m = 0; m < env.obstacles.size(); ++m) {
    try {
      sum += repulsive_force(positions[i], env.obstacles[m], env.rho_m, gains.k_r);
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::CoincidentWithObstacle) throw;
      throw SimError(ErrorCode::CoincidentWithObstacle,
                     "agent " + std::to_string(i) + " on obstacle " + std::to_string(m));
    }
  }
  for (int j = 0; j < static_cast<int>(positions.size()); ++j) {
    if (j == i) continue;
    try {
      sum += repulsive_force(positions[i], positions[j], rho_a, gains.k_r);
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::CoincidentWithObstacle) throw;
      throw SimError(ErrorCode::CoincidentWithObstacle,
                     "agent " + std::to_string(i) + " on agent " + std::to_string(j));
    }
  }
  return sum;
}

Vec2 resultant_force(const Vec2& f_att, const Vec2& f_rep) { return f_att + f_rep; }

bool detect_lmp(const Vec2& f_res, double rho_t, std::span<const Vec2> recent_positions,
                const ApfGains& gains) {
  if (rho_t <= gains.eps_goal) return false;  // arrived, not stuck
  if (norm(f_res) < gains.eps_lmp) return true;
  if (static_cast<int>(recent_positions.size()) == gains.stall_window &&
      !recent_positions.empty()) {
    double moved = 0.0;
    for (const Vec2& p : recent_positions) {
      moved = std::max(moved, distance(p, recent_positions.front()));
    }
    if (moved < gains.stall_tol) return true;
  }
  return false;
}

Vec2 srm_perturbation(const ApfGains& gains, Rng& rng) {
  return gains.gamma_srm * rng.direction();
}

}  // namespace mafsim
