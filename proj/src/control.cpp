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

#include "mafsim/control.hpp"

#include <limits>

#include "mafsim/error.hpp"

namespace mafsim {

FormationSpec FormationSpec::create(std::vector<Vec2> offsets, int leader_index) {
  if (offsets.empty()) {
    throw SimError(ErrorCode::ValidationError, "formation needs at least one agent");
  }
  if (leader_index < 0 || leader_index >= static_cast<int>(offsets.size())) {
    throw SimError(ErrorCode::IndexOutOfRange,
                   "leader index " + std::to_string(leader_index) + " out of range");
  }
  for (const Vec2& o : offsets) {
    if (!is_finite(o)) throw SimError(ErrorCode::ValidationError, "formation offset not finite");
  }
  const Vec2 shift = offsets[leader_index];
  for (Vec2& o : offsets) o -= shift;
  offsets[leader_index] = {0.0, 0.0};
  return FormationSpec{std::move(offsets), leader_index};
}

double FormationSpec::min_desired_pair_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      best = std::min(best, desired_distance(i, j));
    }
  }
  return best;
}

ControlMode control_mode_from_string(const std::string& s) {
  if (s == "lilf") return ControlMode::Lilf;
  if (s == "consensus") return ControlMode::Consensus;
  if (s == "rigidity-gradient") return ControlMode::RigidityGradient;
  throw SimError(ErrorCode::ValidationError, "unknown control mode '" + s + "'");
}

std::string to_string(ControlMode m) {
  switch (m) {
    case ControlMode::Lilf: return "lilf";
    case ControlMode::Consensus: return "consensus";
    case ControlMode::RigidityGradient: return "rigidity-gradient";
  }
  return "?";
}

LeaderBias leader_bias_from_string(const std::string& s) {
  if (s == "error") return LeaderBias::ErrorFeedback;
  if (s == "literal") return LeaderBias::Literal;
  throw SimError(ErrorCode::ValidationError, "unknown leader_bias '" + s + "'");
}

std::string to_string(LeaderBias b) {
  return b == LeaderBias::ErrorFeedback ? "error" : "literal";
}

Vec2 consensus_input(std::span<const Vec2> positions, const std::vector<int>& neighbors_i,
                     int i) {
  Vec2 u;
  for (int j : neighbors_i) u += positions[j] - positions[i];
  return u;
}

Vec2 formation_feedback(std::span<const Vec2> positions, const std::vector<int>& neighbors_i,
                        const FormationSpec& spec, int i) {
  Vec2 u;
  for (int j : neighbors_i) {
    u += positions[j] - positions[i] - spec.desired_relative(j, i);
  }
  return u;
}

Vec2 follower_input(std::span<const Vec2> positions, const std::vector<int>& neighbors_i,
                    const FormationSpec& spec, int i, const ControlGains& gains,
                    const Vec2& f_i) {
  if (i == spec.leader) {
    throw SimError(ErrorCode::LeaderPassedToFollowerLaw,
                   "agent " + std::to_string(i) + " is the leader");
  }
  return gains.epsilon * formation_feedback(positions, neighbors_i, spec, i) + gains.mu * f_i;
}

Vec2 leader_input(std::span<const Vec2> positions, const std::vector<int>& neighbors_leader,
                  const FormationSpec& spec, const Vec2& target, const ControlGains& gains,
                  const Vec2& f_leader, const Vec2& srm_term, LeaderBias bias) {
  const int n_idx = spec.leader;
  Vec2 formation_term;
  if (bias == LeaderBias::ErrorFeedback) {
    formation_term = formation_feedback(positions, neighbors_leader, spec, n_idx);
  } else {
    for (int j : neighbors_leader) formation_term += spec.desired_relative(n_idx, j);
  }
  return srm_term + gains.gamma * (target - positions[n_idx]) + formation_term +
         gains.mu * f_leader;
}

std::vector<Vec2> gradient_rigidity_input(std::span<const Vec2> positions,
                                          const FormationSpec& spec, std::span<const Edge> edges,
                                          double beta) {
  std::vector<Vec2> u(positions.size());
  for (const Edge& e : edges) {
    const int i = e.first;
    const int j = e.second;
    const Vec2 d = positions[i] - positions[j];
    if (norm_sq(d) == 0.0) {
      throw SimError(ErrorCode::DegenerateEdge,
                     "edge (" + std::to_string(i) + "," + std::to_string(j) +
                         ") has coincident endpoints");
    }
    const double delta = norm_sq(d) - spec.desired_distance_sq(i, j);
    u[i] -= beta * delta * d;
    u[j] += beta * delta * d;
  }
  return u;
}

}  // namespace mafsim
