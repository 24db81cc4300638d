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

#include "mafsim/topology.hpp"
#include "mafsim/vec2.hpp"

namespace mafsim {

// Desired shape, stored as per-agent offsets from the leader. Offsets are
// normalized at construction so the leader's own offset is exactly (0,0);
// only offset differences enter any control law, so this is loss-free.
struct FormationSpec {
  std::vector<Vec2> offsets;
  int leader = 0;

  static FormationSpec create(std::vector<Vec2> offsets, int leader_index);

  int size() const { return static_cast<int>(offsets.size()); }
  // Desired relative position r_ij = offsets[i] - offsets[j] (antisymmetric).
  Vec2 desired_relative(int i, int j) const { return offsets[i] - offsets[j]; }
  double desired_distance(int i, int j) const { return norm(offsets[i] - offsets[j]); }
  // Squared desired distance, computed without the square root so that the
  // squared-distance error is exactly zero at the desired shape.
  double desired_distance_sq(int i, int j) const { return norm_sq(offsets[i] - offsets[j]); }
  // Smallest desired separation over all agent pairs; +inf for one agent.
  double min_desired_pair_distance() const;
};

struct ControlGains {
  double epsilon = 1.0;  // follower formation gain
  double gamma = 0.3;    // leader target-attraction gain
  double mu = 1.0;       // repulsion weight in the control input
  double beta = 1.0;     // rigidity-gradient gain
};

enum class ControlMode { Lilf, Consensus, RigidityGradient };

// How the leader's formation term is computed: ErrorFeedback uses
// sum a_Nj (q_j - q_N - r_jN), which vanishes at the desired formation;
// Literal uses the constant sum a_Nj r_Nj.
enum class LeaderBias { ErrorFeedback, Literal };

ControlMode control_mode_from_string(const std::string& s);
std::string to_string(ControlMode m);
LeaderBias leader_bias_from_string(const std::string& s);
std::string to_string(LeaderBias b);

// Plain agreement term: sum over neighbors of (q_j - q_i).
Vec2 consensus_input(std::span<const Vec2> positions, const std::vector<int>& neighbors_i, int i);

// Formation error sum a_ij (q_j - q_i - r_ji); zero exactly when every
// neighbor sits at its desired relative position. Shared by the follower and
// leader laws, and by the conservation tests.
Vec2 formation_feedback(std::span<const Vec2> positions, const std::vector<int>& neighbors_i,
                        const FormationSpec& spec, int i);

// epsilon * formation_feedback + mu * f_i. Throws if i is the leader.
Vec2 follower_input(std::span<const Vec2> positions, const std::vector<int>& neighbors_i,
                    const FormationSpec& spec, int i, const ControlGains& gains, const Vec2& f_i);

// srm_term + gamma * (q_t - q_N) + formation term (per `bias`) + mu * f_leader.
Vec2 leader_input(std::span<const Vec2> positions, const std::vector<int>& neighbors_leader,
                  const FormationSpec& spec, const Vec2& target, const ControlGains& gains,
                  const Vec2& f_leader, const Vec2& srm_term,
                  LeaderBias bias = LeaderBias::ErrorFeedback);

// Distance-based gradient controller u_i = -beta * sum_{edges at i}
// (q_i - q_j) * delta_ij with delta_ij = ||q_i - q_j||^2 - d_ij^2.
// Returns all N inputs. Throws DegenerateEdge on coincident endpoints.
std::vector<Vec2> gradient_rigidity_input(std::span<const Vec2> positions,
                                          const FormationSpec& spec, std::span<const Edge> edges,
                                          double beta);

}  // namespace mafsim
