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

#include <limits>
#include <span>
#include <vector>

#include "mafsim/control.hpp"
#include "mafsim/simulation.hpp"
#include "mafsim/topology.hpp"
#include "mafsim/vec2.hpp"

namespace mafsim {

struct DistanceErrors {
  std::vector<double> delta;  // ||q_i - q_j||^2 - d_ij^2 per edge
  std::vector<double> omega;  // ||q_i - q_j|| - d_ij per edge
};

// Per-edge squared and linear distance errors against the desired shape.
// The identity delta = omega^2 + 2 * omega * d_ij holds for every edge.
DistanceErrors distance_errors(std::span<const Vec2> positions, const FormationSpec& spec,
                               std::span<const Edge> edges);

// V = (1/4) * sum of delta^2.
double lyapunov_v(std::span<const double> delta);

struct RigidityReport {
  int rows = 0;  // |E|
  int cols = 0;  // 2N
  std::vector<double> matrix;  // row-major |E| x 2N
  int rank = 0;
  double min_eig_rrt = 0.0;  // smallest eigenvalue of R * R^T
  bool infinitesimally_rigid = false;  // rank == 2N - 3

  double at(int r, int c) const { return matrix[static_cast<std::size_t>(r) * cols + c]; }
};

// Row for edge (i,j): (q_i - q_j)^T in agent i's column pair, (q_j - q_i)^T in
// agent j's, zeros elsewhere. Rank uses a singular-value cutoff of
// 1e-9 * sigma_max; min_eig_rrt comes from a symmetric eigensolve of R R^T.
RigidityReport rigidity_matrix(std::span<const Vec2> positions, std::span<const Edge> edges);

struct DecayReport {
  int transitions = 0;                 // V[k] -> V[k+1] pairs examined
  double nonincreasing_fraction = 0.0; // share with V[k+1] <= V[k]
  double decreasing_fraction = 0.0;    // share with V[k+1] <  V[k]
  // max over steps of |(V[k+1]-V[k])/dt + beta * delta^T R R^T delta| / max(V[k], 1e-12)
  double max_rel_residual = 0.0;
  double v_initial = 0.0;
  double v_final = 0.0;
};

// Checks a rigidity-gradient log against the continuous-time identity
// dV/dt = -beta * delta^T R R^T delta via finite differences. Throws
// WrongControlMode for logs produced under any other controller.
DecayReport verify_lyapunov_decay(const TrajectoryLog& log, const FormationSpec& spec,
                                  double beta, double dt);

struct SafetyMetrics {
  double min_interagent = std::numeric_limits<double>::infinity();
  double min_obstacle = std::numeric_limits<double>::infinity();
  std::vector<double> path_length;
  int arrival_step = -1;
  // RMS of the per-edge linear error over the last 50 snapshots.
  double terminal_formation_rms = 0.0;
};

SafetyMetrics safety_metrics(const TrajectoryLog& log);

}  // namespace mafsim
