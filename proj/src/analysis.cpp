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

#include "mafsim/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mafsim/error.hpp"

namespace mafsim {

DistanceErrors distance_errors(std::span<const Vec2> positions, const FormationSpec& spec,
                               std::span<const Edge> edges) {
  DistanceErrors out;
  out.delta.reserve(edges.size());
  out.omega.reserve(edges.size());
  for (const Edge& e : edges) {
    const Vec2 gap = positions[e.first] - positions[e.second];
    out.delta.push_back(norm_sq(gap) - spec.desired_distance_sq(e.first, e.second));
    out.omega.push_back(norm(gap) - spec.desired_distance(e.first, e.second));
  }
  return out;
}

double lyapunov_v(std::span<const double> delta) {
  double sum = 0.0;
  for (double d : delta) sum += d * d;
  return 0.25 * sum;
}

RigidityReport rigidity_matrix(std::span<const Vec2> positions, std::span<const Edge> edges) {
  const int n = static_cast<int>(positions.size());
  const int rows = static_cast<int>(edges.size());
  const int cols = 2 * n;

  RigidityReport rep;
  rep.rows = rows;
  rep.cols = cols;
  rep.matrix.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    const int i = edges[r].first;
    const int j = edges[r].second;
    const Vec2 d = positions[i] - positions[j];
    if (norm_sq(d) == 0.0) {
      throw SimError(ErrorCode::DegenerateEdge,
                     "edge (" + std::to_string(i) + "," + std::to_string(j) +
                         ") has coincident endpoints");
    }
    rep.matrix[static_cast<std::size_t>(r) * cols + 2 * i] = d.x;
    rep.matrix[static_cast<std::size_t>(r) * cols + 2 * i + 1] = d.y;
    rep.matrix[static_cast<std::size_t>(r) * cols + 2 * j] = -d.x;
    rep.matrix[static_cast<std::size_t>(r) * cols + 2 * j + 1] = -d.y;
  }
  if (rows == 0) return rep;

  Eigen::MatrixXd r_mat(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) r_mat(r, c) = rep.at(r, c);
  }

  // Numerical rank: singular values below 1e-9 * sigma_max count as zero.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r_mat);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index s = 0; s < sv.size(); ++s) {
    if (sv(s) > cutoff) ++rank;
  }
  rep.rank = rank;

  const Eigen::MatrixXd rrt = r_mat * r_mat.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rrt);
  rep.min_eig_rrt = eig.eigenvalues().minCoeff();
  rep.infinitesimally_rigid = (rank == 2 * n - 3);
  return rep;
}

DecayReport verify_lyapunov_decay(const TrajectoryLog& log, const FormationSpec& spec,
                                  double beta, double dt) {
  if (log.mode != ControlMode::RigidityGradient) {
    throw SimError(ErrorCode::WrongControlMode,
                   "decay verification needs a rigidity-gradient log, got " +
                       to_string(log.mode));
  }
  DecayReport rep;
  const int n_steps = static_cast<int>(log.steps.size());
  if (n_steps == 0) return rep;

  std::vector<double> v(n_steps);
  std::vector<double> dissipation(n_steps);  // beta * delta^T R R^T delta = beta * ||R^T delta||^2
  for (int k = 0; k < n_steps; ++k) {
    const std::vector<Vec2> q = log.positions_at(k);
    const DistanceErrors err = distance_errors(q, spec, log.eval_edges);
    v[k] = lyapunov_v(err.delta);
    // R^T delta accumulated agent-wise, avoiding the explicit matrix.
    std::vector<Vec2> rt_delta(q.size());
    for (std::size_t e = 0; e < log.eval_edges.size(); ++e) {
      const Vec2 d = q[log.eval_edges[e].first] - q[log.eval_edges[e].second];
      rt_delta[log.eval_edges[e].first] += err.delta[e] * d;
      rt_delta[log.eval_edges[e].second] -= err.delta[e] * d;
    }
    double quad = 0.0;
    for (const Vec2& g : rt_delta) quad += norm_sq(g);
    dissipation[k] = beta * quad;
  }

  rep.v_initial = v.front();
  rep.v_final = v.back();
  int nonincreasing = 0;
  int decreasing = 0;
  for (int k = 0; k + 1 < n_steps; ++k) {
    if (v[k + 1] <= v[k]) ++nonincreasing;
    if (v[k + 1] < v[k]) ++decreasing;
    const double residual = std::abs((v[k + 1] - v[k]) / dt + dissipation[k]);
    rep.max_rel_residual =
        std::max(rep.max_rel_residual, residual / std::max(v[k], 1e-12));
  }
  rep.transitions = n_steps - 1;
  if (rep.transitions > 0) {
    rep.nonincreasing_fraction = static_cast<double>(nonincreasing) / rep.transitions;
    rep.decreasing_fraction = static_cast<double>(decreasing) / rep.transitions;
  }
  return rep;
}

SafetyMetrics safety_metrics(const TrajectoryLog& log) {
  SafetyMetrics m;
  if (log.steps.empty()) return m;
  const int n = static_cast<int>(log.steps.front().agents.size());
  m.path_length.assign(n, 0.0);
  m.arrival_step = log.arrival_step;

  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    const StepRecord& rec = log.steps[k];
    m.min_interagent = std::min(m.min_interagent, rec.metrics.min_interagent);
    m.min_obstacle = std::min(m.min_obstacle, rec.metrics.min_obstacle);
    if (k > 0) {
      for (int i = 0; i < n; ++i) {
        m.path_length[i] +=
            distance(log.steps[k].agents[i].position, log.steps[k - 1].agents[i].position);
      }
    }
  }

  const int window = std::min<int>(50, static_cast<int>(log.steps.size()));
  double sq_sum = 0.0;
  int count = 0;
  for (std::size_t k = log.steps.size() - window; k < log.steps.size(); ++k) {
    for (std::size_t e = 0; e < log.eval_edges.size(); ++e) {
      const double have = distance(log.steps[k].agents[log.eval_edges[e].first].position,
                                   log.steps[k].agents[log.eval_edges[e].second].position);
      const double omega = have - log.eval_dist[e];
      sq_sum += omega * omega;
      ++count;
    }
  }
  m.terminal_formation_rms = count > 0 ? std::sqrt(sq_sum / count) : 0.0;
  return m;
}

}  // namespace mafsim
