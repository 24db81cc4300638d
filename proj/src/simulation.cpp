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

#include "mafsim/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "mafsim/error.hpp"

namespace mafsim {

namespace {

std::vector<Vec2> positions_of(const std::vector<AgentState>& states) {
  std::vector<Vec2> q;
  q.reserve(states.size());
  for (const AgentState& s : states) q.push_back(s.position);
  return q;
}

// Evaluation edge set frozen at run start; see TrajectoryLog.
void eval_edge_set(const SimConfig& cfg, std::vector<Edge>& edges, std::vector<double>& dist,
                   std::vector<double>& dist_sq) {
  if (cfg.topology.mode() == TopologyMode::Static) {
    edges = cfg.topology.edge_list();
  } else {
    edges = edges_from(cfg.topology.neighbor_sets(cfg.formation.offsets));
  }
  dist.clear();
  dist_sq.clear();
  dist.reserve(edges.size());
  dist_sq.reserve(edges.size());
  for (const Edge& e : edges) {
    dist.push_back(cfg.formation.desired_distance(e.first, e.second));
    dist_sq.push_back(cfg.formation.desired_distance_sq(e.first, e.second));
  }
}

StepMetrics compute_metrics(const std::vector<Vec2>& q, const SimConfig& cfg,
                            const std::vector<Edge>& eval_edges,
                            const std::vector<double>& eval_dist_sq) {
  StepMetrics m;
  double v = 0.0;
  for (std::size_t e = 0; e < eval_edges.size(); ++e) {
    const double delta =
        norm_sq(q[eval_edges[e].first] - q[eval_edges[e].second]) - eval_dist_sq[e];
    v += delta * delta;
  }
  m.lyapunov_v = 0.25 * v;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      m.min_interagent = std::min(m.min_interagent, distance(q[i], q[j]));
    }
    for (const Vec2& o : cfg.env.obstacles) {
      m.min_obstacle = std::min(m.min_obstacle, distance(q[i], o));
    }
  }
  m.leader_target_dist = distance(q[cfg.formation.leader], cfg.env.target);
  return m;
}

StepRecord snapshot_only(const std::vector<AgentState>& states, const SimConfig& cfg,
                         const std::vector<Edge>& eval_edges,
                         const std::vector<double>& eval_dist_sq) {
  StepRecord rec;
  rec.agents.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) rec.agents[i].position = states[i].position;
  rec.metrics = compute_metrics(positions_of(states), cfg, eval_edges, eval_dist_sq);
  return rec;
}

}  // namespace

SrmMode srm_mode_from_string(const std::string& s) {
  if (s == "add") return SrmMode::Add;
  if (s == "replace") return SrmMode::Replace;
  throw SimError(ErrorCode::ValidationError, "unknown srm mode '" + s + "'");
}

std::string to_string(SrmMode m) { return m == SrmMode::Add ? "add" : "replace"; }

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Arrived: return "arrived";
    case Outcome::NotArrived: return "not_arrived";
    case Outcome::CollisionAbort: return "collision_abort";
  }
  return "?";
}

void SimConfig::finalize() {
  if (rho_a > 0.0) return;
  if (mode != ControlMode::Lilf || topology.size() < 2) {
    rho_a = env.rho_m;  // unused by these modes, kept positive for validation
    return;
  }
  rho_a = std::min(env.rho_m, 0.5 * formation.min_desired_pair_distance());
}

void SimConfig::validate() const {
  const int n = topology.size();
  if (n < 1) throw SimError(ErrorCode::ValidationError, "topology is unset");
  if (formation.size() != n) {
    throw SimError(ErrorCode::ValidationError, "formation has " +
                                                   std::to_string(formation.size()) +
                                                   " offsets for " + std::to_string(n) + " agents");
  }
  if (formation.leader < 0 || formation.leader >= n) {
    throw SimError(ErrorCode::IndexOutOfRange, "leader index out of range");
  }
  if (formation.offsets[formation.leader] != Vec2{0.0, 0.0}) {
    throw SimError(ErrorCode::ValidationError, "leader offset must be (0,0)");
  }
  if (!(env.rho_m > 0.0)) {
    throw SimError(ErrorCode::ValidationError, "rho_m must be > 0");
  }
  for (const Vec2& o : env.obstacles) {
    if (!is_finite(o)) throw SimError(ErrorCode::ValidationError, "obstacle not finite");
  }
  if (!is_finite(env.target)) throw SimError(ErrorCode::ValidationError, "target not finite");
  if (!(apf.eta > 0.0)) throw SimError(ErrorCode::ValidationError, "eta must be > 0");
  if (!(apf.k_r > 0.0)) throw SimError(ErrorCode::ValidationError, "k_r must be > 0");
  if (!(apf.gamma_srm > 0.0 && apf.gamma_srm < 1.0)) {
    throw SimError(ErrorCode::ValidationError, "srm gamma must be in (0,1)");
  }
  if (!(apf.eps_lmp > 0.0)) throw SimError(ErrorCode::ValidationError, "eps_lmp must be > 0");
  if (!(apf.eps_goal > 0.0)) throw SimError(ErrorCode::ValidationError, "eps_goal must be > 0");
  if (apf.stall_window < 1) {
    throw SimError(ErrorCode::ValidationError, "stall_window must be >= 1");
  }
  if (!(apf.stall_tol > 0.0)) throw SimError(ErrorCode::ValidationError, "stall_tol must be > 0");
  if (!(gains.epsilon > 0.0 && gains.gamma > 0.0 && gains.mu > 0.0 && gains.beta > 0.0)) {
    throw SimError(ErrorCode::ValidationError, "control gains must all be > 0");
  }
  if (static_cast<int>(initial_states.size()) != n) {
    throw SimError(ErrorCode::ValidationError,
                   "expected " + std::to_string(n) + " initial states, got " +
                       std::to_string(initial_states.size()));
  }
  for (const AgentState& s : initial_states) {
    if (!is_finite(s.position)) {
      throw SimError(ErrorCode::ValidationError, "initial position not finite");
    }
    if (!std::isfinite(s.heading)) {
      throw SimError(ErrorCode::ValidationError, "initial heading not finite");
    }
  }
  if (k_max < 1) throw SimError(ErrorCode::ValidationError, "k_max must be >= 1");
  if (!(dt > 0.0)) throw SimError(ErrorCode::ValidationError, "dt must be > 0");
  if (!(rho_a > 0.0)) {
    throw SimError(ErrorCode::ValidationError, "rho_a must be > 0 (call finalize())");
  }
  // Formation feasibility: desired separations must lie outside the
  // agent-agent repulsion zone, or the equilibrium shape is unreachable.
  if (mode == ControlMode::Lilf && n >= 2) {
    const double min_pair = formation.min_desired_pair_distance();
    if (!(rho_a < min_pair)) {
      throw SimError(ErrorCode::ValidationError,
                     "rho_a = " + std::to_string(rho_a) +
                         " must be smaller than the smallest desired pair distance " +
                         std::to_string(min_pair));
    }
  }
  if (mode != ControlMode::Consensus) {
    // Desired distances on interaction edges must be positive.
    if (topology.mode() == TopologyMode::Static) {
      for (const Edge& e : topology.edge_list()) {
        if (!(formation.desired_distance(e.first, e.second) > 0.0)) {
          throw SimError(ErrorCode::ValidationError,
                         "desired distance on edge (" + std::to_string(e.first) + "," +
                             std::to_string(e.second) + ") is zero");
        }
      }
    } else {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (!(formation.desired_distance(i, j) > 0.0)) {
            throw SimError(ErrorCode::ValidationError, "formation offsets must be distinct");
          }
        }
      }
    }
  }
}

bool check_arrived(const Vec2& q_leader, const Vec2& q_target, double eps_goal) {
  return distance(q_leader, q_target) <= eps_goal;
}

StepContext::StepContext(const SimConfig& cfg) : rng(cfg.seed), windows(cfg.topology.size()) {
  eval_edge_set(cfg, eval_edges, eval_dist, eval_dist_sq);
}

std::vector<Vec2> TrajectoryLog::positions_at(int k) const {
  std::vector<Vec2> q;
  q.reserve(steps[k].agents.size());
  for (const AgentRecord& a : steps[k].agents) q.push_back(a.position);
  return q;
}

StepResult step(const std::vector<AgentState>& states, const SimConfig& cfg, StepContext& ctx,
                int k) {
  const int n = cfg.topology.size();
  const std::vector<Vec2> q = positions_of(states);
  const NeighborSets nbrs = cfg.topology.neighbor_sets(q);

  StepRecord rec;
  rec.agents.resize(n);
  for (int i = 0; i < n; ++i) rec.agents[i].position = q[i];
  rec.metrics = compute_metrics(q, cfg, ctx.eval_edges, ctx.eval_dist_sq);
  if (cfg.topology.mode() == TopologyMode::RadiusBased && !Topology::connected(nbrs)) {
    rec.disconnected = true;
  }

  std::vector<Vec2> u(n);
  switch (cfg.mode) {
    case ControlMode::Consensus: {
      for (int i = 0; i < n; ++i) {
        u[i] = cfg.gains.epsilon * consensus_input(q, nbrs[i], i);
      }
      break;
    }
    case ControlMode::RigidityGradient: {
      const std::vector<Edge> edges = edges_from(nbrs);
      u = gradient_rigidity_input(q, cfg.formation, edges, cfg.gains.beta);
      break;
    }
    case ControlMode::Lilf: {
      std::vector<Vec2> f_att(n), f_rep(n), srm(n);
      std::vector<char> lmp(n, 0), srm_active(n, 0);
      for (int i = 0; i < n; ++i) {
        f_att[i] = attractive_force(q[i], cfg.env.target, cfg.apf.eta);
        f_rep[i] = total_repulsion(i, q, cfg.env, cfg.apf, cfg.rho_a);
        auto& win = ctx.windows[i];
        win.push_back(q[i]);
        if (static_cast<int>(win.size()) > cfg.apf.stall_window) win.erase(win.begin());
        const double rho_t = distance(cfg.env.target, q[i]);
        lmp[i] = detect_lmp(resultant_force(f_att[i], f_rep[i]), rho_t, win, cfg.apf);
        if (lmp[i] && cfg.srm_enabled) {
          srm[i] = srm_perturbation(cfg.apf, ctx.rng);
          srm_active[i] = 1;
        }
      }
      for (int i = 0; i < n; ++i) {
        const bool replace = cfg.srm_mode == SrmMode::Replace && srm_active[i];
        if (i == cfg.formation.leader) {
          if (replace) {
            // Literal escape semantics: the field terms give way to the kick.
            u[i] = formation_feedback(q, nbrs[i], cfg.formation, i) + srm[i];
          } else {
            u[i] = leader_input(q, nbrs[i], cfg.formation, cfg.env.target, cfg.gains, f_rep[i],
                                srm[i], cfg.leader_bias);
          }
        } else {
          if (replace) {
            u[i] = cfg.gains.epsilon * formation_feedback(q, nbrs[i], cfg.formation, i) + srm[i];
          } else {
            u[i] = follower_input(q, nbrs[i], cfg.formation, i, cfg.gains, f_rep[i]) + srm[i];
          }
        }
      }
      for (int i = 0; i < n; ++i) {
        rec.agents[i].attraction = f_att[i];
        rec.agents[i].repulsion = f_rep[i];
        rec.agents[i].lmp = lmp[i] != 0;
        rec.agents[i].srm_active = srm_active[i] != 0;
      }
      break;
    }
  }

  StepResult out;
  out.next.resize(n);
  for (int i = 0; i < n; ++i) {
    rec.agents[i].input = u[i];
    out.next[i].position = q[i] + cfg.dt * u[i];
    out.next[i].last_input = u[i];
    out.next[i].heading =
        norm_sq(u[i]) > 0.0 ? wrap_angle(std::atan2(u[i].y, u[i].x)) : states[i].heading;
    if (!is_finite(out.next[i].position)) {
      throw SimError(ErrorCode::NonFiniteState, "agent " + std::to_string(i) + " at step " +
                                                    std::to_string(k));
    }
  }
  out.record = std::move(rec);
  return out;
}

TrajectoryLog run(const SimConfig& cfg) {
  cfg.validate();

  TrajectoryLog log;
  log.mode = cfg.mode;
  log.leader = cfg.formation.leader;
  log.target = cfg.env.target;
  log.dt = cfg.dt;

  StepContext ctx(cfg);
  log.eval_edges = ctx.eval_edges;
  log.eval_dist = ctx.eval_dist;
  log.eval_dist_sq = ctx.eval_dist_sq;

  std::vector<AgentState> states = cfg.initial_states;
  for (AgentState& s : states) s.heading = wrap_angle(s.heading);

  for (int k = 0;; ++k) {
    if (check_arrived(states[cfg.formation.leader].position, cfg.env.target, cfg.apf.eps_goal)) {
      log.steps.push_back(snapshot_only(states, cfg, ctx.eval_edges, ctx.eval_dist_sq));
      log.outcome = Outcome::Arrived;
      log.arrival_step = k;
      break;
    }
    if (k == cfg.k_max) {
      log.steps.push_back(snapshot_only(states, cfg, ctx.eval_edges, ctx.eval_dist_sq));
      log.outcome = Outcome::NotArrived;
      break;
    }
    try {
      StepResult r = step(states, cfg, ctx, k);
      if (r.record.disconnected) log.disconnected_steps.push_back(k);
      log.steps.push_back(std::move(r.record));
      states = std::move(r.next);
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::CoincidentWithObstacle) throw;
      log.steps.push_back(snapshot_only(states, cfg, ctx.eval_edges, ctx.eval_dist_sq));
      log.outcome = Outcome::CollisionAbort;
      log.collision_step = k;
      log.collision_detail = e.what();
      break;
    }
  }
  return log;
}

}  // namespace mafsim
