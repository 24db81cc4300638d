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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <doctest.h>

#include "mafsim/error.hpp"
#include "mafsim/potential.hpp"
#include "mafsim/simulation.hpp"
#include "mafsim/trajectory_io.hpp"

using namespace mafsim;
using doctest::Approx;

namespace {

// Minimal consensus config: no formation shape, no environment interaction.
SimConfig consensus_config(const std::vector<std::vector<int>>& adjacency,
                           const std::vector<Vec2>& initial, double dt, int k_max) {
  SimConfig cfg;
  const int n = static_cast<int>(adjacency.size());
  cfg.topology = Topology::from_adjacency(adjacency);
  std::vector<Vec2> offsets(n);
  cfg.formation = FormationSpec::create(offsets, n - 1);
  cfg.env.target = {1e6, 1e6};  // unreachable: runs to k_max
  cfg.mode = ControlMode::Consensus;
  cfg.gains.epsilon = 1.0;
  for (const Vec2& p : initial) cfg.initial_states.push_back({p, 0.0, {}});
  cfg.dt = dt;
  cfg.k_max = k_max;
  cfg.finalize();
  return cfg;
}

}  // namespace

TEST_CASE("check_arrived boundary is inclusive") {
  CHECK(check_arrived({14, 14}, {14, 14}, 0.5));
  CHECK(check_arrived({14, 14.5}, {14, 14}, 0.5));
  CHECK_FALSE(check_arrived({13, 14}, {14, 14}, 0.5));
}

TEST_CASE("step fixed points") {
  SUBCASE("coincident agents under consensus stay put") {
    SimConfig cfg = consensus_config({{0, 1}, {1, 0}}, {{1, 1}, {1, 1}}, 0.1, 1);
    StepContext ctx(cfg);
    const StepResult r = step(cfg.initial_states, cfg, ctx, 0);
    CHECK(r.next[0].position == Vec2{1, 1});
    CHECK(r.next[1].position == Vec2{1, 1});
    CHECK(r.record.agents[0].input == Vec2{0, 0});
  }
  SUBCASE("single agent with no neighbors keeps its position") {
    SimConfig cfg = consensus_config({{0}}, {{3, -2}}, 0.1, 1);
    StepContext ctx(cfg);
    const StepResult r = step(cfg.initial_states, cfg, ctx, 0);
    CHECK(r.next[0].position == Vec2{3, -2});
    CHECK(r.next[0].heading == 0.0);  // zero input leaves heading alone
  }
}

TEST_CASE("step hand evaluation for two-agent consensus") {
  SimConfig cfg = consensus_config({{0, 1}, {1, 0}}, {{0, 0}, {2, 0}}, 0.1, 1);
  StepContext ctx(cfg);
  const StepResult r = step(cfg.initial_states, cfg, ctx, 0);
  CHECK(r.next[0].position.x == Approx(0.2).epsilon(1e-12));
  CHECK(r.next[0].position.y == Approx(0.0));
  CHECK(r.next[1].position.x == Approx(1.8).epsilon(1e-12));
  // Heading follows the input direction.
  CHECK(r.next[0].heading == Approx(0.0));
  CHECK(r.next[1].heading == Approx(std::numbers::pi));
}

TEST_CASE("run produces k_max+1 snapshots when the goal is unreachable") {
  SimConfig cfg = consensus_config({{0, 1}, {1, 0}}, {{1, 1}, {1, 1}}, 1.0, 1);
  const TrajectoryLog log = run(cfg);
  REQUIRE(log.steps.size() == 2);
  CHECK(log.outcome == Outcome::NotArrived);
  CHECK(log.arrival_step == -1);
  CHECK(log.steps[0].agents[0].position == log.steps[1].agents[0].position);
}

TEST_CASE("run arrives immediately when the leader starts at the target") {
  SimConfig cfg = consensus_config({{0, 1}, {1, 0}}, {{0, 0}, {2, 0}}, 0.1, 10);
  cfg.env.target = {2, 0};  // leader is agent 1
  const TrajectoryLog log = run(cfg);
  CHECK(log.outcome == Outcome::Arrived);
  CHECK(log.arrival_step == 0);
  CHECK(log.steps.size() == 1);
}

TEST_CASE("same config and seed give byte-identical logs") {
  SimConfig cfg = consensus_config({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}},
                                   {{0, 0}, {1.5, 0.3}, {2.2, -0.7}}, 0.2, 100);
  const std::string a = trajectory_csv_string(run(cfg));
  const std::string b = trajectory_csv_string(run(cfg));
  CHECK(a == b);
}

TEST_CASE("pure consensus conserves the centroid and converges on a line graph") {
  SimConfig cfg = consensus_config({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}},
                                   {{0, 0}, {1, 2}, {3, 1}}, 0.2, 5000);
  const TrajectoryLog log = run(cfg);

  Vec2 first_centroid, prev_centroid;
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    Vec2 centroid;
    for (const AgentRecord& a : log.steps[k].agents) centroid += a.position;
    centroid *= 1.0 / 3.0;
    if (k == 0) {
      first_centroid = centroid;
    } else {
      // Per-step drift stays at rounding level.
      CHECK(distance(centroid, prev_centroid) < 1e-10);
    }
    prev_centroid = centroid;
  }
  CHECK(distance(prev_centroid, first_centroid) < 1e-8);

  const auto& last = log.steps.back().agents;
  double max_pairwise = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      max_pairwise = std::max(max_pairwise, distance(last[i].position, last[j].position));
    }
  }
  CHECK(max_pairwise < 1e-6);

  // Max pairwise distance is non-increasing along the run.
  double prev = std::numeric_limits<double>::infinity();
  for (const StepRecord& rec : log.steps) {
    double cur = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        cur = std::max(cur, distance(rec.agents[i].position, rec.agents[j].position));
      }
    }
    CHECK(cur <= prev * (1.0 + 1e-12));
    prev = cur;
  }
}

TEST_CASE("per-step displacement equals dt * input") {
  SimConfig cfg = consensus_config({{0, 1}, {1, 0}}, {{0, 0}, {5, 3}}, 0.3, 50);
  const TrajectoryLog log = run(cfg);
  for (std::size_t k = 0; k + 1 < log.steps.size(); ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      const double moved =
          distance(log.steps[k + 1].agents[i].position, log.steps[k].agents[i].position);
      const double bound = cfg.dt * norm(log.steps[k].agents[i].input);
      // Absolute slack covers position rounding once the inputs are ~1e-16.
      CHECK(moved <= bound * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("relabeling agents relabels the run identically") {
  // Same line graph with agents listed in reverse order.
  SimConfig fwd = consensus_config({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}},
                                   {{0, 0}, {1, 2}, {3, 1}}, 0.2, 40);
  SimConfig rev = consensus_config({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}},
                                   {{3, 1}, {1, 2}, {0, 0}}, 0.2, 40);
  const TrajectoryLog a = run(fwd);
  const TrajectoryLog b = run(rev);
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    for (int i = 0; i < 3; ++i) {
      CHECK(a.steps[k].agents[i].position == b.steps[k].agents[2 - i].position);
    }
  }
}

TEST_CASE("lmp flags in the log replay from the recorded forces and positions") {
  // Single agent aimed at a target behind a symmetric obstacle pair.
  SimConfig cfg;
  cfg.topology = Topology::from_adjacency({{0}});
  cfg.formation = FormationSpec::create({{0, 0}}, 0);
  cfg.env.target = {10, 0};
  cfg.env.rho_m = 1.0;
  cfg.env.obstacles = {{3.0, 0.2}, {3.0, -0.2}};
  cfg.apf.eta = 0.3;
  cfg.apf.k_r = 0.3;
  cfg.gains.gamma = 0.3;
  cfg.gains.mu = 1.0;
  cfg.initial_states = {{{0, 0}, 0.0, {}}};
  cfg.dt = 0.05;
  cfg.k_max = 400;
  cfg.seed = 9;
  cfg.finalize();

  const TrajectoryLog log = run(cfg);
  REQUIRE(log.steps.size() >= 2);

  int lmp_count = 0;
  std::vector<Vec2> window;
  const int last_forced = static_cast<int>(log.steps.size()) - 2;
  for (int k = 0; k <= last_forced; ++k) {
    const AgentRecord& a = log.steps[k].agents[0];
    window.push_back(a.position);
    if (static_cast<int>(window.size()) > cfg.apf.stall_window) window.erase(window.begin());
    const bool expected = detect_lmp(resultant_force(a.attraction, a.repulsion),
                                     distance(cfg.env.target, a.position), window, cfg.apf);
    CHECK(a.lmp == expected);
    CHECK(a.srm_active == (expected && cfg.srm_enabled));
    lmp_count += a.lmp ? 1 : 0;
  }
  CHECK(lmp_count > 0);  // the pair actually pins the agent at least once
}

TEST_CASE("replace mode substitutes the kick for the field terms on lmp steps") {
  // Stalled single agent: formation term is empty, so under Replace the whole
  // input is the perturbation, whose norm is exactly gamma_srm.
  SimConfig cfg;
  cfg.topology = Topology::from_adjacency({{0}});
  cfg.formation = FormationSpec::create({{0, 0}}, 0);
  cfg.env.target = {10, 0};
  cfg.env.obstacles = {{3.0, 0.2}, {3.0, -0.2}};
  cfg.apf.eta = 0.3;
  cfg.apf.k_r = 0.3;
  cfg.apf.gamma_srm = 0.8;
  cfg.gains.gamma = 0.3;
  cfg.initial_states = {{{0, 0}, 0.0, {}}};
  cfg.dt = 0.05;
  cfg.k_max = 800;
  cfg.seed = 1;
  cfg.srm_mode = SrmMode::Replace;
  cfg.finalize();

  const TrajectoryLog log = run(cfg);
  int replaced = 0;
  for (const StepRecord& rec : log.steps) {
    const AgentRecord& a = rec.agents[0];
    if (a.srm_active) {
      ++replaced;
      CHECK(norm(a.input) == doctest::Approx(cfg.apf.gamma_srm).epsilon(1e-12));
    }
  }
  CHECK(replaced > 0);

  // Add mode keeps the field terms: the first kick input differs from the
  // bare perturbation magnitude whenever the residual field is nonzero.
  cfg.srm_mode = SrmMode::Add;
  const TrajectoryLog add_log = run(cfg);
  bool saw_combined = false;
  for (const StepRecord& rec : add_log.steps) {
    const AgentRecord& a = rec.agents[0];
    if (a.srm_active &&
        std::abs(norm(a.input) - cfg.apf.gamma_srm) > 1e-6) {
      saw_combined = true;
    }
  }
  CHECK(saw_combined);
}

TEST_CASE("an agent starting on an obstacle aborts with a partial log") {
  SimConfig cfg;
  cfg.topology = Topology::from_adjacency({{0, 1}, {1, 0}});
  cfg.formation = FormationSpec::create({{-1, 0}, {0, 0}}, 1);
  cfg.env.target = {10, 0};
  cfg.env.obstacles = {{0, 0}};
  cfg.initial_states = {{{0, 0}, 0.0, {}}, {{1, 0}, 0.0, {}}};
  cfg.dt = 0.05;
  cfg.k_max = 100;
  cfg.finalize();

  const TrajectoryLog log = run(cfg);
  CHECK(log.outcome == Outcome::CollisionAbort);
  CHECK(log.collision_step == 0);
  CHECK(log.steps.size() == 1);
  CHECK(log.collision_detail.find("obstacle") != std::string::npos);
}

TEST_CASE("radius mode records disconnection warnings and keeps running") {
  SimConfig cfg;
  cfg.topology = Topology::radius_based(2, 1.0);
  cfg.formation = FormationSpec::create({{-1, 0}, {0, 0}}, 1);
  cfg.env.target = {1e6, 1e6};
  cfg.mode = ControlMode::Consensus;
  cfg.initial_states = {{{0, 0}, 0.0, {}}, {{10, 0}, 0.0, {}}};
  cfg.dt = 0.1;
  cfg.k_max = 5;
  cfg.finalize();

  const TrajectoryLog log = run(cfg);
  CHECK(log.outcome == Outcome::NotArrived);
  CHECK(log.steps.size() == 6);
  CHECK(log.disconnected_steps.size() == 5);  // every executed step
}

TEST_CASE("heading tracks the input direction and stays in (-pi, pi]") {
  SimConfig cfg = consensus_config({{0, 1}, {1, 0}}, {{0, 0}, {0, 2}}, 0.1, 3);
  const TrajectoryLog log = run(cfg);
  (void)log;
  StepContext ctx(cfg);
  const StepResult r = step(cfg.initial_states, cfg, ctx, 0);
  CHECK(r.next[0].heading == Approx(std::numbers::pi / 2));
  CHECK(r.next[1].heading == Approx(-std::numbers::pi / 2));
  CHECK(r.next[1].heading > -std::numbers::pi);
}

TEST_CASE("config validation catches bad setups") {
  SimConfig cfg = consensus_config({{0, 1}, {1, 0}}, {{0, 0}, {1, 0}}, 0.1, 10);
  SUBCASE("k_max") {
    cfg.k_max = 0;
    CHECK_THROWS_AS(cfg.validate(), SimError);
  }
  SUBCASE("dt") {
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), SimError);
  }
  SUBCASE("state count") {
    cfg.initial_states.pop_back();
    CHECK_THROWS_AS(cfg.validate(), SimError);
  }
  SUBCASE("srm gamma range") {
    cfg.apf.gamma_srm = 1.0;
    CHECK_THROWS_AS(cfg.validate(), SimError);
  }
  SUBCASE("rho_a feasibility") {
    cfg.mode = ControlMode::Lilf;
    cfg.formation = FormationSpec::create({{-1, 0}, {0, 0}}, 1);
    cfg.rho_a = 2.0;  // repulsion zone swallows the desired separation
    CHECK_THROWS_AS(cfg.validate(), SimError);
  }
}
