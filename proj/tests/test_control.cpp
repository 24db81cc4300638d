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

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "mafsim/control.hpp"
#include "mafsim/error.hpp"
#include "mafsim/topology.hpp"

using namespace mafsim;
using doctest::Approx;

namespace {

const Topology kTriangle = Topology::from_adjacency({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});

FormationSpec random_formation(std::mt19937& gen, int n, int leader) {
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::vector<Vec2> offsets(n);
  for (Vec2& o : offsets) o = {coord(gen), coord(gen)};
  return FormationSpec::create(std::move(offsets), leader);
}

}  // namespace

TEST_CASE("formation offsets normalize to a zero leader offset") {
  const FormationSpec spec = FormationSpec::create({{0, 0}, {1, 0}}, 1);
  CHECK(spec.offsets[1] == Vec2{0, 0});
  CHECK(spec.offsets[0] == Vec2{-1, 0});
  // Relative positions are unchanged by the normalization.
  CHECK(spec.desired_relative(1, 0) == Vec2{1, 0});
  CHECK(spec.desired_relative(0, 1) == Vec2{-1, 0});
  CHECK(spec.desired_distance(0, 1) == Approx(1.0));

  std::mt19937 gen(17);
  const FormationSpec f = random_formation(gen, 5, 2);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const Vec2 rij = f.desired_relative(i, j);
      const Vec2 rji = f.desired_relative(j, i);
      CHECK(rij == -rji);
    }
  }
}

TEST_CASE("consensus input") {
  const std::vector<Vec2> pair{{0, 0}, {2, 0}};
  const std::vector<int> other0{1}, other1{0};
  CHECK(consensus_input(pair, other0, 0) == Vec2{2, 0});
  CHECK(consensus_input(pair, other1, 1) == Vec2{-2, 0});

  const std::vector<Vec2> same{{1, 1}, {1, 1}, {1, 1}};
  for (int i = 0; i < 3; ++i) {
    CHECK(consensus_input(same, kTriangle.neighbors(i), i) == Vec2{0, 0});
  }

  const std::vector<Vec2> tri{{0, 0}, {1, 0}, {0, 1}};
  const Vec2 u = consensus_input(tri, kTriangle.neighbors(0), 0);
  CHECK(u.x == Approx(1.0).epsilon(1e-12));
  CHECK(u.y == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("follower input") {
  const FormationSpec spec = FormationSpec::create({{0, 0}, {1, 0}}, 1);
  ControlGains gains;
  gains.epsilon = 1.0;
  gains.mu = 1.0;
  const std::vector<Vec2> q{{0, 0}, {2, 0}};
  const std::vector<int> nbrs{1};

  SUBCASE("exact formation is a fixed point") {
    const std::vector<Vec2> formed{{0, 0}, {1, 0}};
    CHECK(follower_input(formed, nbrs, spec, 0, gains, {0, 0}) == Vec2{0, 0});
  }
  SUBCASE("hand evaluation") {
    const Vec2 u = follower_input(q, nbrs, spec, 0, gains, {0, 0});
    CHECK(u.x == Approx(1.0).epsilon(1e-12));
    CHECK(u.y == Approx(0.0));
  }
  SUBCASE("linear in the repulsion term with coefficient mu") {
    gains.mu = 2.0;
    const Vec2 u = follower_input(q, nbrs, spec, 0, gains, {0, 1});
    CHECK(u.x == Approx(1.0).epsilon(1e-12));
    CHECK(u.y == Approx(2.0).epsilon(1e-12));

    std::mt19937 gen(2);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec2 f{c(gen), c(gen)};
      const Vec2 base = follower_input(q, nbrs, spec, 0, gains, {0, 0});
      const Vec2 with_f = follower_input(q, nbrs, spec, 0, gains, f);
      CHECK(with_f.x == Approx(base.x + gains.mu * f.x).epsilon(1e-12));
      CHECK(with_f.y == Approx(base.y + gains.mu * f.y).epsilon(1e-12));
    }
  }
  SUBCASE("rejects the leader") {
    CHECK_THROWS_AS(follower_input(q, nbrs, spec, 1, gains, {0, 0}), SimError);
  }
}

TEST_CASE("leader input") {
  // Two agents, follower parked at its slot so the formation term is zero.
  const FormationSpec spec = FormationSpec::create({{-1, 0}, {0, 0}}, 1);
  ControlGains gains;
  gains.gamma = 1.0;
  gains.mu = 1.0;
  const std::vector<Vec2> q{{12, 14}, {13, 14}};
  const std::vector<int> nbrs{0};
  const Vec2 target{14, 14};

  const Vec2 u = leader_input(q, nbrs, spec, target, gains, {0, 0}, {0, 0});
  CHECK(u.x == Approx(1.0).epsilon(1e-12));
  CHECK(u.y == Approx(0.0));

  const Vec2 with_srm = leader_input(q, nbrs, spec, target, gains, {0, 0}, {0, 0.5});
  CHECK(with_srm.x == Approx(1.0).epsilon(1e-12));
  CHECK(with_srm.y == Approx(0.5).epsilon(1e-12));

  // Equilibrium: leader at the target, formation exact, no repulsion.
  const std::vector<Vec2> done{{13, 14}, {14, 14}};
  CHECK(leader_input(done, nbrs, spec, target, gains, {0, 0}, {0, 0}) == Vec2{0, 0});

  // Literal bias keeps the constant offset sum even at the fixed point.
  const Vec2 literal =
      leader_input(done, nbrs, spec, target, gains, {0, 0}, {0, 0}, LeaderBias::Literal);
  CHECK(literal.x == Approx(1.0).epsilon(1e-12));  // r_N0 = (1, 0)
}

TEST_CASE("gradient rigidity input") {
  SUBCASE("zero at the desired shape") {
    const FormationSpec spec = FormationSpec::create({{0, 0}, {1, 0}, {0, 1}}, 0);
    const std::vector<Vec2> q{{5, 5}, {6, 5}, {5, 6}};
    const std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
    for (const Vec2& u : gradient_rigidity_input(q, spec, edges, 1.0)) {
      CHECK(u == Vec2{0, 0});
    }
  }
  SUBCASE("two agents, hand matrix product") {
    const FormationSpec spec = FormationSpec::create({{0, 0}, {1, 0}}, 0);
    const std::vector<Vec2> q{{0, 0}, {2, 0}};
    const std::vector<Edge> edges{{0, 1}};
    const auto u = gradient_rigidity_input(q, spec, edges, 1.0);
    CHECK(u[0].x == Approx(6.0).epsilon(1e-12));
    CHECK(u[0].y == Approx(0.0));
    CHECK(u[1].x == Approx(-6.0).epsilon(1e-12));

    const auto scaled = gradient_rigidity_input(q, spec, edges, 2.5);
    CHECK(scaled[0].x == Approx(2.5 * u[0].x).epsilon(1e-12));
    CHECK(scaled[1].x == Approx(2.5 * u[1].x).epsilon(1e-12));
  }
  SUBCASE("degenerate edge") {
    const FormationSpec spec = FormationSpec::create({{0, 0}, {1, 0}}, 0);
    const std::vector<Vec2> q{{1, 1}, {1, 1}};
    const std::vector<Edge> edges{{0, 1}};
    CHECK_THROWS_AS(gradient_rigidity_input(q, spec, edges, 1.0), SimError);
  }
}

TEST_CASE("control laws are translation invariant") {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> c(-4.0, 4.0);
  const FormationSpec spec = random_formation(gen, 3, 2);
  const std::vector<Edge> edges = kTriangle.edge_list();

  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Vec2> q{{c(gen), c(gen)}, {c(gen), c(gen)}, {c(gen), c(gen)}};
    const Vec2 shift{c(gen), c(gen)};
    std::vector<Vec2> shifted = q;
    for (Vec2& p : shifted) p += shift;

    for (int i = 0; i < 3; ++i) {
      const auto nbrs = kTriangle.neighbors(i);
      const Vec2 a = consensus_input(q, nbrs, i);
      const Vec2 b = consensus_input(shifted, nbrs, i);
      CHECK(a.x == Approx(b.x).epsilon(1e-9));
      CHECK(a.y == Approx(b.y).epsilon(1e-9));
      const Vec2 fa = formation_feedback(q, nbrs, spec, i);
      const Vec2 fb = formation_feedback(shifted, nbrs, spec, i);
      CHECK(fa.x == Approx(fb.x).epsilon(1e-9));
      CHECK(fa.y == Approx(fb.y).epsilon(1e-9));
    }
    const auto ga = gradient_rigidity_input(q, spec, edges, 0.7);
    const auto gb = gradient_rigidity_input(shifted, spec, edges, 0.7);
    for (int i = 0; i < 3; ++i) {
      CHECK(ga[i].x == Approx(gb[i].x).epsilon(1e-9));
      CHECK(ga[i].y == Approx(gb[i].y).epsilon(1e-9));
    }
  }
}

TEST_CASE("formation feedback sums to zero over all agents") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> c(-4.0, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const FormationSpec spec = random_formation(gen, 3, 1);
    std::vector<Vec2> q{{c(gen), c(gen)}, {c(gen), c(gen)}, {c(gen), c(gen)}};
    Vec2 total;
    for (int i = 0; i < 3; ++i) {
      total += formation_feedback(q, kTriangle.neighbors(i), spec, i);
    }
    CHECK(std::abs(total.x) < 1e-12);
    CHECK(std::abs(total.y) < 1e-12);
  }
}

TEST_CASE("gradient controller is rotation-equivariant") {
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 6.28);
  const std::vector<Edge> edges = kTriangle.edge_list();
  for (int trial = 0; trial < 25; ++trial) {
    const FormationSpec spec = random_formation(gen, 3, 0);
    std::vector<Vec2> q{{c(gen), c(gen)}, {c(gen), c(gen)}, {c(gen), c(gen)}};
    const double a = ang(gen);
    const double ca = std::cos(a), sa = std::sin(a);
    auto rotate = [&](const Vec2& p) { return Vec2{ca * p.x - sa * p.y, sa * p.x + ca * p.y}; };
    std::vector<Vec2> q_rot;
    for (const Vec2& p : q) q_rot.push_back(rotate(p));

    const auto u = gradient_rigidity_input(q, spec, edges, 1.0);
    const auto u_rot = gradient_rigidity_input(q_rot, spec, edges, 1.0);
    for (int i = 0; i < 3; ++i) {
      const Vec2 expected = rotate(u[i]);
      CHECK(u_rot[i].x == Approx(expected.x).epsilon(1e-9));
      CHECK(u_rot[i].y == Approx(expected.y).epsilon(1e-9));
    }
  }
}

TEST_CASE("every input vanishes at the exact formation on target") {
  const FormationSpec spec =
      FormationSpec::create({{-1.5, 1.5}, {-1.5, -1.5}, {0, 0}}, 2);
  ControlGains gains;
  const Vec2 target{14, 14};
  std::vector<Vec2> q;
  for (const Vec2& o : spec.offsets) q.push_back(target + o);

  for (int i = 0; i < 3; ++i) {
    const auto nbrs = kTriangle.neighbors(i);
    const Vec2 u = i == spec.leader
                       ? leader_input(q, nbrs, spec, target, gains, {0, 0}, {0, 0})
                       : follower_input(q, nbrs, spec, i, gains, {0, 0});
    CHECK(std::abs(u.x) < 1e-12);
    CHECK(std::abs(u.y) < 1e-12);
  }
  for (const Vec2& u : gradient_rigidity_input(q, spec, kTriangle.edge_list(), 1.0)) {
    CHECK(std::abs(u.x) < 1e-12);
    CHECK(std::abs(u.y) < 1e-12);
  }
}
