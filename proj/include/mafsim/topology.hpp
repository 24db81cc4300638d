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
#include <utility>
#include <vector>

#include "mafsim/vec2.hpp"

namespace mafsim {

enum class TopologyMode { Static, RadiusBased };

// Neighbor index lists, one per agent.
using NeighborSets = std::vector<std::vector<int>>;
// Undirected edge, stored with i < j.
using Edge = std::pair<int, int>;

// Undirected interaction graph. Static topologies carry a validated 0/1
// adjacency matrix fixed for the whole run; radius-based topologies derive
// neighbor sets from the current agent positions at every step.
class Topology {
 public:
  Topology() = default;  // empty; fails SimConfig validation until replaced

  // Validates: entries in {0,1}, symmetric, zero diagonal, connected.
  // Throws SimError naming the first violated invariant.
  static Topology from_adjacency(const std::vector<std::vector<int>>& adjacency);
  static Topology from_flat_adjacency(int n, const std::vector<int>& row_major);
  static Topology radius_based(int n, double comm_radius);

  int size() const { return n_; }
  TopologyMode mode() const { return mode_; }
  double comm_radius() const { return comm_radius_; }
  const std::vector<int>& adjacency() const { return adj_; }  // row-major; empty in radius mode

  bool has_edge(int i, int j) const;
  // Static-mode neighbor set { j : a_ij = 1 }; never contains i.
  std::vector<int> neighbors(int i) const;
  // Static-mode edges, ascending (i, j) with i < j.
  std::vector<Edge> edge_list() const;

  // Per-step neighbor sets; dispatches on mode. `positions` is ignored in
  // Static mode.
  NeighborSets neighbor_sets(std::span<const Vec2> positions) const;

  static bool connected(const NeighborSets& neighbor_sets);

 private:
  Topology(int n, std::vector<int> adj, TopologyMode mode, double comm_radius)
      : n_(n), adj_(std::move(adj)), mode_(mode), comm_radius_(comm_radius) {}

  int n_ = 0;
  std::vector<int> adj_;  // row-major n*n, entries 0/1
  TopologyMode mode_ = TopologyMode::Static;
  double comm_radius_ = 0.0;
};

// Agents within comm_radius of agent i, boundary inclusive:
// { j != i : ||q_i - q_j|| <= comm_radius }.
std::vector<int> radius_neighbors(std::span<const Vec2> positions, int i, double comm_radius);

// Edge list (i < j) induced by a set of neighbor lists.
std::vector<Edge> edges_from(const NeighborSets& neighbor_sets);

}  // namespace mafsim
