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

#include "mafsim/topology.hpp"

#include <queue>
#include <string>

#include "mafsim/error.hpp"

namespace mafsim {

namespace {

void check_index(int i, int n) {
  if (i < 0 || i >= n) {
    throw SimError(ErrorCode::IndexOutOfRange,
                   "agent index " + std::to_string(i) + " not in [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

Topology Topology::from_adjacency(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  if (n < 1) throw SimError(ErrorCode::ValidationError, "adjacency matrix is empty");
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : adjacency) {
    if (static_cast<int>(row.size()) != n) {
      throw SimError(ErrorCode::ValidationError, "adjacency matrix is not square");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return from_flat_adjacency(n, flat);
}

Topology Topology::from_flat_adjacency(int n, const std::vector<int>& a) {
  if (n < 1) throw SimError(ErrorCode::ValidationError, "agent count must be >= 1");
  if (static_cast<int>(a.size()) != n * n) {
    throw SimError(ErrorCode::ValidationError,
                   "adjacency has " + std::to_string(a.size()) + " entries, expected " +
                       std::to_string(n * n));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = a[static_cast<std::size_t>(i) * n + j];
      if (v != 0 && v != 1) {
        throw SimError(ErrorCode::NonBinaryEntry, "entry (" + std::to_string(i) + "," +
                                                      std::to_string(j) + ") = " +
                                                      std::to_string(v));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a[static_cast<std::size_t>(i) * n + j] != a[static_cast<std::size_t>(j) * n + i]) {
        throw SimError(ErrorCode::NotSymmetric,
                       "a(" + std::to_string(i) + "," + std::to_string(j) + ") != a(" +
                           std::to_string(j) + "," + std::to_string(i) + ")");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (a[static_cast<std::size_t>(i) * n + i] != 0) {
      throw SimError(ErrorCode::SelfLoop, "nonzero diagonal at agent " + std::to_string(i));
    }
  }

  Topology t(n, a, TopologyMode::Static, 0.0);
  NeighborSets sets;
  sets.reserve(n);
  for (int i = 0; i < n; ++i) sets.push_back(t.neighbors(i));
  if (!connected(sets)) {
    throw SimError(ErrorCode::Disconnected, "graph is not connected");
  }
  return t;
}

Topology Topology::radius_based(int n, double comm_radius) {
  if (n < 1) throw SimError(ErrorCode::ValidationError, "agent count must be >= 1");
  if (!(comm_radius > 0.0)) {
    throw SimError(ErrorCode::NonPositiveRadius,
                   "communication radius must be > 0, got " + std::to_string(comm_radius));
  }
  return Topology(n, {}, TopologyMode::RadiusBased, comm_radius);
}

bool Topology::has_edge(int i, int j) const {
  check_index(i, n_);
  check_index(j, n_);
  if (mode_ != TopologyMode::Static) return false;
  return adj_[static_cast<std::size_t>(i) * n_ + j] != 0;
}

std::vector<int> Topology::neighbors(int i) const {
  check_index(i, n_);
  std::vector<int> out;
  if (mode_ != TopologyMode::Static) return out;
  for (int j = 0; j < n_; ++j) {
    if (j != i && adj_[static_cast<std::size_t>(i) * n_ + j] != 0) out.push_back(j);
  }
  return out;
}

std::vector<Edge> Topology::edge_list() const {
  std::vector<Edge> edges;
  if (mode_ != TopologyMode::Static) return edges;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (adj_[static_cast<std::size_t>(i) * n_ + j] != 0) edges.emplace_back(i, j);
    }
  }
  return edges;
}

NeighborSets Topology::neighbor_sets(std::span<const Vec2> positions) const {
  NeighborSets sets;
  sets.reserve(n_);
  if (mode_ == TopologyMode::Static) {
    for (int i = 0; i < n_; ++i) sets.push_back(neighbors(i));
    return sets;
  }
  if (static_cast<int>(positions.size()) != n_) {
    throw SimError(ErrorCode::ValidationError,
                   "radius-based neighbor sets need one position per agent");
  }
  for (int i = 0; i < n_; ++i) sets.push_back(radius_neighbors(positions, i, comm_radius_));
  return sets;
}

bool Topology::connected(const NeighborSets& sets) {
  const int n = static_cast<int>(sets.size());
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int count = 1;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : sets[i]) {
      if (!seen[j]) {
        seen[j] = 1;
        ++count;
        frontier.push(j);
      }
    }
  }
  return count == n;
}

std::vector<int> radius_neighbors(std::span<const Vec2> positions, int i, double comm_radius) {
  if (!(comm_radius > 0.0)) {
    throw SimError(ErrorCode::NonPositiveRadius,
                   "communication radius must be > 0, got " + std::to_string(comm_radius));
  }
  check_index(i, static_cast<int>(positions.size()));
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(positions.size()); ++j) {
    if (j == i) continue;
    if (distance(positions[i], positions[j]) <= comm_radius) out.push_back(j);
  }
  return out;
}

std::vector<Edge> edges_from(const NeighborSets& sets) {
  std::vector<Edge> edges;
  for (int i = 0; i < static_cast<int>(sets.size()); ++i) {
    for (int j : sets[i]) {
      if (j > i) edges.emplace_back(i, j);
    }
  }
  return edges;
}

}  // namespace mafsim
