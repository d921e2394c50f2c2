// Copyright 2026 The qroute Authors
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

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/circuit.hpp"

namespace qroute {

class ArchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected coupling edge, stored with u < v.
struct Edge {
  Qubit u = 0;
  Qubit v = 0;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeId = std::uint32_t;

/// All-pairs hop counts.
using DistanceMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Connected, simple, undirected coupling graph. Edges are canonical (u < v)
/// and sorted lexicographically; that order is the coordinate system of
/// every recommendation distribution and policy model output.
class ArchGraph {
 public:
  ArchGraph(std::string name, std::size_t num_nodes, std::vector<Edge> edges);

  const std::string& name() const { return name_; }
  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  const std::vector<Qubit>& neighbors(Qubit v) const { return neighbors_[v]; }

  bool adjacent(Qubit a, Qubit b) const { return edge_ids_(a, b) >= 0; }
  /// -1 for non-edges.
  std::int32_t find_edge(Qubit a, Qubit b) const { return edge_ids_(a, b); }
  std::int32_t distance(Qubit a, Qubit b) const { return distances_(a, b); }
  const DistanceMatrix& distances() const { return distances_; }
  std::int32_t diameter() const { return num_nodes_ == 0 ? 0 : distances_.maxCoeff(); }

  friend bool operator==(const ArchGraph& a, const ArchGraph& b) {
    return a.name_ == b.name_ && a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::string name_;
  std::size_t num_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Qubit>> neighbors_;
  Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic> edge_ids_;
  DistanceMatrix distances_;
};

/// rows x cols grid, column-major node numbering: v = rows * col + row.
ArchGraph build_grid(std::size_t rows, std::size_t cols);

/// JSON topology: {"name": str, "num_nodes": int, "edges": [[u, v], ...]}.
ArchGraph load_topology(const std::filesystem::path& path);
ArchGraph parse_topology(const std::string& json_text);
std::string topology_to_json(const ArchGraph& g);

/// Resolves "grid:RxC", a bundled device name (tokyo, guadalupe, sycamore),
/// or a path to a topology file.
ArchGraph resolve_topology(const std::string& spec);

/// Directory holding the bundled device files.
std::filesystem::path topology_data_dir();

/// BFS hop counts between all node pairs. Requires a connected graph.
DistanceMatrix distance_matrix(std::size_t num_nodes, const std::vector<std::vector<Qubit>>& adjacency);
inline const DistanceMatrix& distance_matrix(const ArchGraph& g) { return g.distances(); }

/// Position of {u, v} in the canonical edge order. Throws on a non-edge.
EdgeId edge_index(const ArchGraph& g, Qubit u, Qubit v);

/// Hex SHA-256 over the canonical edge list; binds models to a graph.
std::string edge_list_sha256(const ArchGraph& g);

/// Node permutations that map edges to edges, in lexicographic order
/// (identity first), truncated to `limit`. The whole group is enumerated,
/// so this is meant for sparse device graphs.
std::vector<std::vector<Qubit>> automorphisms(const ArchGraph& g, std::size_t limit = 1024);

/// Edge ids permuted by a node automorphism: out[e] = id of (perm[u], perm[v]).
std::vector<EdgeId> permute_edges(const ArchGraph& g, const std::vector<Qubit>& perm);

}  // namespace qroute
