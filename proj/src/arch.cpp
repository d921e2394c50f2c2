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

#include "qroute/arch.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <queue>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace qroute {

ArchGraph::ArchGraph(std::string name, std::size_t num_nodes, std::vector<Edge> edges)
    : name_(std::move(name)), num_nodes_(num_nodes) {
  if (num_nodes == 0) throw ArchError("architecture '" + name_ + "' has no nodes");
  for (auto& e : edges) {
    if (e.u == e.v) {
      throw ArchError("self-loop on node " + std::to_string(e.u) + " in '" + name_ + "'");
    }
    if (e.u >= num_nodes || e.v >= num_nodes) {
      throw ArchError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") out of range in '" + name_ + "'");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw ArchError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) +
                    ") in '" + name_ + "'");
  }
  edges_ = std::move(edges);

  neighbors_.resize(num_nodes);
  edge_ids_ = decltype(edge_ids_)::Constant(static_cast<Eigen::Index>(num_nodes),
                                            static_cast<Eigen::Index>(num_nodes), -1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const auto [u, v] = edges_[id];
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
    edge_ids_(u, v) = edge_ids_(v, u) = static_cast<std::int32_t>(id);
  }
  for (auto& n : neighbors_) std::sort(n.begin(), n.end());

  distances_ = distance_matrix(num_nodes, neighbors_);
  if (num_nodes > 1 && (distances_.array() < 0).any()) {
    throw ArchError("architecture '" + name_ + "' is not connected");
  }
}

DistanceMatrix distance_matrix(std::size_t num_nodes,
                               const std::vector<std::vector<Qubit>>& adjacency) {
  const auto n = static_cast<Eigen::Index>(num_nodes);
  DistanceMatrix d = DistanceMatrix::Constant(n, n, -1);
  std::queue<Qubit> queue;
  for (Qubit s = 0; s < num_nodes; ++s) {
    d(s, s) = 0;
    queue.push(s);
    while (!queue.empty()) {
      const Qubit u = queue.front();
      queue.pop();
      for (Qubit v : adjacency[u]) {
        if (d(s, v) < 0) {
          d(s, v) = d(s, u) + 1;
          queue.push(v);
        }
      }
    }
  }
  return d;
}

EdgeId edge_index(const ArchGraph& g, Qubit u, Qubit v) {
  if (u >= g.num_nodes() || v >= g.num_nodes() || g.find_edge(u, v) < 0) {
    throw ArchError("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge of '" +
                    g.name() + "'");
  }
  return static_cast<EdgeId>(g.find_edge(u, v));
}

ArchGraph build_grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw ArchError("grid dimensions must be positive");
  const auto id = [rows](std::size_t r, std::size_t c) { return static_cast<Qubit>(rows * c + r); };
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
    }
  }
  return ArchGraph("grid" + std::to_string(rows) + "x" + std::to_string(cols), rows * cols,
                   std::move(edges));
}

ArchGraph parse_topology(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ArchError(std::string("malformed topology file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("num_nodes") || !j.contains("edges") ||
      !j["num_nodes"].is_number_unsigned() || !j["edges"].is_array()) {
    throw ArchError("malformed topology file: need \"num_nodes\" and \"edges\"");
  }
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw ArchError("malformed topology file: edges must be [u, v] pairs");
    }
    edges.push_back({e[0].get<Qubit>(), e[1].get<Qubit>()});
  }
  return ArchGraph(j.value("name", std::string("unnamed")), j["num_nodes"].get<std::size_t>(),
                   std::move(edges));
}

ArchGraph load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArchError("cannot open topology file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_topology(ss.str());
}

std::string topology_to_json(const ArchGraph& g) {
  nlohmann::json j;
  j["name"] = g.name();
  j["num_nodes"] = g.num_nodes();
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) j["edges"].push_back({e.u, e.v});
  return j.dump();
}

std::filesystem::path topology_data_dir() {
  if (const char* env = std::getenv("QROUTE_DATA_DIR")) return std::filesystem::path(env) / "topologies";
#ifdef QROUTE_DATA_DIR
  return std::filesystem::path(QROUTE_DATA_DIR) / "topologies";
#else
  return "data/topologies";
#endif
}

ArchGraph resolve_topology(const std::string& spec) {
  static const std::regex grid_re(R"((?:grid:?)?(\d+)x(\d+))", std::regex::icase);
  std::smatch m;
  if (std::regex_match(spec, m, grid_re)) {
    return build_grid(std::stoul(m[1].str()), std::stoul(m[2].str()));
  }
  if (std::filesystem::exists(spec)) return load_topology(spec);
  const auto bundled = topology_data_dir() / (spec + ".json");
  if (std::filesystem::exists(bundled)) return load_topology(bundled);
  throw ArchError("unknown architecture '" + spec + "'");
}

std::string edge_list_sha256(const ArchGraph& g) {
  std::string buf = std::to_string(g.num_nodes()) + ":";
  for (const auto& e : g.edges()) buf += std::to_string(e.u) + "-" + std::to_string(e.v) + ";";
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(buf.data()), buf.size(), digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

namespace {

// Depth-first extension of a partial automorphism over nodes in `order`.
void extend(const ArchGraph& g, const std::vector<Qubit>& order, std::size_t k, std::vector<Qubit>& image,
            std::vector<bool>& used, std::vector<std::vector<Qubit>>& out, std::size_t limit) {
  if (out.size() >= limit) return;
  if (k == order.size()) {
    out.push_back(image);
    return;
  }
  const Qubit v = order[k];
  for (Qubit w = 0; w < g.num_nodes(); ++w) {
    if (used[w] || g.neighbors(w).size() != g.neighbors(v).size()) continue;
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) {
      const Qubit u = order[j];
      ok = g.adjacent(u, v) == g.adjacent(image[u], w);
    }
    if (!ok) continue;
    image[v] = w;
    used[w] = true;
    extend(g, order, k + 1, image, used, out, limit);
    used[w] = false;
    if (out.size() >= limit) return;
  }
}

}  // namespace

std::vector<std::vector<Qubit>> automorphisms(const ArchGraph& g, std::size_t limit) {
  const auto n = g.num_nodes();
  std::vector<std::vector<Qubit>> out;
  if (n == 0 || limit == 0) return out;
  // BFS order keeps every new node adjacent to an assigned one, so bad
  // branches die early.
  std::vector<Qubit> order{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Qubit w : g.neighbors(order[i])) {
      if (!seen[w]) {
        seen[w] = true;
        order.push_back(w);
      }
    }
  }
  std::vector<Qubit> image(n, 0);
  std::vector<bool> used(n, false);
  extend(g, order, 0, image, used, out, std::numeric_limits<std::size_t>::max());
  std::sort(out.begin(), out.end());
  if (out.size() > limit) out.resize(limit);
  return out;
}

std::vector<EdgeId> permute_edges(const ArchGraph& g, const std::vector<Qubit>& perm) {
  std::vector<EdgeId> out(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) out[e] = edge_index(g, perm[g.edge(e).u], perm[g.edge(e).v]);
  return out;
}

}  // namespace qroute
