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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "qroute/arch.hpp"
#include "qroute/rng.hpp"

using namespace qroute;

namespace {

std::map<std::size_t, std::size_t> degree_histogram(const ArchGraph& g) {
  std::map<std::size_t, std::size_t> h;
  for (Qubit v = 0; v < g.num_nodes(); ++v) ++h[g.neighbors(v).size()];
  return h;
}

void check_distance_properties(const ArchGraph& g) {
  const auto& d = g.distances();
  const auto n = static_cast<Qubit>(g.num_nodes());
  for (Qubit u = 0; u < n; ++u) {
    CHECK(d(u, u) == 0);
    for (Qubit v = 0; v < n; ++v) {
      CHECK(d(u, v) == d(v, u));
      CHECK((d(u, v) == 1) == g.adjacent(u, v));
      for (Qubit w = 0; w < n; ++w) CHECK(d(u, w) <= d(u, v) + d(v, w));
    }
  }
}

// Random spanning tree plus a few chords.
ArchGraph random_connected(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::set<Edge> edges;
  for (Qubit v = 1; v < n; ++v) {
    const auto u = static_cast<Qubit>(rng.uniform_int(v));
    edges.insert({u, v});
  }
  for (std::size_t k = 0; k < n / 2; ++k) {
    auto a = static_cast<Qubit>(rng.uniform_int(n));
    auto b = static_cast<Qubit>(rng.uniform_int(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
  }
  return ArchGraph("random", n, {edges.begin(), edges.end()});
}

}  // namespace

TEST_CASE("grid 2x3 uses column-major numbering") {
  const ArchGraph g = build_grid(2, 3);
  CHECK(g.num_nodes() == 6);
  CHECK(g.num_edges() == 7);
  CHECK(g.adjacent(1, 3));
  CHECK(g.adjacent(3, 5));
  CHECK(g.adjacent(0, 1));
  CHECK_FALSE(g.adjacent(1, 2));
  CHECK(g.distance(1, 5) == 2);
  CHECK(g.distance(0, 5) == 3);
}

TEST_CASE("grid sizes") {
  CHECK(build_grid(4, 4).num_nodes() == 16);
  CHECK(build_grid(4, 4).num_edges() == 24);
  const ArchGraph one = build_grid(1, 1);
  CHECK(one.num_nodes() == 1);
  CHECK(one.num_edges() == 0);
  CHECK_THROWS_AS(build_grid(0, 3), ArchError);
  CHECK_THROWS_AS(build_grid(3, 0), ArchError);
  for (std::size_t r = 1; r <= 6; ++r) {
    for (std::size_t c = 1; c <= 6; ++c) {
      const ArchGraph g = build_grid(r, c);
      CHECK(g.num_nodes() == r * c);
      CHECK(g.num_edges() == r * (c - 1) + c * (r - 1));
    }
  }
}

TEST_CASE("edges are canonical, sorted and indexed bijectively") {
  for (const ArchGraph& g : {build_grid(2, 3), build_grid(3, 5), resolve_topology("tokyo")}) {
    CHECK(std::is_sorted(g.edges().begin(), g.edges().end()));
    std::set<Edge> seen;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      CHECK(ed.u < ed.v);
      CHECK(seen.insert(ed).second);
      CHECK(edge_index(g, ed.u, ed.v) == e);
      CHECK(edge_index(g, ed.v, ed.u) == e);
      CHECK(g.find_edge(ed.v, ed.u) == static_cast<std::int32_t>(e));
    }
  }
  const ArchGraph g = build_grid(2, 3);
  CHECK(edge_index(g, 0, 1) == 0);
  CHECK(edge_index(g, 5, 3) == edge_index(g, 3, 5));
  CHECK_THROWS_AS(edge_index(g, 0, 5), ArchError);
  CHECK(g.find_edge(0, 5) == -1);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(ArchGraph("loop", 2, {{0, 0}, {0, 1}}), ArchError);
  CHECK_THROWS_AS(ArchGraph("dup", 2, {{0, 1}, {1, 0}}), ArchError);
  CHECK_THROWS_AS(ArchGraph("split", 4, {{0, 1}, {2, 3}}), ArchError);
  CHECK_THROWS_AS(ArchGraph("range", 2, {{0, 2}}), ArchError);
  const ArchGraph g("rev", 3, {{2, 1}, {1, 0}});
  CHECK(g.edge(0) == Edge{0, 1});
  CHECK(g.edge(1) == Edge{1, 2});
}

TEST_CASE("topology JSON parsing") {
  const ArchGraph g = parse_topology(R"({"name": "line", "num_nodes": 3, "edges": [[0, 1], [1, 2]]})");
  CHECK(g.name() == "line");
  CHECK(g.distance(0, 2) == 2);
  CHECK(parse_topology(topology_to_json(g)) == g);
  CHECK_THROWS_AS(parse_topology(R"({"name": "x", "num_nodes": 2, "edges": [[0, 0]]})"), ArchError);
  CHECK_THROWS_AS(parse_topology(R"({"name": "x", "num_nodes": 2})"), ArchError);
  CHECK_THROWS_AS(parse_topology("not json"), ArchError);

  const auto path = std::filesystem::temp_directory_path() / "qroute_line_topology.json";
  { std::ofstream(path) << topology_to_json(g); }
  CHECK(load_topology(path) == g);
  CHECK(resolve_topology(path.string()) == g);
  std::filesystem::remove(path);
}

TEST_CASE("bundled devices") {
  const ArchGraph tokyo = resolve_topology("tokyo");
  CHECK(tokyo.num_nodes() == 20);
  CHECK(tokyo.num_edges() == 43);
  CHECK(degree_histogram(tokyo) == std::map<std::size_t, std::size_t>{{2, 2}, {3, 2}, {4, 10}, {6, 6}});

  const ArchGraph guadalupe = resolve_topology("guadalupe");
  CHECK(guadalupe.num_nodes() == 16);
  CHECK(guadalupe.num_edges() == 16);
  CHECK(degree_histogram(guadalupe) == std::map<std::size_t, std::size_t>{{1, 4}, {2, 8}, {3, 4}});

  const ArchGraph sycamore = resolve_topology("sycamore");
  CHECK(sycamore.num_nodes() == 53);
  CHECK(sycamore.num_edges() == 86);
  CHECK(degree_histogram(sycamore) == std::map<std::size_t, std::size_t>{{1, 3}, {2, 15}, {3, 1}, {4, 34}});

  CHECK(resolve_topology("grid:4x4") == build_grid(4, 4));
  CHECK_THROWS_AS(resolve_topology("atlantis"), ArchError);
}

TEST_CASE("distance matrix properties") {
  check_distance_properties(build_grid(3, 4));
  check_distance_properties(resolve_topology("tokyo"));
  for (std::uint64_t s = 0; s < 20; ++s) check_distance_properties(random_connected(3 + s % 15, s));
}

TEST_CASE("edge list hash distinguishes graphs") {
  CHECK(edge_list_sha256(build_grid(4, 4)) == edge_list_sha256(resolve_topology("grid:4x4")));
  CHECK(edge_list_sha256(build_grid(4, 4)) != edge_list_sha256(resolve_topology("guadalupe")));
  CHECK(edge_list_sha256(build_grid(2, 3)).size() == 64);
}

TEST_CASE("automorphisms") {
  CHECK(automorphisms(build_grid(2, 3)).size() == 4);
  CHECK(automorphisms(build_grid(4, 4)).size() == 8);
  CHECK(automorphisms(build_grid(2, 2)).size() == 8);
  for (const ArchGraph& g : {build_grid(2, 3), build_grid(4, 4), resolve_topology("tokyo")}) {
    const auto auts = automorphisms(g);
    REQUIRE(!auts.empty());
    std::vector<Qubit> id(g.num_nodes());
    std::iota(id.begin(), id.end(), Qubit{0});
    CHECK(auts.front() == id);
    for (const auto& perm : auts) {
      const auto emap = permute_edges(g, perm);
      std::set<EdgeId> images(emap.begin(), emap.end());
      CHECK(images.size() == g.num_edges());
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        const Edge& im = g.edge(emap[e]);
        CHECK(std::minmax(perm[ed.u], perm[ed.v]) == std::minmax(im.u, im.v));
      }
    }
  }
}
