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

#include <functional>

#include "fixtures.hpp"
#include "qroute/mapping.hpp"
#include "qroute/route.hpp"
#include "qroute/routing_state.hpp"

using namespace qroute;
using testing::constant_model;
using testing::undirected;
using testing::two_swap_fixture;

namespace {

// Iterative deepening over swap sequences; independent of the BFS oracle.
bool solvable_within(const RoutingState& s, std::size_t budget) {
  if (s.done()) return true;
  if (budget == 0) return false;
  for (EdgeId e = 0; e < s.arch().num_edges(); ++e) {
    RoutingState next = s;
    next.apply_swap(e);
    next.execute();
    if (solvable_within(next, budget - 1)) return true;
  }
  return false;
}

std::size_t iddfs_min_swaps(const Circuit& lc, const ArchGraph& g) {
  RoutingState s(lc, g, Mapping::naive(g.num_nodes()));
  s.execute();
  for (std::size_t k = 0;; ++k) {
    if (solvable_within(s, k)) return k;
  }
}

Circuit executed_on(const ArchGraph& g, std::size_t n, std::uint64_t seed) {
  // Gates on edges only, so the naive mapping executes everything.
  const Circuit r = random_circuit(2, n, seed);
  Circuit c(g.num_nodes());
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const Edge& e = g.edge(static_cast<EdgeId>(rng.uniform_int(g.num_edges())));
    if (r[i].q0 == 0) c.add_cnot(e.u, e.v);
    else c.add_cnot(e.v, e.u);
  }
  return c;
}

}  // namespace

TEST_CASE("mapping basics") {
  const Mapping id = Mapping::naive(6);
  for (Qubit q = 0; q < 6; ++q) {
    CHECK(id.physical(q) == q);
    CHECK(id.logical(q) == q);
  }
  const Mapping m = Mapping::from_images({3, 0}, 5);
  CHECK(m.physical(0) == 3);
  CHECK(m.physical(1) == 0);
  CHECK(m.physical(2) == 1);
  CHECK(m.physical(3) == 2);
  CHECK(m.physical(4) == 4);
  for (Qubit q = 0; q < 5; ++q) CHECK(m.logical(m.physical(q)) == q);
  CHECK_THROWS(Mapping::from_images({1, 1}, 3));
  CHECK_THROWS(Mapping::from_images({5}, 3));
}

TEST_CASE("apply_swap") {
  const ArchGraph g = build_grid(2, 3);
  const Mapping tau = Mapping::naive(6);
  const Mapping once = apply_swap(tau, g, {1, 3});
  CHECK(once.physical(1) == 3);
  CHECK(once.physical(3) == 1);
  for (Qubit q : {0u, 2u, 4u, 5u}) CHECK(once.physical(q) == q);
  CHECK(tau == Mapping::naive(6));
  CHECK(apply_swap(once, g, {1, 3}) == tau);
  CHECK(apply_swap(once, g, {3, 5}).physical(1) == 5);
  CHECK_THROWS_AS(apply_swap(tau, g, {0, 5}), ArchError);
}

TEST_CASE("executable_gates and cost on the fixture") {
  const ArchGraph g = build_grid(2, 3);
  const Circuit c = two_swap_fixture();
  const Mapping tau = Mapping::naive(6);
  CHECK(executable_gates(c, tau, g).empty());
  CHECK(cost(c, tau, g.distances()) == 1);
  CHECK(cost(c, apply_swap(tau, g, {1, 3}), g.distances()) == 0);
  CHECK(cost(c, apply_swap(tau, g, {3, 5}), g.distances()) == 0);
  CHECK(cost(Circuit(6), tau, g.distances()) == 0);
  CHECK(executable_gates(Circuit(6), tau, g).empty());

  const Circuit all = executed_on(g, 12, 3);
  const auto done = executable_gates(all, tau, g);
  CHECK(done.size() == all.size());
}

TEST_CASE("executable_gates is prefix closed and removes in dependency order") {
  const ArchGraph g = build_grid(3, 3);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Circuit c = random_circuit(9, 30, s);
    const auto done = executable_gates(c, Mapping::naive(9), g);
    std::vector<bool> removed(c.size(), false);
    const auto dag = dependency_dag(c);
    for (auto i : done) {
      for (auto p : dag.predecessors[i]) CHECK(removed[p]);
      CHECK(g.adjacent(c[i].q0, c[i].q1));
      removed[i] = true;
    }
    // Maximal: no remaining front gate is executable.
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (removed[i]) continue;
      bool ready = true;
      for (auto p : dag.predecessors[i]) ready &= removed[p];
      if (ready) CHECK_FALSE(g.adjacent(c[i].q0, c[i].q1));
    }
  }
}

TEST_CASE("cost is zero exactly when the front layer is executable") {
  const ArchGraph g = build_grid(3, 3);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Circuit c = random_circuit(9, 6, s);
    const Mapping tau = Mapping::naive(9);
    bool all = true;
    for (auto i : front_layer(c)) all &= g.adjacent(c[i].q0, c[i].q1);
    CHECK((cost(c, tau, g.distances()) == 0) == all);
    RoutingState st(c, g, tau);
    CHECK(st.front_cost() == cost(c, tau, g.distances()));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      CHECK(st.front_cost_after(e) == cost(c, apply_swap(tau, g, g.edge(e)), g.distances()));
    }
  }
}

TEST_CASE("base_route") {
  const ArchGraph g = build_grid(2, 3);
  const Mapping tau = Mapping::naive(6);

  const Circuit all = executed_on(g, 10, 9);
  const RoutingResult easy = base_route(all, g, tau);
  CHECK(easy.swap_count == 0);
  CHECK(easy.physical_circuit.size() == all.size());

  CHECK(base_route(Circuit(6), g, tau).physical_circuit.empty());

  const RoutingResult r = base_route(two_swap_fixture(), g, tau);
  REQUIRE(r.physical_circuit.count(GateKind::SWAP) >= 1);
  Gate first_swap;
  for (const auto& gate : r.physical_circuit) {
    if (gate.kind == GateKind::SWAP) {
      first_swap = gate;
      break;
    }
  }
  CHECK(undirected(first_swap) == Edge{1, 3});
  CHECK(r.swap_count == r.physical_circuit.count(GateKind::SWAP));
  CHECK(verify(r.physical_circuit, two_swap_fixture(), g, tau));

  CHECK_THROWS_AS(base_route(Circuit(6, {Gate::swap(0, 1)}), g, tau), CircuitError);
  CHECK_THROWS_AS(base_route(random_circuit(7, 5, 1), g, Mapping::naive(6)), ArchError);
}

TEST_CASE("base_route is deterministic and valid on grid 4x4") {
  const ArchGraph g = build_grid(4, 4);
  const Mapping tau = Mapping::naive(16);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Circuit c = random_circuit(16, 20 + s % 60, 500 + s);
    const RoutingResult a = base_route(c, g, tau);
    const RoutingResult b = base_route(c, g, tau);
    CHECK(a.physical_circuit == b.physical_circuit);
    CHECK(a.swap_count == a.physical_circuit.count(GateKind::SWAP));
    for (const auto& gate : a.physical_circuit) CHECK(g.adjacent(gate.q0, gate.q1));
    const auto v = verify(a.physical_circuit, c, g, tau);
    CHECK_MESSAGE(v.ok, v.reason);
  }
}

TEST_CASE("ann_qct_route") {
  const ArchGraph g = build_grid(2, 3);
  const Mapping tau = Mapping::naive(6);
  const PolicyModel uniform = constant_model(g, 3);

  CHECK(ann_qct_route(executed_on(g, 10, 4), g, tau, uniform).swap_count == 0);

  // Uniform model: the first committed swap is the first edge.
  const RoutingResult r = ann_qct_route(two_swap_fixture(), g, tau, uniform);
  REQUIRE(!r.physical_circuit.empty());
  const Gate& first = r.physical_circuit[0];
  CHECK(first.kind == GateKind::SWAP);
  CHECK(undirected(first) == Edge{g.edge(0).u, g.edge(0).v});
  CHECK(verify(r.physical_circuit, two_swap_fixture(), g, tau));

  const PolicyModel prefers13 = constant_model(g, 3, {{edge_index(g, 1, 3), 5.0f}});
  const RoutingResult p = ann_qct_route(two_swap_fixture(), g, tau, prefers13);
  CHECK(undirected(p.physical_circuit[0]) == Edge{1, 3});

  CHECK_THROWS_AS(ann_qct_route(two_swap_fixture(), build_grid(3, 2), tau, uniform), ModelError);
}

TEST_CASE("ann_qct_route terminates and verifies even with a useless policy") {
  const ArchGraph g = build_grid(3, 3);
  const Mapping tau = Mapping::naive(9);
  // Always prefers one edge; the guard has to take over.
  const PolicyModel stuck = constant_model(g, 3, {{0, 10.0f}});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Circuit c = random_circuit(9, 40, s);
    const RoutingResult r = ann_qct_route(c, g, tau, stuck);
    CHECK(verify(r.physical_circuit, c, g, tau));
  }
}

TEST_CASE("base_ann_route breaks cost ties with the policy") {
  const ArchGraph g = build_grid(2, 3);
  const Mapping tau = Mapping::naive(6);
  const PolicyModel prefers35 = constant_model(g, 3, {{edge_index(g, 3, 5), 3.0f}});
  const RoutingResult r = base_ann_route(two_swap_fixture(), g, tau, prefers35);
  CHECK(undirected(r.physical_circuit[0]) == Edge{3, 5});
  const PolicyModel prefers13 = constant_model(g, 3, {{edge_index(g, 1, 3), 3.0f}});
  const RoutingResult q = base_ann_route(two_swap_fixture(), g, tau, prefers13);
  CHECK(undirected(q.physical_circuit[0]) == Edge{1, 3});

  // A single cheapest swap wins regardless of the model: (q0,q2) on a line.
  const Circuit unique(6, {Gate::cnot(0, 4)});
  const PolicyModel elsewhere = constant_model(g, 3, {{edge_index(g, 3, 5), 8.0f}});
  CHECK(base_ann_route(unique, g, tau, elsewhere).physical_circuit ==
        base_route(unique, g, tau).physical_circuit);
}

TEST_CASE("base_ann_route with a uniform policy equals base_route") {
  for (const ArchGraph& g : {build_grid(2, 3), build_grid(4, 4), resolve_topology("tokyo")}) {
    const PolicyModel uniform = constant_model(g, 3);
    const Mapping tau = Mapping::naive(g.num_nodes());
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Circuit c = random_circuit(g.num_nodes(), 60, s);
      CHECK(base_ann_route(c, g, tau, uniform).physical_circuit == base_route(c, g, tau).physical_circuit);
    }
  }
}

TEST_CASE("decompose_swaps") {
  const Circuit one = decompose_swaps(Circuit(2, {Gate::swap(0, 1)}));
  CHECK(one == Circuit(2, {Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)}));
  const Circuit plain = random_circuit(4, 10, 1);
  CHECK(decompose_swaps(plain) == plain);
  Circuit mixed(4);
  for (int i = 0; i < 5; ++i) mixed.add_cnot(0, 1);
  mixed.add_swap(1, 2);
  mixed.add_swap(2, 3);
  CHECK(decompose_swaps(mixed).count(GateKind::CNOT) == 11);
  CHECK(decompose_swaps(mixed).count(GateKind::SWAP) == 0);

  const ArchGraph g = build_grid(3, 3);
  const Circuit c = random_circuit(9, 50, 2);
  const RoutingResult r = base_route(c, g, Mapping::naive(9));
  const Circuit expanded = decompose_swaps(r.physical_circuit);
  CHECK(expanded.count(GateKind::CNOT) == c.size() + 3 * r.swap_count);
  for (const auto& gate : expanded) CHECK(g.adjacent(gate.q0, gate.q1));
}

TEST_CASE("verify detects corrupted outputs") {
  const ArchGraph g = build_grid(2, 3);
  const Mapping tau = Mapping::naive(6);
  const Circuit lc = two_swap_fixture();
  const Circuit pc = base_route(lc, g, tau).physical_circuit;
  REQUIRE(verify(pc, lc, g, tau));

  const auto rebuilt = [&](const std::function<void(std::vector<Gate>&)>& edit) {
    std::vector<Gate> gates(pc.begin(), pc.end());
    edit(gates);
    return Circuit(6, gates);
  };

  const Circuit missing = rebuilt([](auto& gs) {
    for (auto it = gs.rbegin(); it != gs.rend(); ++it) {
      if (it->kind == GateKind::CNOT) {
        gs.erase(std::next(it).base());
        break;
      }
    }
  });
  auto v = verify(missing, lc, g, tau);
  CHECK_FALSE(v.ok);
  CHECK(v.reason.find("missing gate") != std::string::npos);

  const Circuit far = rebuilt([](auto& gs) { gs.push_back(Gate::cnot(0, 5)); });
  v = verify(far, lc, g, tau);
  CHECK_FALSE(v.ok);
  CHECK(v.reason.find("connectivity") != std::string::npos);

  const Circuit extra = rebuilt([](auto& gs) { gs.push_back(Gate::cnot(0, 1)); });
  CHECK_FALSE(verify(extra, lc, g, tau).ok);

  const Circuit dropped_swap = rebuilt([](auto& gs) {
    for (auto it = gs.begin(); it != gs.end(); ++it) {
      if (it->kind == GateKind::SWAP) {
        gs.erase(it);
        break;
      }
    }
  });
  CHECK_FALSE(verify(dropped_swap, lc, g, tau).ok);

  // Two dependent gates on an edge, emitted in the wrong order.
  const Circuit seq(6, {Gate::cnot(0, 1), Gate::cnot(1, 3)});
  CHECK(verify(Circuit(6, {Gate::cnot(0, 1), Gate::cnot(1, 3)}), seq, g, tau));
  v = verify(Circuit(6, {Gate::cnot(1, 3), Gate::cnot(0, 1)}), seq, g, tau);
  CHECK_FALSE(v.ok);
  CHECK(v.reason.find("dependency order") != std::string::npos);

  // Independent gates may appear in either order.
  const Circuit par(6, {Gate::cnot(0, 1), Gate::cnot(2, 3)});
  CHECK(verify(Circuit(6, {Gate::cnot(2, 3), Gate::cnot(0, 1)}), par, g, tau));
  CHECK_FALSE(verify(Circuit(6, {Gate::cnot(0, 1), Gate::cnot(2, 3)}), par, g, Mapping::from_images({1, 0}, 6)).ok);
}

TEST_CASE("min_swap_brute_force") {
  const ArchGraph g = build_grid(2, 3);
  const Mapping tau = Mapping::naive(6);
  CHECK(min_swap_brute_force(two_swap_fixture(), g, tau, 4) == 2);
  CHECK_THROWS_AS(min_swap_brute_force(two_swap_fixture(), g, tau, 1), BoundExceeded);
  CHECK(min_swap_brute_force(executed_on(g, 8, 2), g, tau, 4) == 0);
  CHECK(min_swap_brute_force(Circuit(6), g, tau, 0) == 0);
}

TEST_CASE("brute force agrees with iterative deepening and bounds every greedy router") {
  const ArchGraph g = build_grid(2, 3);
  const Mapping tau = Mapping::naive(6);
  const PolicyModel uniform = constant_model(g, 3);
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Circuit c = random_circuit(6, 3 + s % 4, 77 + s);
    std::size_t opt = 0;
    try {
      opt = min_swap_brute_force(c, g, tau, 4);
    } catch (const BoundExceeded&) {
      continue;
    }
    CHECK(opt == iddfs_min_swaps(c, g));
    CHECK(base_route(c, g, tau).swap_count >= opt);
    CHECK(ann_qct_route(c, g, tau, uniform).swap_count >= opt);
    CHECK(base_ann_route(c, g, tau, uniform).swap_count >= opt);
  }
}

TEST_CASE("route session guard escapes a stalled router") {
  const ArchGraph g = build_grid(3, 3);
  const Circuit c(9, {Gate::cnot(0, 8)});
  RouteSession s(c, g, Mapping::naive(9));
  const EdgeId far = edge_index(g, 4, 5);
  // Swapping the same far edge back and forth repeats a mapping.
  std::size_t commits = 0;
  while (!s.done() && commits < 100) {
    s.commit(far);
    ++commits;
  }
  CHECK(s.done());
  const RoutingResult r = s.finish();
  CHECK(r.escapes == 1);
  CHECK(verify(r.physical_circuit, c, g, Mapping::naive(9)));
}

TEST_CASE("routing result JSON") {
  RoutingResult r;
  r.swap_count = 4;
  r.elapsed_s = 0.5;
  const std::string j = to_json(r, "out.qasm");
  CHECK(j.find("\"swap_count\":4") != std::string::npos);
  CHECK(j.find("\"cnot_overhead\":12") != std::string::npos);
  CHECK(j.find("out.qasm") != std::string::npos);
}
