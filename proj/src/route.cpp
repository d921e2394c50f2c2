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

#include "qroute/route.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "json.hpp"

namespace qroute {

std::string to_json(const RoutingResult& r, const std::string& output_qasm_path) {
  nlohmann::json j{{"swap_count", r.swap_count},
                   {"cnot_overhead", r.cnot_overhead()},
                   {"elapsed_s", r.elapsed_s},
                   {"output_qasm_path", output_qasm_path}};
  return j.dump();
}

void check_routable(const Circuit& lc, const ArchGraph& g) {
  if (lc.count(GateKind::SWAP) != 0) throw CircuitError("router input must be CNOT-only");
  if (lc.num_qubits() > g.num_nodes()) {
    throw ArchError("circuit has " + std::to_string(lc.num_qubits()) + " qubits but architecture '" +
                    g.name() + "' has only " + std::to_string(g.num_nodes()));
  }
}

RouteSession::RouteSession(const Circuit& lc, const ArchGraph& g, const Mapping& initial, GuardMode mode)
    : state_(lc, g, initial),
      initial_(state_.mapping()),
      out_(g.num_nodes()),
      mode_(mode),
      stall_limit_(std::max<std::size_t>(1, g.num_nodes() * g.num_edges())),
      start_(std::chrono::steady_clock::now()) {
  check_routable(lc, g);
  execute_and_emit();
  reset_guard();
}

std::size_t RouteSession::execute_and_emit() {
  scratch_.clear();
  const std::size_t n = state_.execute(&scratch_);
  const auto& tau = state_.mapping();
  for (const auto& pg : scratch_) out_.add_cnot(tau.physical(pg.a), tau.physical(pg.b));
  return n;
}

void RouteSession::swap_and_emit(EdgeId e) {
  const auto& edge = state_.arch().edge(e);
  state_.apply_swap(e);
  out_.add_swap(edge.u, edge.v);
  ++swaps_;
}

void RouteSession::reset_guard() {
  stall_ = 0;
  seen_.clear();
  if (mode_ == GuardMode::StateDeterministic) seen_.insert(state_.mapping().logical_to_physical());
}

std::size_t RouteSession::commit(EdgeId e) {
  swap_and_emit(e);
  const std::size_t n = execute_and_emit();
  if (n > 0) {
    reset_guard();
    return n;
  }
  ++stall_;
  bool tripped = stall_ >= stall_limit_;
  if (mode_ == GuardMode::StateDeterministic && !tripped) {
    tripped = !seen_.insert(state_.mapping().logical_to_physical()).second;
  }
  if (tripped && !done()) escape();
  return n;
}

void RouteSession::escape() {
  ++escapes_;
  const ArchGraph& g = state_.arch();
  const auto gate = state_.pending().front();
  for (;;) {
    const Qubit pa = state_.mapping().physical(gate.a);
    const Qubit pb = state_.mapping().physical(gate.b);
    const auto dist = g.distance(pa, pb);
    if (dist <= 1) break;
    Qubit next = pa;
    for (Qubit n : g.neighbors(pa)) {
      if (g.distance(n, pb) < dist && (next == pa || n < next)) next = n;
    }
    swap_and_emit(static_cast<EdgeId>(g.find_edge(pa, next)));
  }
  execute_and_emit();
  reset_guard();
}

bool RouteSession::revisits(EdgeId e) const {
  if (mode_ != GuardMode::StateDeterministic) return false;
  Mapping next = state_.mapping();
  const auto& edge = state_.arch().edge(e);
  next.swap_physical(edge.u, edge.v);
  return seen_.contains(next.logical_to_physical());
}

RoutingResult RouteSession::finish() {
  RoutingResult r;
  r.physical_circuit = std::move(out_);
  r.initial_mapping = initial_;
  r.swap_count = swaps_;
  r.nodes_expanded = nodes_expanded_;
  r.escapes = escapes_;
  r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return r;
}

namespace {

// Cheapest swaps under the front-layer cost, in edge order.
std::vector<EdgeId> cheapest_swaps(const RoutingState& st) {
  std::vector<EdgeId> best;
  std::int32_t best_cost = std::numeric_limits<std::int32_t>::max();
  const auto m = static_cast<EdgeId>(st.arch().num_edges());
  for (EdgeId e = 0; e < m; ++e) {
    const auto c = st.front_cost_after(e);
    if (c < best_cost) {
      best_cost = c;
      best.assign(1, e);
    } else if (c == best_cost) {
      best.push_back(e);
    }
  }
  return best;
}

}  // namespace

RoutingResult base_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial) {
  RouteSession s(lc, g, initial);
  while (!s.done()) s.commit(cheapest_swaps(s.state()).front());
  return s.finish();
}

RoutingResult ann_qct_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                            const PolicyModel& model) {
  model.check_compatible(g);
  RouteSession s(lc, g, initial);
  std::vector<EdgeId> order(g.num_edges());
  while (!s.done()) {
    const Eigen::VectorXd p = model.recommend(s.state());
    std::iota(order.begin(), order.end(), EdgeId{0});
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return p[a] > p[b]; });
    // Most probable swap that does not return to a mapping already seen
    // since the last execution.
    const auto pick = std::find_if(order.begin(), order.end(), [&](EdgeId e) { return !s.revisits(e); });
    if (pick == order.end()) {
      s.escape();
    } else {
      s.commit(*pick);
    }
  }
  return s.finish();
}

RoutingResult base_ann_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                             const PolicyModel& model) {
  model.check_compatible(g);
  RouteSession s(lc, g, initial);
  while (!s.done()) {
    const auto ties = cheapest_swaps(s.state());
    EdgeId pick = ties.front();
    if (ties.size() > 1) {
      const Eigen::VectorXd p = model.recommend(s.state());
      for (EdgeId e : ties) {
        if (p[e] > p[pick]) pick = e;
      }
    }
    s.commit(pick);
  }
  return s.finish();
}

Circuit decompose_swaps(const Circuit& pc) {
  Circuit out(pc.num_qubits());
  for (const auto& gate : pc) {
    if (gate.kind == GateKind::SWAP) {
      out.add_cnot(gate.q0, gate.q1);
      out.add_cnot(gate.q1, gate.q0);
      out.add_cnot(gate.q0, gate.q1);
    } else {
      out.add(gate);
    }
  }
  return out;
}

VerifyResult verify(const Circuit& pc, const Circuit& lc, const ArchGraph& g, const Mapping& initial) {
  const auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
  if (lc.num_qubits() > g.num_nodes()) return fail("qubit overflow");
  Mapping tau = initial.size() == g.num_nodes() ? initial
                                                : Mapping::from_images(initial.logical_to_physical(), g.num_nodes());

  // Per logical qubit, the indices of its lc gates in order; a gate is in
  // the front layer iff it heads the queues of both operands.
  std::vector<std::vector<std::size_t>> queue(lc.num_qubits());
  for (std::size_t i = 0; i < lc.size(); ++i) {
    if (lc[i].kind != GateKind::CNOT) return fail("logical circuit has a non-CNOT gate");
    queue[lc[i].q0].push_back(i);
    queue[lc[i].q1].push_back(i);
  }
  std::vector<std::size_t> head(lc.num_qubits(), 0);
  std::size_t matched = 0;

  for (std::size_t k = 0; k < pc.size(); ++k) {
    const Gate& gate = pc[k];
    const std::string at = " at gate " + std::to_string(k);
    if (gate.q0 >= g.num_nodes() || gate.q1 >= g.num_nodes()) return fail("qubit range" + at);
    if (!g.adjacent(gate.q0, gate.q1)) return fail("connectivity" + at);
    if (gate.kind == GateKind::SWAP) {
      tau.swap_physical(gate.q0, gate.q1);
      continue;
    }
    const Qubit a = tau.logical(gate.q0);
    const Qubit b = tau.logical(gate.q1);
    if (a >= lc.num_qubits() || b >= lc.num_qubits()) return fail("extra gate" + at);
    if (head[a] >= queue[a].size() || head[b] >= queue[b].size()) return fail("extra gate" + at);
    const std::size_t ia = queue[a][head[a]];
    const std::size_t ib = queue[b][head[b]];
    if (ia != ib) return fail("dependency order" + at);
    if (lc[ia].q0 != a || lc[ia].q1 != b) return fail("gate mismatch" + at);
    ++head[a];
    ++head[b];
    ++matched;
  }
  if (matched != lc.size()) return fail("missing gate");
  return {true, ""};
}

std::size_t min_swap_brute_force(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                                 std::size_t bound) {
  check_routable(lc, g);
  RoutingState root(lc, g, initial);
  root.execute();
  if (root.done()) return 0;

  using Key = std::pair<std::vector<Qubit>, std::vector<std::uint32_t>>;
  const auto key_of = [](const RoutingState& st) {
    Key k{st.mapping().logical_to_physical(), {}};
    k.second.reserve(st.pending().size());
    for (const auto& pg : st.pending()) k.second.push_back(pg.index);
    return k;
  };
  std::set<Key> seen{key_of(root)};
  std::vector<RoutingState> frontier{root};
  const auto m = static_cast<EdgeId>(g.num_edges());
  for (std::size_t depth = 1; depth <= bound; ++depth) {
    std::vector<RoutingState> next;
    for (const auto& st : frontier) {
      for (EdgeId e = 0; e < m; ++e) {
        RoutingState child = st;
        child.apply_swap(e);
        child.execute();
        if (child.done()) return depth;
        if (seen.insert(key_of(child)).second) next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  throw BoundExceeded("minimal swap count exceeds bound " + std::to_string(bound));
}

}  // namespace qroute
