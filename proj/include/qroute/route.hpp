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

#include <chrono>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/arch.hpp"
#include "qroute/circuit.hpp"
#include "qroute/mapping.hpp"
#include "qroute/policy.hpp"
#include "qroute/routing_state.hpp"

namespace qroute {

struct RoutingResult {
  Circuit physical_circuit;  // executed CNOTs and inserted SWAPs over physical qubits
  Mapping initial_mapping;
  std::size_t swap_count = 0;
  double elapsed_s = 0.0;
  std::size_t nodes_expanded = 0;  // search routers only
  std::size_t escapes = 0;         // livelock-guard interventions

  std::size_t cnot_overhead() const { return 3 * swap_count; }
};

/// {swap_count, cnot_overhead, elapsed_s, output_qasm_path}
std::string to_json(const RoutingResult& r, const std::string& output_qasm_path = "");

/// How the livelock guard detects a stuck router.
enum class GuardMode {
  /// Stall limit plus repeated-mapping detection; for routers whose choice
  /// depends only on the routing state.
  StateDeterministic,
  /// Stall limit only.
  StallOnly,
};

/// Bookkeeping shared by all routers: owns the routing state, emits the
/// physical circuit, and runs the livelock guard.
///
/// The guard trips when n_q * |E| consecutive swaps execute nothing or, in
/// StateDeterministic mode, when a mapping recurs with no execution in
/// between. On a trip the first pending gate is routed along a shortest path
/// (lowest-index neighbour that shortens the distance) and executed.
class RouteSession {
 public:
  RouteSession(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
               GuardMode mode = GuardMode::StateDeterministic);

  const RoutingState& state() const { return state_; }
  const ArchGraph& arch() const { return state_.arch(); }
  bool done() const { return state_.done(); }

  /// Applies the swap, records it, executes what became executable, and
  /// escapes if the guard trips. Returns the number of executed gates.
  std::size_t commit(EdgeId e);

  /// Routes the first pending gate along a shortest path and executes.
  void escape();

  /// True if swapping e would recreate a mapping seen since the last
  /// execution (StateDeterministic mode only; otherwise false).
  bool revisits(EdgeId e) const;

  void add_nodes_expanded(std::size_t n) { nodes_expanded_ += n; }
  RoutingResult finish();

 private:
  std::size_t execute_and_emit();
  void swap_and_emit(EdgeId e);
  void reset_guard();

  RoutingState state_;
  Mapping initial_;
  Circuit out_;
  GuardMode mode_;
  std::size_t stall_limit_;
  std::size_t stall_ = 0;
  std::set<std::vector<Qubit>> seen_;
  std::size_t swaps_ = 0;
  std::size_t escapes_ = 0;
  std::size_t nodes_expanded_ = 0;
  std::vector<PendingGate> scratch_;
  std::chrono::steady_clock::time_point start_;
};

/// Greedy router: per step the strictly-best swap, first in edge order.
RoutingResult base_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial);
/// Commits the policy's highest-probability swap after every step.
RoutingResult ann_qct_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                            const PolicyModel& model);
/// base_route with ties among the cheapest swaps broken by the policy.
RoutingResult base_ann_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                             const PolicyModel& model);

/// Replaces each SWAP(a,b) by CNOT(a,b) CNOT(b,a) CNOT(a,b).
Circuit decompose_swaps(const Circuit& pc);

struct VerifyResult {
  bool ok = false;
  std::string reason;  // empty when ok
  explicit operator bool() const { return ok; }
};

/// Checks connectivity of every gate in pc and that replaying pc from
/// `initial` yields a valid linearization of lc with exactly lc's gates.
VerifyResult verify(const Circuit& pc, const Circuit& lc, const ArchGraph& g, const Mapping& initial);

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimal swap count by breadth-first search over (mapping, pending) states
/// with maximal execution after each swap. Throws BoundExceeded when the
/// optimum exceeds `bound`.
std::size_t min_swap_brute_force(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                                 std::size_t bound);

/// Checks the router preconditions shared by every router (CNOT-only input,
/// width within the architecture). Throws CircuitError or ArchError.
void check_routable(const Circuit& lc, const ArchGraph& g);

}  // namespace qroute
