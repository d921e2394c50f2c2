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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qroute/arch.hpp"
#include "qroute/circuit.hpp"
#include "qroute/mapping.hpp"

namespace qroute {

/// A not-yet-executed logical gate. `index` is its position in the logical
/// circuit the state was created from; a/b keep the CNOT direction.
struct PendingGate {
  Qubit a;
  Qubit b;
  std::uint32_t index;
};

/// Executed-gate count and weighted look-ahead cost of a state, optionally
/// after one hypothetical SWAP.
struct Outlook {
  std::size_t executed = 0;
  double weighted_cost = 0.0;
};

/// Mapping plus the unexecuted remainder of a logical circuit. Value type:
/// search trees copy it freely.
class RoutingState {
 public:
  RoutingState(const Circuit& logical, const ArchGraph& g, Mapping mapping);

  const ArchGraph& arch() const { return *arch_; }
  const Mapping& mapping() const { return mapping_; }
  std::span<const PendingGate> pending() const { return pending_; }
  std::size_t num_logical() const { return num_logical_; }
  bool done() const { return pending_.empty(); }

  /// Removes every gate reachable through executable front-layer gates,
  /// in gate order. Appends the executed gates to `out` when given.
  std::size_t execute(std::vector<PendingGate>* out = nullptr);

  void apply_swap(EdgeId e) {
    const auto& edge = arch_->edge(e);
    mapping_.swap_physical(edge.u, edge.v);
  }

  /// Front-layer cost: sum of (hop distance - 1) over L_0.
  std::int32_t front_cost() const;
  /// front_cost() as it would be after swapping edge e; no copy is made.
  std::int32_t front_cost_after(EdgeId e) const;

  /// Gates that would execute after the optional swap, and the cost of the
  /// remaining circuit's first `window` layers, layer k weighted by decay^k.
  Outlook outlook(std::optional<EdgeId> swap, std::size_t window, double decay) const;

  /// Physical endpoint pairs of the first `n` ASAP layers of the remainder.
  std::vector<std::vector<std::pair<Qubit, Qubit>>> leading_layers(std::size_t n) const;

  /// Logical gates (as a circuit) still pending, in order.
  Circuit remaining_circuit() const;

 private:
  const ArchGraph* arch_;
  Mapping mapping_;
  std::vector<PendingGate> pending_;
  std::size_t num_logical_;
};

/// Gate indices that execute under tau without any SWAP, in removal order.
std::vector<std::size_t> executable_gates(const Circuit& c, const Mapping& tau, const ArchGraph& g);

/// Front-layer cost of c under tau.
std::int32_t cost(const Circuit& c, const Mapping& tau, const DistanceMatrix& d);

}  // namespace qroute
