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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qroute {

using Qubit = std::uint32_t;

class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GateKind : std::uint8_t { CNOT, SWAP };

/// Two-qubit gate. For CNOT, q0 is the control and q1 the target; routing
/// treats both gate kinds as undirected interactions.
struct Gate {
  GateKind kind = GateKind::CNOT;
  Qubit q0 = 0;
  Qubit q1 = 0;

  static constexpr Gate cnot(Qubit control, Qubit target) {
    return {GateKind::CNOT, control, target};
  }
  static constexpr Gate swap(Qubit a, Qubit b) { return {GateKind::SWAP, a, b}; }

  constexpr bool acts_on(Qubit q) const { return q0 == q || q1 == q; }
  friend constexpr bool operator==(const Gate&, const Gate&) = default;
};

std::string to_string(const Gate& g);

/// Ordered list of two-qubit gates over `num_qubits` qubits. Immutable once
/// handed to a router; gate order is exactly the construction order.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t num_qubits) : num_qubits_(num_qubits) {}
  Circuit(std::size_t num_qubits, std::vector<Gate> gates);

  void add(Gate g);
  void add_cnot(Qubit control, Qubit target) { add(Gate::cnot(control, target)); }
  void add_swap(Qubit a, Qubit b) { add(Gate::swap(a, b)); }

  std::size_t num_qubits() const { return num_qubits_; }
  std::span<const Gate> gates() const { return gates_; }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  std::size_t count(GateKind kind) const;

  auto begin() const { return gates_.begin(); }
  auto end() const { return gates_.end(); }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t num_qubits_ = 0;
  std::vector<Gate> gates_;
};

/// ASAP layering: layers[k] holds the indices (ascending) of the gates whose
/// longest qubit-predecessor chain has length k.
struct LayerDecomposition {
  std::vector<std::vector<std::size_t>> layers;

  std::size_t depth() const { return layers.size(); }
  bool empty() const { return layers.empty(); }
};

LayerDecomposition layers(const Circuit& c);

/// Per-gate ASAP layer index; cheaper than `layers` when only indices are needed.
std::vector<std::size_t> layer_index(const Circuit& c);

std::size_t depth(const Circuit& c);

/// Gate indices of L_0, in gate order.
std::vector<std::size_t> front_layer(const Circuit& c);

/// Immediate predecessors of each gate: the last earlier gate on each of its
/// qubits. The transitive closure is the full "shares a qubit and occurs
/// earlier" order.
struct DependencyDag {
  std::vector<std::vector<std::size_t>> predecessors;
};

DependencyDag dependency_dag(const Circuit& c);

/// Gates reordered layer by layer (within a layer, by original index).
Circuit flatten_layers(const Circuit& c, const LayerDecomposition& ld);

/// Sub-circuit made of layers [first, first + count) of `c`.
Circuit slice_layers(const Circuit& c, const LayerDecomposition& ld,
                     std::size_t first, std::size_t count);

/// `n_gates` CNOTs, each on a uniformly random ordered pair of distinct qubits.
Circuit random_circuit(std::size_t n_q, std::size_t n_gates, std::uint64_t seed);

}  // namespace qroute
