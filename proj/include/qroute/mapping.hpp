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

#include <vector>

#include "qroute/arch.hpp"
#include "qroute/circuit.hpp"

namespace qroute {

/// Bijection between logical and physical qubits. It always covers every
/// physical qubit: logical indices beyond a circuit's width are idle
/// placeholders, so a SWAP on any edge is well defined.
class Mapping {
 public:
  Mapping() = default;

  /// q_i -> v_i for i < n.
  static Mapping naive(std::size_t n);

  /// Takes logical->physical images for the first k logical qubits and
  /// assigns the unused physical qubits, in ascending order, to logical
  /// qubits k..n-1. Throws if the images are out of range or repeated.
  static Mapping from_images(const std::vector<Qubit>& logical_to_physical, std::size_t n);

  std::size_t size() const { return to_physical_.size(); }
  Qubit physical(Qubit logical) const { return to_physical_[logical]; }
  Qubit logical(Qubit physical) const { return to_logical_[physical]; }
  const std::vector<Qubit>& logical_to_physical() const { return to_physical_; }

  /// Exchanges the logical occupants of physical qubits u and v.
  void swap_physical(Qubit u, Qubit v) {
    const Qubit a = to_logical_[u];
    const Qubit b = to_logical_[v];
    to_logical_[u] = b;
    to_logical_[v] = a;
    to_physical_[a] = v;
    to_physical_[b] = u;
  }

  friend bool operator==(const Mapping&, const Mapping&) = default;

 private:
  std::vector<Qubit> to_physical_;
  std::vector<Qubit> to_logical_;
};

/// New mapping with the occupants of edge e's endpoints exchanged.
/// Throws ArchError if e is not an edge of g.
Mapping apply_swap(const Mapping& tau, const ArchGraph& g, Edge e);

}  // namespace qroute
