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

#include "qroute/circuit.hpp"

#include <algorithm>
#include <limits>

#include "qroute/rng.hpp"

namespace qroute {

std::string to_string(const Gate& g) {
  return std::string(g.kind == GateKind::CNOT ? "cx" : "swap") + "(" +
         std::to_string(g.q0) + "," + std::to_string(g.q1) + ")";
}

Circuit::Circuit(std::size_t num_qubits, std::vector<Gate> gates) : num_qubits_(num_qubits) {
  gates_.reserve(gates.size());
  for (const auto& g : gates) add(g);
}

void Circuit::add(Gate g) {
  if (g.q0 == g.q1) {
    throw CircuitError("gate " + to_string(g) + " uses the same qubit twice");
  }
  if (g.q0 >= num_qubits_ || g.q1 >= num_qubits_) {
    throw CircuitError("gate " + to_string(g) + ": qubit index out of range (" +
                       std::to_string(num_qubits_) + " qubits)");
  }
  gates_.push_back(g);
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

std::vector<std::size_t> layer_index(const Circuit& c) {
  std::vector<std::size_t> qubit_depth(c.num_qubits(), 0);
  std::vector<std::size_t> out;
  out.reserve(c.size());
  for (const auto& g : c) {
    const std::size_t d = std::max(qubit_depth[g.q0], qubit_depth[g.q1]);
    qubit_depth[g.q0] = qubit_depth[g.q1] = d + 1;
    out.push_back(d);
  }
  return out;
}

LayerDecomposition layers(const Circuit& c) {
  LayerDecomposition ld;
  const auto idx = layer_index(c);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= ld.layers.size()) ld.layers.resize(idx[i] + 1);
    ld.layers[idx[i]].push_back(i);
  }
  return ld;
}

std::size_t depth(const Circuit& c) {
  const auto idx = layer_index(c);
  return idx.empty() ? 0 : *std::max_element(idx.begin(), idx.end()) + 1;
}

std::vector<std::size_t> front_layer(const Circuit& c) {
  std::vector<bool> blocked(c.num_qubits(), false);
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& g = c[i];
    if (!blocked[g.q0] && !blocked[g.q1]) front.push_back(i);
    blocked[g.q0] = blocked[g.q1] = true;
  }
  return front;
}

DependencyDag dependency_dag(const Circuit& c) {
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> last(c.num_qubits(), kNone);
  DependencyDag dag;
  dag.predecessors.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& g = c[i];
    auto& preds = dag.predecessors[i];
    for (Qubit q : {g.q0, g.q1}) {
      if (last[q] != kNone && std::find(preds.begin(), preds.end(), last[q]) == preds.end()) {
        preds.push_back(last[q]);
      }
      last[q] = i;
    }
  }
  return dag;
}

Circuit flatten_layers(const Circuit& c, const LayerDecomposition& ld) {
  return slice_layers(c, ld, 0, ld.depth());
}

Circuit slice_layers(const Circuit& c, const LayerDecomposition& ld, std::size_t first,
                     std::size_t count) {
  Circuit out(c.num_qubits());
  const std::size_t last = std::min(ld.depth(), first + count);
  for (std::size_t k = first; k < last; ++k) {
    for (auto i : ld.layers[k]) out.add(c[i]);
  }
  return out;
}

Circuit random_circuit(std::size_t n_q, std::size_t n_gates, std::uint64_t seed) {
  if (n_q < 2) throw CircuitError("random_circuit needs at least 2 qubits");
  Rng rng(seed);
  Circuit c(n_q);
  for (std::size_t i = 0; i < n_gates; ++i) {
    const auto a = static_cast<Qubit>(rng.uniform_int(n_q));
    auto b = static_cast<Qubit>(rng.uniform_int(n_q - 1));
    if (b >= a) ++b;
    c.add_cnot(a, b);
  }
  return c;
}

}  // namespace qroute
