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

#include <algorithm>
#include <initializer_list>
#include <utility>

#include "qroute/arch.hpp"
#include "qroute/circuit.hpp"
#include "qroute/policy.hpp"

namespace qroute::testing {

// Six-qubit, five-layer circuit whose front gate is (q1,q5) and whose last
// layer holds (q0,q2). On grid 2x3 under the naive mapping it needs exactly
// two swaps, and (v1,v3) is the only first swap that allows two.
inline Circuit two_swap_fixture() {
  Circuit c(6);
  c.add_cnot(1, 5);
  c.add_cnot(1, 3);
  c.add_cnot(0, 3);
  c.add_cnot(2, 1);
  c.add_cnot(2, 3);
  c.add_cnot(3, 1);
  c.add_cnot(2, 0);
  return c;
}

inline Edge undirected(const Gate& g) { return {std::min(g.q0, g.q1), std::max(g.q0, g.q1)}; }

// Model whose output ignores the input: each listed edge gets the given
// logit, every other edge 0.
inline PolicyModel constant_model(const ArchGraph& g, std::size_t n_l,
                                  std::initializer_list<std::pair<EdgeId, float>> logits = {}) {
  PolicyModel m(g, n_l, {8}, 1);
  auto& net = m.net();
  net.weight(net.num_layers() - 1).setZero();
  for (const auto& [e, v] : logits) net.bias(net.num_layers() - 1)[e] = v;
  return m;
}

}  // namespace qroute::testing
