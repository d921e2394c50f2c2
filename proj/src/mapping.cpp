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

#include "qroute/mapping.hpp"

#include <numeric>

namespace qroute {

Mapping Mapping::naive(std::size_t n) {
  Mapping m;
  m.to_physical_.resize(n);
  std::iota(m.to_physical_.begin(), m.to_physical_.end(), Qubit{0});
  m.to_logical_ = m.to_physical_;
  return m;
}

Mapping Mapping::from_images(const std::vector<Qubit>& logical_to_physical, std::size_t n) {
  if (logical_to_physical.size() > n) {
    throw ArchError("mapping has " + std::to_string(logical_to_physical.size()) +
                    " logical qubits but only " + std::to_string(n) + " physical qubits exist");
  }
  constexpr Qubit kFree = ~Qubit{0};
  Mapping m;
  m.to_logical_.assign(n, kFree);
  m.to_physical_.reserve(n);
  for (Qubit q = 0; q < logical_to_physical.size(); ++q) {
    const Qubit p = logical_to_physical[q];
    if (p >= n || m.to_logical_[p] != kFree) {
      throw ArchError("initial mapping is not injective or out of range at logical qubit " +
                      std::to_string(q));
    }
    m.to_logical_[p] = q;
    m.to_physical_.push_back(p);
  }
  for (Qubit p = 0; p < n; ++p) {
    if (m.to_logical_[p] == kFree) {
      m.to_logical_[p] = static_cast<Qubit>(m.to_physical_.size());
      m.to_physical_.push_back(p);
    }
  }
  return m;
}

Mapping apply_swap(const Mapping& tau, const ArchGraph& g, Edge e) {
  edge_index(g, e.u, e.v);
  Mapping out = tau;
  out.swap_physical(e.u, e.v);
  return out;
}

}  // namespace qroute
