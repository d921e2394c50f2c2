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

#include "qroute/routing_state.hpp"

#include <algorithm>

namespace qroute {
namespace {

// Per-thread scratch so the hot scans never allocate.
std::vector<std::uint32_t>& scratch(std::size_t n) {
  thread_local std::vector<std::uint32_t> buf;
  buf.assign(n, 0);
  return buf;
}

}  // namespace

RoutingState::RoutingState(const Circuit& logical, const ArchGraph& g, Mapping mapping)
    : arch_(&g), mapping_(std::move(mapping)), num_logical_(logical.num_qubits()) {
  if (logical.num_qubits() > g.num_nodes()) {
    throw ArchError("circuit has " + std::to_string(logical.num_qubits()) +
                    " qubits but architecture '" + g.name() + "' has only " +
                    std::to_string(g.num_nodes()));
  }
  if (mapping_.size() != g.num_nodes()) {
    mapping_ = Mapping::from_images(mapping_.logical_to_physical(), g.num_nodes());
  }
  pending_.reserve(logical.size());
  for (std::uint32_t i = 0; i < logical.size(); ++i) {
    pending_.push_back({logical[i].q0, logical[i].q1, i});
  }
}

std::size_t RoutingState::execute(std::vector<PendingGate>* out) {
  auto& blocked = scratch(mapping_.size());
  std::size_t kept = 0;
  const std::size_t before = pending_.size();
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    const auto g = pending_[i];
    if (!blocked[g.a] && !blocked[g.b] &&
        arch_->adjacent(mapping_.physical(g.a), mapping_.physical(g.b))) {
      if (out) out->push_back(g);
      continue;
    }
    blocked[g.a] = blocked[g.b] = 1;
    pending_[kept++] = g;
  }
  pending_.resize(kept);
  return before - kept;
}

std::int32_t RoutingState::front_cost() const {
  auto& blocked = scratch(mapping_.size());
  std::int32_t total = 0;
  std::size_t nblocked = 0;
  for (const auto& g : pending_) {
    if (!blocked[g.a] && !blocked[g.b]) {
      total += arch_->distance(mapping_.physical(g.a), mapping_.physical(g.b)) - 1;
    }
    nblocked += !blocked[g.a] + !blocked[g.b];
    blocked[g.a] = blocked[g.b] = 1;
    if (nblocked >= num_logical_) break;
  }
  return total;
}

std::int32_t RoutingState::front_cost_after(EdgeId e) const {
  const auto [u, v] = arch_->edge(e);
  const auto phys = [&](Qubit q) {
    const Qubit p = mapping_.physical(q);
    return p == u ? v : (p == v ? u : p);
  };
  auto& blocked = scratch(mapping_.size());
  std::int32_t total = 0;
  std::size_t nblocked = 0;
  for (const auto& g : pending_) {
    if (!blocked[g.a] && !blocked[g.b]) total += arch_->distance(phys(g.a), phys(g.b)) - 1;
    nblocked += !blocked[g.a] + !blocked[g.b];
    blocked[g.a] = blocked[g.b] = 1;
    if (nblocked >= num_logical_) break;
  }
  return total;
}

Outlook RoutingState::outlook(std::optional<EdgeId> swap, std::size_t window, double decay) const {
  Qubit su = 0, sv = 0;
  if (swap) std::tie(su, sv) = std::pair{arch_->edge(*swap).u, arch_->edge(*swap).v};
  const auto phys = [&](Qubit q) {
    const Qubit p = mapping_.physical(q);
    if (!swap) return p;
    return p == su ? sv : (p == sv ? su : p);
  };
  // depth[q] == 0: q not yet blocked; otherwise 1 + layer of q's last pending gate.
  auto& depth = scratch(mapping_.size());
  thread_local std::vector<double> layer_cost;
  layer_cost.assign(window, 0.0);
  Outlook out;
  std::size_t saturated = 0;
  for (const auto& g : pending_) {
    const Qubit pa = phys(g.a);
    const Qubit pb = phys(g.b);
    if (depth[g.a] == 0 && depth[g.b] == 0 && arch_->adjacent(pa, pb)) {
      ++out.executed;
      continue;
    }
    const std::uint32_t layer = std::max(depth[g.a], depth[g.b]);
    if (layer < window) layer_cost[layer] += arch_->distance(pa, pb) - 1;
    for (Qubit q : {g.a, g.b}) {
      if (depth[q] < window && layer + 1 >= window) ++saturated;
      depth[q] = layer + 1;
    }
    if (saturated >= num_logical_) break;
  }
  double w = 1.0;
  for (double c : layer_cost) {
    out.weighted_cost += w * c;
    w *= decay;
  }
  return out;
}

std::vector<std::vector<std::pair<Qubit, Qubit>>> RoutingState::leading_layers(std::size_t n) const {
  std::vector<std::vector<std::pair<Qubit, Qubit>>> out(n);
  auto& depth = scratch(mapping_.size());
  std::size_t saturated = 0;
  for (const auto& g : pending_) {
    const std::uint32_t layer = std::max(depth[g.a], depth[g.b]);
    if (layer < n) out[layer].emplace_back(mapping_.physical(g.a), mapping_.physical(g.b));
    for (Qubit q : {g.a, g.b}) {
      if (depth[q] < n && layer + 1 >= n) ++saturated;
      depth[q] = layer + 1;
    }
    if (saturated >= num_logical_) break;
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

Circuit RoutingState::remaining_circuit() const {
  Circuit c(num_logical_);
  for (const auto& g : pending_) c.add_cnot(g.a, g.b);
  return c;
}

std::vector<std::size_t> executable_gates(const Circuit& c, const Mapping& tau, const ArchGraph& g) {
  RoutingState st(c, g, tau);
  std::vector<PendingGate> done;
  st.execute(&done);
  std::vector<std::size_t> out;
  out.reserve(done.size());
  for (const auto& pg : done) out.push_back(pg.index);
  return out;
}

std::int32_t cost(const Circuit& c, const Mapping& tau, const DistanceMatrix& d) {
  std::vector<bool> blocked(std::max<std::size_t>(c.num_qubits(), 1), false);
  std::int32_t total = 0;
  for (const auto& g : c) {
    if (!blocked[g.q0] && !blocked[g.q1]) total += d(tau.physical(g.q0), tau.physical(g.q1)) - 1;
    blocked[g.q0] = blocked[g.q1] = true;
  }
  return total;
}

}  // namespace qroute
