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
#include <vector>

#include "qroute/policy.hpp"
#include "qroute/route.hpp"

namespace qroute {

struct SahsParams {
  std::size_t depth = 2;
  /// Layers beyond the front layer that enter the leaf cost.
  std::size_t lookahead_layers = 2;
  /// Weight of layer k is decay^k.
  double lookahead_decay = 0.5;
  /// Trade-off between executed gates and residual cost.
  double cost_weight = 0.3;

  std::size_t window() const { return lookahead_layers + 1; }
};

struct SearchNode {
  RoutingState state;  // mapping and remaining gates
  std::vector<EdgeId> swaps_from_root;
  std::size_t executed_count = 0;
  double heuristic_value = 0.0;

  std::size_t depth() const { return swaps_from_root.size(); }
};

/// executed_count - cost_weight * sum_k decay^k * cost(layer k); higher is better.
double node_value(const SearchNode& n, const SahsParams& params);

/// Child of `parent` after swapping e and executing.
SearchNode expand(const SearchNode& parent, EdgeId e, const SahsParams& params);

/// Depth-d search over swaps that touch a qubit with pending gates; commits
/// the first swap towards the best leaf.
RoutingResult sahs_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                         const SahsParams& params = {});

/// sahs_route with the floor(ratio * |E|) least-recommended swaps dropped at
/// every opened node (at least one useful swap kept). Throws std::invalid_argument unless
/// 0 <= ratio < 1.
RoutingResult sahs_ann_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                             const SahsParams& params, const PolicyModel& model, double pruning_ratio);

/// Edges surviving pruning, in edge order. Among equal probabilities the
/// later edge is dropped first.
std::vector<EdgeId> surviving_edges(const Eigen::VectorXd& probabilities, double pruning_ratio);

}  // namespace qroute
