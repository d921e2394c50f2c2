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
#include <optional>
#include <vector>

#include "qroute/policy.hpp"
#include "qroute/route.hpp"

namespace qroute {

enum class MctsScore { VisitCount, MeanValue };

struct MctsParams {
  std::size_t n_bp = 20;  // iterations per decision
  double exploration_c = 1.4142135623730951;
  std::size_t sim_depth = 20;
  double epsilon = 0.1;        // random move probability in rollouts
  double discount = 0.9;       // per swap
  double swap_penalty = 0.0;   // subtracted from each step's executed count
  std::uint64_t seed = 0;
  MctsScore score = MctsScore::VisitCount;
  std::size_t runs = 1;        // best-of-k independent runs
};

struct MctsNode {
  RoutingState state;  // after the incoming swap and execution
  std::optional<EdgeId> incoming;
  double reward = 0.0;  // executed gates on arrival minus the swap penalty
  std::int32_t front_cost = 0;
  std::size_t visit_count = 0;
  double total_value = 0.0;
  std::int64_t parent = -1;
  std::vector<std::uint32_t> children;  // in edge order
  bool expanded = false;

  double mean_value() const { return visit_count ? total_value / static_cast<double>(visit_count) : 0.0; }
};

class MctsTree {
 public:
  MctsTree(RoutingState root, const MctsParams& params);

  const MctsNode& root() const { return nodes_[0]; }
  const MctsNode& node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  const MctsParams& params() const { return params_; }

  /// Creates every child of the root if it has none yet.
  void expand_root();
  /// Removes the floor(ratio * |E|) root children with the lowest
  /// probabilities (at least one child stays).
  void prune_root(const Eigen::VectorXd& probabilities, double ratio);
  /// One selection / expansion / simulation / backpropagation pass.
  void iterate(std::uint64_t stream_seed);
  /// n_bp iterations with streams derive_seed(seed, decision, i).
  void search(std::size_t decision);
  /// Keeps the subtree below the root child reached by e.
  void reroot(EdgeId e);

  /// Score of each edge's root child; 0 for pruned edges.
  std::vector<double> root_scores() const;
  std::size_t nodes_created() const { return created_; }

 private:
  std::uint32_t add_child(std::uint32_t parent, EdgeId e);
  void expand(std::uint32_t n);
  std::uint32_t select_child(const MctsNode& n) const;
  double simulate(RoutingState state, std::uint64_t stream_seed) const;
  double normalized(double q) const;

  MctsParams params_;
  std::vector<MctsNode> nodes_;
  double q_min_ = 0.0;
  double q_max_ = 0.0;
  bool q_seen_ = false;
  std::size_t created_ = 1;
};

/// Root child with the highest score; ties go to the higher mean value,
/// then the earliest edge. Throws
/// std::logic_error if the root is unexpanded.
EdgeId decide(const MctsTree& tree);

RoutingResult mcts_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial, const MctsParams& params = {});
/// mcts_route with policy pruning of every new root's children. Throws
/// std::invalid_argument unless 0 <= ratio < 1.
RoutingResult mcts_ann_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                             const MctsParams& params, const PolicyModel& model, double pruning_ratio);

/// Root-child scores after one n_bp search from `state` (decision index 0).
std::vector<double> mcts_root_scores(const RoutingState& state, const MctsParams& params);

}  // namespace qroute
