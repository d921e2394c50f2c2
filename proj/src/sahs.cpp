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

#include "qroute/sahs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace qroute {

double node_value(const SearchNode& n, const SahsParams& params) {
  const auto o = n.state.outlook(std::nullopt, params.window(), params.lookahead_decay);
  return static_cast<double>(n.executed_count + o.executed) - params.cost_weight * o.weighted_cost;
}

SearchNode expand(const SearchNode& parent, EdgeId e, const SahsParams& params) {
  SearchNode child{parent.state, parent.swaps_from_root, parent.executed_count, 0.0};
  child.state.apply_swap(e);
  child.executed_count += child.state.execute();
  child.swaps_from_root.push_back(e);
  child.heuristic_value = node_value(child, params);
  return child;
}

std::vector<EdgeId> surviving_edges(const Eigen::VectorXd& p, double pruning_ratio) {
  const auto m = static_cast<std::size_t>(p.size());
  const auto drop = std::min(m - 1, static_cast<std::size_t>(std::floor(pruning_ratio * static_cast<double>(m))));
  std::vector<EdgeId> order(m);
  std::iota(order.begin(), order.end(), EdgeId{0});
  // Ascending probability; among ties the later edge first.
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    if (p[a] != p[b]) return p[a] < p[b];
    return a > b;
  });
  std::vector<EdgeId> keep(order.begin() + static_cast<std::ptrdiff_t>(drop), order.end());
  std::sort(keep.begin(), keep.end());
  return keep;
}

namespace {

void check_ratio(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("pruning ratio must lie in [0, 1)");
}

class Searcher {
 public:
  Searcher(const SahsParams& params, const PolicyModel* model, double ratio)
      : params_(params), model_(model), ratio_(ratio) {
    if (params_.depth < 1) throw std::invalid_argument("search depth must be >= 1");
  }

  /// First swap on the path to the best leaf below `root`.
  EdgeId decide(const RoutingState& root, std::size_t* nodes) {
    best_ = {};
    nodes_ = 0;
    visit(root, 0, 0, std::nullopt);
    *nodes += nodes_;
    return best_.first;
  }

 private:
  struct Leaf {
    bool set = false;
    double value = 0.0;
    std::size_t depth = 0;
    EdgeId first = 0;
  };

  void offer(double value, std::size_t depth, EdgeId first) {
    // Strict comparisons keep the earliest leaf in edge order among equals.
    if (!best_.set || value > best_.value || (value == best_.value && depth < best_.depth)) {
      best_ = {true, value, depth, first};
    }
  }

  // Swaps touching at least one qubit with pending gates; an idle qubit
  // stays idle, so swapping two of them never matters. With a model the
  // floor(ratio * |E|) least-recommended edges are dropped first.
  std::vector<EdgeId> candidates(const RoutingState& node) const {
    const auto& g = node.arch();
    const auto m = static_cast<EdgeId>(g.num_edges());
    thread_local std::vector<std::uint8_t> active;
    active.assign(node.mapping().size(), 0);
    for (const auto& pg : node.pending()) active[pg.a] = active[pg.b] = 1;
    const auto is_active = [&](EdgeId e) {
      const auto& ed = g.edge(e);
      return active[node.mapping().logical(ed.u)] || active[node.mapping().logical(ed.v)];
    };
    std::vector<EdgeId> out;
    if (model_ == nullptr || static_cast<std::size_t>(std::floor(ratio_ * static_cast<double>(m))) == 0) {
      for (EdgeId e = 0; e < m; ++e) {
        if (is_active(e)) out.push_back(e);
      }
      return out;
    }
    const Eigen::VectorXd p = model_->recommend(node);
    for (EdgeId e : surviving_edges(p, ratio_)) {
      if (is_active(e)) out.push_back(e);
    }
    if (out.empty()) {
      std::optional<EdgeId> best;
      for (EdgeId e = 0; e < m; ++e) {
        if (is_active(e) && (!best || p[e] > p[*best])) best = e;
      }
      out.push_back(*best);
    }
    return out;
  }

  void visit(const RoutingState& node, std::size_t level, std::size_t executed, std::optional<EdgeId> first) {
    const auto edges = candidates(node);
    const std::size_t child_level = level + 1;
    for (EdgeId e : edges) {
      ++nodes_;
      const EdgeId head = first.value_or(e);
      if (child_level == params_.depth) {
        const auto o = node.outlook(e, params_.window(), params_.lookahead_decay);
        offer(static_cast<double>(executed + o.executed) - params_.cost_weight * o.weighted_cost, child_level,
              head);
        continue;
      }
      RoutingState child = node;
      child.apply_swap(e);
      const std::size_t gained = executed + child.execute();
      if (child.done()) {
        offer(static_cast<double>(gained), child_level, head);
        continue;
      }
      visit(child, child_level, gained, head);
    }
  }

  SahsParams params_;
  const PolicyModel* model_;
  double ratio_;
  Leaf best_;
  std::size_t nodes_ = 0;
};

RoutingResult run(const Circuit& lc, const ArchGraph& g, const Mapping& initial, Searcher& searcher) {
  RouteSession s(lc, g, initial);
  std::size_t nodes = 0;
  while (!s.done()) s.commit(searcher.decide(s.state(), &nodes));
  s.add_nodes_expanded(nodes);
  return s.finish();
}

}  // namespace

RoutingResult sahs_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial, const SahsParams& params) {
  Searcher searcher(params, nullptr, 0.0);
  return run(lc, g, initial, searcher);
}

RoutingResult sahs_ann_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                             const SahsParams& params, const PolicyModel& model, double pruning_ratio) {
  check_ratio(pruning_ratio);
  model.check_compatible(g);
  Searcher searcher(params, &model, pruning_ratio);
  return run(lc, g, initial, searcher);
}

}  // namespace qroute
