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

#include "qroute/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qroute/rng.hpp"
#include "qroute/sahs.hpp"

namespace qroute {

MctsTree::MctsTree(RoutingState root, const MctsParams& params) : params_(params) {
  if (params_.n_bp < 1) throw std::invalid_argument("n_bp must be >= 1");
  const auto cost = root.front_cost();
  nodes_.push_back(MctsNode{std::move(root), std::nullopt, 0.0, cost, 0, 0.0, -1, {}, false});
}

std::uint32_t MctsTree::add_child(std::uint32_t parent, EdgeId e) {
  RoutingState st = nodes_[parent].state;
  st.apply_swap(e);
  const double reward = static_cast<double>(st.execute()) - params_.swap_penalty;
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  const auto cost = st.front_cost();
  nodes_.push_back(MctsNode{std::move(st), e, reward, cost, 0, 0.0, parent, {}, false});
  ++created_;
  return id;
}

void MctsTree::expand(std::uint32_t n) {
  const auto m = static_cast<EdgeId>(nodes_[n].state.arch().num_edges());
  nodes_.reserve(nodes_.size() + m);
  std::vector<std::uint32_t> kids;
  kids.reserve(m);
  for (EdgeId e = 0; e < m; ++e) kids.push_back(add_child(n, e));
  nodes_[n].children = std::move(kids);
  nodes_[n].expanded = true;
}

void MctsTree::expand_root() {
  if (!nodes_[0].expanded) expand(0);
}

void MctsTree::prune_root(const Eigen::VectorXd& p, double ratio) {
  expand_root();
  auto& root = nodes_[0];
  const auto keep = surviving_edges(p, ratio);
  std::vector<std::uint32_t> kept;
  for (auto c : root.children) {
    const EdgeId e = *nodes_[c].incoming;
    if (std::binary_search(keep.begin(), keep.end(), e)) {
      kept.push_back(c);
    } else {
      root.visit_count -= nodes_[c].visit_count;
      root.total_value -= nodes_[c].total_value;
    }
  }
  root.children = std::move(kept);
}

double MctsTree::normalized(double q) const {
  if (!q_seen_ || q_max_ <= q_min_) return 0.5;
  return (q - q_min_) / (q_max_ - q_min_);
}

std::uint32_t MctsTree::select_child(const MctsNode& n) const {
  // Unvisited children come first, most executed gates then lowest cost first.
  std::int64_t fresh = -1;
  for (auto c : n.children) {
    const auto& child = nodes_[c];
    if (child.visit_count != 0) continue;
    if (fresh < 0 || child.reward > nodes_[fresh].reward ||
        (child.reward == nodes_[fresh].reward && child.front_cost < nodes_[fresh].front_cost)) {
      fresh = c;
    }
  }
  if (fresh >= 0) return static_cast<std::uint32_t>(fresh);

  const double log_parent = std::log(static_cast<double>(std::max<std::size_t>(n.visit_count, 1)));
  std::uint32_t best = n.children.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (auto c : n.children) {
    const auto& child = nodes_[c];
    const double score = normalized(child.mean_value()) +
                         params_.exploration_c * std::sqrt(log_parent / static_cast<double>(child.visit_count));
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

double MctsTree::simulate(RoutingState st, std::uint64_t stream_seed) const {
  Rng rng(stream_seed);
  const auto m = static_cast<EdgeId>(st.arch().num_edges());
  std::vector<EdgeId> ties;
  double ret = 0.0;
  double weight = 1.0;
  for (std::size_t step = 0; step < params_.sim_depth && !st.done(); ++step) {
    EdgeId pick;
    if (rng.uniform() < params_.epsilon) {
      pick = static_cast<EdgeId>(rng.uniform_int(m));
    } else {
      ties.clear();
      std::int32_t best = std::numeric_limits<std::int32_t>::max();
      for (EdgeId e = 0; e < m; ++e) {
        const auto c = st.front_cost_after(e);
        if (c < best) {
          best = c;
          ties.assign(1, e);
        } else if (c == best) {
          ties.push_back(e);
        }
      }
      pick = ties[rng.uniform_int(ties.size())];
    }
    st.apply_swap(pick);
    ret += weight * (static_cast<double>(st.execute()) - params_.swap_penalty);
    weight *= params_.discount;
  }
  return ret;
}

void MctsTree::iterate(std::uint64_t stream_seed) {
  std::uint32_t n = 0;
  while (nodes_[n].expanded && !nodes_[n].state.done()) n = select_child(nodes_[n]);

  double ret = 0.0;
  if (!nodes_[n].state.done()) {
    // A node is simulated once by itself before it gets children.
    if (n == 0 || nodes_[n].visit_count > 0) {
      expand(n);
      n = select_child(nodes_[n]);
    }
    ret = simulate(nodes_[n].state, stream_seed);
  }
  // Backpropagate discounted returns; the root only counts visits.
  for (std::int64_t i = n; i > 0; i = nodes_[i].parent) {
    auto& node = nodes_[i];
    ret = node.reward + params_.discount * ret;
    node.total_value += ret;
    ++node.visit_count;
    const double q = node.mean_value();
    if (!q_seen_) {
      q_min_ = q_max_ = q;
      q_seen_ = true;
    } else {
      q_min_ = std::min(q_min_, q);
      q_max_ = std::max(q_max_, q);
    }
  }
  ++nodes_[0].visit_count;
}

void MctsTree::search(std::size_t decision) {
  for (std::size_t i = 0; i < params_.n_bp; ++i) iterate(derive_seed({params_.seed, decision, i}));
}

void MctsTree::reroot(EdgeId e) {
  std::int64_t from = -1;
  for (auto c : nodes_[0].children) {
    if (nodes_[c].incoming == e) from = c;
  }
  if (from < 0) throw std::logic_error("reroot: edge is not a root child");
  std::vector<MctsNode> fresh;
  std::vector<std::pair<std::uint32_t, std::int64_t>> todo{{static_cast<std::uint32_t>(from), -1}};
  for (std::size_t k = 0; k < todo.size(); ++k) {
    const auto [old_id, new_parent] = todo[k];
    MctsNode copy = std::move(nodes_[old_id]);
    copy.parent = new_parent;
    const auto new_id = static_cast<std::int64_t>(fresh.size());
    for (auto c : copy.children) todo.emplace_back(c, new_id);
    copy.children.clear();
    if (new_parent >= 0) fresh[static_cast<std::size_t>(new_parent)].children.push_back(static_cast<std::uint32_t>(new_id));
    fresh.push_back(std::move(copy));
  }
  fresh[0].incoming.reset();
  fresh[0].reward = 0.0;
  nodes_ = std::move(fresh);
}

std::vector<double> MctsTree::root_scores() const {
  std::vector<double> out(nodes_[0].state.arch().num_edges(), 0.0);
  for (auto c : nodes_[0].children) {
    const auto& child = nodes_[c];
    out[*child.incoming] = params_.score == MctsScore::VisitCount ? static_cast<double>(child.visit_count)
                                                                  : child.mean_value();
  }
  return out;
}

EdgeId decide(const MctsTree& tree) {
  const auto& root = tree.root();
  if (!root.expanded || root.children.empty()) throw std::logic_error("decide: root is not expanded");
  const bool by_visits = tree.params().score == MctsScore::VisitCount;
  const auto score = [&](const MctsNode& n) {
    if (by_visits) return static_cast<double>(n.visit_count);
    return n.visit_count ? n.mean_value() : -std::numeric_limits<double>::infinity();
  };
  const auto mean = [](const MctsNode& n) {
    return n.visit_count ? n.mean_value() : -std::numeric_limits<double>::infinity();
  };
  const MctsNode* best = &tree.node(root.children.front());
  for (auto c : root.children) {
    const auto& n = tree.node(c);
    if (score(n) > score(*best) || (score(n) == score(*best) && mean(n) > mean(*best))) best = &n;
  }
  return *best->incoming;
}

namespace {

void check_ratio(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("pruning ratio must lie in [0, 1)");
}

RoutingResult single_run(const Circuit& lc, const ArchGraph& g, const Mapping& initial, const MctsParams& params,
                         const PolicyModel* model, double ratio) {
  RouteSession s(lc, g, initial, GuardMode::StallOnly);
  const bool prune = model != nullptr && std::floor(ratio * static_cast<double>(g.num_edges())) >= 1.0;
  std::optional<MctsTree> tree;
  std::size_t nodes = 0;
  const auto on_new_root = [&] {
    if (prune) tree->prune_root(model->recommend(tree->root().state), ratio);
  };
  for (std::size_t decision = 0; !s.done(); ++decision) {
    if (!tree) {
      tree.emplace(s.state(), params);
      on_new_root();
    }
    const std::size_t before = tree->nodes_created();
    tree->search(decision);
    nodes += tree->nodes_created() - before;
    const EdgeId e = decide(*tree);
    s.commit(e);
    if (s.done()) break;
    tree->reroot(e);
    const auto& rs = tree->root().state;
    if (rs.mapping() == s.state().mapping() && rs.pending().size() == s.state().pending().size()) {
      on_new_root();
    } else {
      tree.reset();  // the livelock guard moved the state
    }
  }
  s.add_nodes_expanded(nodes);
  return s.finish();
}

RoutingResult best_of(const Circuit& lc, const ArchGraph& g, const Mapping& initial, const MctsParams& params,
                      const PolicyModel* model, double ratio) {
  std::optional<RoutingResult> best;
  double elapsed = 0.0;
  for (std::size_t run = 0; run < std::max<std::size_t>(params.runs, 1); ++run) {
    MctsParams p = params;
    if (run > 0) p.seed = derive_seed({params.seed, run});
    auto r = single_run(lc, g, initial, p, model, ratio);
    elapsed += r.elapsed_s;
    if (!best || r.swap_count < best->swap_count) best = std::move(r);
  }
  best->elapsed_s = elapsed;
  return std::move(*best);
}

}  // namespace

RoutingResult mcts_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial, const MctsParams& params) {
  return best_of(lc, g, initial, params, nullptr, 0.0);
}

RoutingResult mcts_ann_route(const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                             const MctsParams& params, const PolicyModel& model, double pruning_ratio) {
  check_ratio(pruning_ratio);
  model.check_compatible(g);
  return best_of(lc, g, initial, params, &model, pruning_ratio);
}

std::vector<double> mcts_root_scores(const RoutingState& state, const MctsParams& params) {
  MctsTree tree(state, params);
  tree.search(0);
  return tree.root_scores();
}

}  // namespace qroute
