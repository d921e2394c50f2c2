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

#include "qroute/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <variant>

#include "qroute/rng.hpp"

namespace qroute {

std::vector<Circuit> gen_training_circuits(std::size_t n_q, std::size_t n_l, std::size_t n_c, std::uint64_t seed) {
  if (n_q < 2) throw std::invalid_argument("training circuits need at least 2 qubits");
  if (n_l < 1 || n_c < 1) throw std::invalid_argument("n_l and n_c must be >= 1");
  const std::size_t target = n_l * n_c;
  Rng rng(seed);
  Circuit parent(n_q);
  std::vector<std::size_t> level(n_q, 0);
  std::size_t depth = 0;
  while (depth < target) {
    const auto a = static_cast<Qubit>(rng.uniform_int(n_q));
    auto b = static_cast<Qubit>(rng.uniform_int(n_q - 1));
    if (b >= a) ++b;
    parent.add_cnot(a, b);
    level[a] = level[b] = std::max(level[a], level[b]) + 1;
    depth = std::max(depth, level[a]);
  }
  const auto ld = layers(parent);
  std::vector<Circuit> out;
  out.reserve(n_c);
  for (std::size_t k = 0; k < n_c; ++k) out.push_back(slice_layers(parent, ld, k * n_l, n_l));
  return out;
}

Circuit naive_remainder(const Circuit& c, const ArchGraph& g) {
  RoutingState st(c, g, Mapping::naive(g.num_nodes()));
  st.execute();
  return st.remaining_circuit();
}

std::vector<std::size_t> completion_swap_counts(const Circuit& c, const ArchGraph& g,
                                                const std::function<std::size_t(const Circuit&, const Mapping&)>& route) {
  const Circuit rest = naive_remainder(c, g);
  const Mapping naive = Mapping::naive(g.num_nodes());
  std::vector<std::size_t> w(g.num_edges(), 0);
  if (rest.empty()) return w;
  for (EdgeId e = 0; e < g.num_edges(); ++e) w[e] = route(rest, apply_swap(naive, g, g.edge(e)));
  return w;
}

RecommendationDistribution label_sahs(const Circuit& c, const ArchGraph& g, const SahsParams& params) {
  const auto w = completion_swap_counts(
      c, g, [&](const Circuit& lc, const Mapping& tau) { return sahs_route(lc, g, tau, params).swap_count; });
  return RecommendationDistribution::from_swap_counts(w);
}

RecommendationDistribution label_base(const Circuit& c, const ArchGraph& g) {
  const auto w = completion_swap_counts(
      c, g, [&](const Circuit& lc, const Mapping& tau) { return base_route(lc, g, tau).swap_count; });
  return RecommendationDistribution::from_swap_counts(w);
}

RecommendationDistribution label_mcts(const Circuit& c, const ArchGraph& g, const MctsParams& params) {
  if (params.n_bp < g.num_edges()) throw std::invalid_argument("label_mcts needs n_bp >= |E|");
  RoutingState st(c, g, Mapping::naive(g.num_nodes()));
  st.execute();
  if (st.done()) return RecommendationDistribution::uniform(g.num_edges());
  const auto scores = mcts_root_scores(st, params);
  return RecommendationDistribution::from_scores(scores);
}

std::string LabelerSpec::name() const {
  switch (kind) {
    case Kind::Sahs: return "sahs";
    case Kind::Mcts: return "mcts";
    case Kind::Base: return "base";
  }
  return "?";
}

nlohmann::json LabelerSpec::params_json() const {
  switch (kind) {
    case Kind::Sahs:
      return {{"depth", sahs.depth},
              {"lookahead_layers", sahs.lookahead_layers},
              {"lookahead_decay", sahs.lookahead_decay},
              {"cost_weight", sahs.cost_weight}};
    case Kind::Mcts:
      return {{"n_bp", mcts.n_bp},
              {"exploration_c", mcts.exploration_c},
              {"sim_depth", mcts.sim_depth},
              {"epsilon", mcts.epsilon},
              {"discount", mcts.discount},
              {"swap_penalty", mcts.swap_penalty}};
    case Kind::Base:
      return nlohmann::json::object();
  }
  return {};
}

LabelerSpec::Kind LabelerSpec::parse_kind(const std::string& name) {
  if (name == "sahs") return Kind::Sahs;
  if (name == "mcts") return Kind::Mcts;
  if (name == "base") return Kind::Base;
  throw std::invalid_argument("unknown labeler '" + name + "' (expected sahs, mcts or base)");
}

RecommendationDistribution run_labeler(const LabelerSpec& spec, const Circuit& c, const ArchGraph& g,
                                       std::uint64_t stream_seed) {
  switch (spec.kind) {
    case LabelerSpec::Kind::Sahs: return label_sahs(c, g, spec.sahs);
    case LabelerSpec::Kind::Base: return label_base(c, g);
    case LabelerSpec::Kind::Mcts: {
      MctsParams p = spec.mcts;
      p.seed = stream_seed;
      return label_mcts(c, g, p);
    }
  }
  throw std::logic_error("unreachable labeler kind");
}

TrainingSample make_sample(const Circuit& c, const ArchGraph& g, std::size_t n_l, RecommendationDistribution label) {
  return {encode(naive_remainder(c, g), Mapping::naive(g.num_nodes()), n_l, g.num_nodes()), std::move(label)};
}

FarmOutput label_circuits(const std::vector<Circuit>& circuits, const ArchGraph& g, const LabelerSpec& spec,
                          const FarmOptions& options) {
  if (options.workers < 1) throw std::invalid_argument("workers must be >= 1");
  using Slot = std::optional<std::variant<TrainingSample, std::string>>;
  const std::size_t n = circuits.size();
  std::vector<Slot> slots(n);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      Slot result;
      try {
        auto label = run_labeler(spec, circuits[i], g, derive_seed({options.seed, i}));
        result.emplace(make_sample(circuits[i], g, options.n_l, std::move(label)));
      } catch (const std::exception& e) {
        result.emplace(std::string(e.what()));
      }
      {
        std::lock_guard lock(mu);
        slots[i] = std::move(result);
      }
      ready.notify_all();
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(options.workers, std::max<std::size_t>(n, 1)); ++w) pool.emplace_back(work);

  FarmOutput out;
  for (std::size_t i = 0; i < n; ++i) {
    Slot slot;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return slots[i].has_value(); });
      slot = std::move(slots[i]);
    }
    const bool ok = std::holds_alternative<TrainingSample>(*slot);
    if (ok) {
      out.samples.push_back(std::move(std::get<TrainingSample>(*slot)));
      out.indices.push_back(i);
    } else {
      out.failures.push_back({i, std::get<std::string>(*slot)});
    }
    if (options.progress) options.progress(i, n, ok);
  }
  return out;
}

namespace {

nlohmann::json manifest_json(const DatasetManifest& m) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : m.failures) failures.push_back({{"index", f.index}, {"error", f.error}});
  return {{"arch_name", m.arch_name},
          {"edge_list_sha", m.edge_list_sha},
          {"n_q", m.n_q},
          {"n_l", m.n_l},
          {"n_c", m.n_c},
          {"num_samples", m.num_samples},
          {"generator", m.generator},
          {"generator_params", m.generator_params},
          {"seed", m.seed},
          {"sample_files", m.sample_files},
          {"failures", failures}};
}

}  // namespace

DatasetManifest run_label_farm(const std::vector<Circuit>& circuits, const ArchGraph& g, const LabelerSpec& spec,
                               const FarmOptions& options, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto out = label_circuits(circuits, g, spec, options);
  DatasetManifest m;
  m.arch_name = g.name();
  m.edge_list_sha = edge_list_sha256(g);
  m.n_q = g.num_nodes();
  m.n_l = options.n_l;
  m.n_c = circuits.size();
  m.num_samples = out.samples.size();
  m.generator = spec.name();
  m.generator_params = spec.params_json();
  m.seed = options.seed;
  m.sample_files = {"samples.jsonl"};
  m.failures = out.failures;
  write_samples(out.samples, dir / "samples.jsonl");
  write_manifest(m, dir / "manifest.json");
  return m;
}

void write_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << manifest_json(m).dump(2) << '\n';
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  const auto j = nlohmann::json::parse(f);
  DatasetManifest m;
  m.arch_name = j.at("arch_name").get<std::string>();
  m.edge_list_sha = j.at("edge_list_sha").get<std::string>();
  m.n_q = j.at("n_q").get<std::size_t>();
  m.n_l = j.at("n_l").get<std::size_t>();
  m.n_c = j.at("n_c").get<std::size_t>();
  m.num_samples = j.at("num_samples").get<std::size_t>();
  m.generator = j.at("generator").get<std::string>();
  m.generator_params = j.value("generator_params", nlohmann::json::object());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.sample_files = j.at("sample_files").get<std::vector<std::string>>();
  for (const auto& f2 : j.value("failures", nlohmann::json::array())) {
    m.failures.push_back({f2.at("index").get<std::size_t>(), f2.at("error").get<std::string>()});
  }
  return m;
}

void write_samples(const std::vector<TrainingSample>& samples, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (const auto& s : samples) {
    const auto& p = s.label.probabilities();
    nlohmann::json line{{"encoding", s.encoding.to_hex()},
                        {"label", std::vector<double>(p.data(), p.data() + p.size())}};
    f << line.dump() << '\n';
  }
}

std::vector<TrainingSample> load_dataset(const std::filesystem::path& manifest_path) {
  const auto m = read_manifest(manifest_path);
  std::vector<TrainingSample> out;
  out.reserve(m.num_samples);
  for (const auto& name : m.sample_files) {
    const auto path = manifest_path.parent_path() / name;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    for (std::size_t lineno = 1; std::getline(f, line); ++lineno) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto label = j.at("label").get<std::vector<double>>();
      auto enc = Encoding::from_hex(j.at("encoding").get<std::string>(), m.n_l, m.n_q);
      if (label.empty() || (!out.empty() && label.size() != out.front().label.size())) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": label length mismatch");
      }
      out.push_back({std::move(enc), RecommendationDistribution(Eigen::Map<const Eigen::VectorXd>(
                                         label.data(), static_cast<Eigen::Index>(label.size())))});
    }
  }
  if (out.size() != m.num_samples) {
    throw std::runtime_error("dataset has " + std::to_string(out.size()) + " samples, manifest says " +
                             std::to_string(m.num_samples));
  }
  return out;
}

std::vector<Circuit> slice_realistic_corpus(const std::vector<Circuit>& circuits, std::size_t n_l) {
  if (n_l < 1) throw std::invalid_argument("n_l must be >= 1");
  std::vector<Circuit> out;
  for (const auto& c : circuits) {
    const auto ld = layers(c);
    for (std::size_t k = 0; k < ld.depth(); k += n_l) out.push_back(slice_layers(c, ld, k, n_l));
  }
  return out;
}

std::pair<std::vector<Circuit>, std::vector<Circuit>> train_test_split(const std::vector<Circuit>& circuits,
                                                                      std::size_t n_test, std::uint64_t seed) {
  std::vector<std::size_t> order(circuits.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  n_test = std::min(n_test, circuits.size());
  std::pair<std::vector<Circuit>, std::vector<Circuit>> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_test ? out.second : out.first).push_back(circuits[order[k]]);
  }
  return out;
}

}  // namespace qroute
