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
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qroute/distribution.hpp"
#include "qroute/mcts.hpp"
#include "qroute/policy.hpp"
#include "qroute/sahs.hpp"

namespace qroute {

/// Random CNOTs are appended to one circuit until its ASAP depth reaches
/// n_l * n_c; the circuit is then cut into n_c consecutive n_l-layer slices.
std::vector<Circuit> gen_training_circuits(std::size_t n_q, std::size_t n_l, std::size_t n_c, std::uint64_t seed);

/// Gates still pending after executing what the naive mapping allows.
Circuit naive_remainder(const Circuit& c, const ArchGraph& g);

/// w(e): swaps the completing router inserts after swap e on the naive
/// mapping (the candidate swap itself not counted); p(e) ~ 1 / (w(e) + 1).
RecommendationDistribution label_sahs(const Circuit& c, const ArchGraph& g, const SahsParams& params = {});
RecommendationDistribution label_base(const Circuit& c, const ArchGraph& g);
/// Root-child visit counts of one n_bp search from the naive mapping.
RecommendationDistribution label_mcts(const Circuit& c, const ArchGraph& g, const MctsParams& params);

/// The per-edge counts w(e) behind label_sahs / label_base.
std::vector<std::size_t> completion_swap_counts(const Circuit& c, const ArchGraph& g,
                                                const std::function<std::size_t(const Circuit&, const Mapping&)>& route);

struct LabelerSpec {
  enum class Kind { Sahs, Mcts, Base };
  Kind kind = Kind::Sahs;
  SahsParams sahs;
  MctsParams mcts{.n_bp = 200};

  std::string name() const;
  nlohmann::json params_json() const;
  static Kind parse_kind(const std::string& name);
};

/// Label for one circuit; `stream_seed` seeds the MCTS labeler.
RecommendationDistribution run_labeler(const LabelerSpec& spec, const Circuit& c, const ArchGraph& g,
                                       std::uint64_t stream_seed);

/// Training sample of c: the naive-mapping encoding of naive_remainder(c).
TrainingSample make_sample(const Circuit& c, const ArchGraph& g, std::size_t n_l, RecommendationDistribution label);

struct FarmFailure {
  std::size_t index = 0;
  std::string error;
};

struct DatasetManifest {
  std::string arch_name;
  std::string edge_list_sha;
  std::size_t n_q = 0;
  std::size_t n_l = 0;
  std::size_t n_c = 0;  // circuits submitted
  std::size_t num_samples = 0;
  std::string generator;
  nlohmann::json generator_params;
  std::uint64_t seed = 0;
  std::vector<std::string> sample_files;  // relative to the manifest
  std::vector<FarmFailure> failures;
};

struct FarmOptions {
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::size_t n_l = 3;
  /// Called from the writer thread after each circuit, in index order.
  std::function<void(std::size_t index, std::size_t total, bool ok)> progress;
};

struct FarmOutput {
  std::vector<TrainingSample> samples;  // circuit-index order, failures skipped
  std::vector<std::size_t> indices;     // circuit index of each sample
  std::vector<FarmFailure> failures;
};

/// Labels every circuit with stream seed derive_seed(seed, index). Results
/// do not depend on the worker count; a throwing labeler only fails its own
/// circuit.
FarmOutput label_circuits(const std::vector<Circuit>& circuits, const ArchGraph& g, const LabelerSpec& spec,
                          const FarmOptions& options);

/// label_circuits plus the on-disk dataset: <dir>/manifest.json and
/// <dir>/samples.jsonl with one {"encoding": hex, "label": [...]} per line.
DatasetManifest run_label_farm(const std::vector<Circuit>& circuits, const ArchGraph& g, const LabelerSpec& spec,
                               const FarmOptions& options, const std::filesystem::path& dir);

void write_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_samples(const std::vector<TrainingSample>& samples, const std::filesystem::path& path);
/// Reads every sample file of the manifest; throws std::runtime_error if a
/// sample's dimensions disagree with the manifest.
std::vector<TrainingSample> load_dataset(const std::filesystem::path& manifest_path);

/// Each circuit cut into n_l-layer slices; the final slice may be shorter.
std::vector<Circuit> slice_realistic_corpus(const std::vector<Circuit>& circuits, std::size_t n_l);

/// Seeded shuffle; the first n_test items form the test set. Returns (train, test).
std::pair<std::vector<Circuit>, std::vector<Circuit>> train_test_split(const std::vector<Circuit>& circuits,
                                                                      std::size_t n_test, std::uint64_t seed);

}  // namespace qroute
