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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/arch.hpp"
#include "qroute/circuit.hpp"
#include "qroute/distribution.hpp"
#include "qroute/mapping.hpp"
#include "qroute/mlp.hpp"
#include "qroute/routing_state.hpp"

namespace qroute {

/// n_l stacked symmetric 0-1 matrices of size n_q x n_q, flattened: entry
/// (k, i, j) sits at k * n_q * n_q + i * n_q + j. Matrix k marks the
/// physical pairs acted on by a CNOT in layer k.
class Encoding {
 public:
  Encoding() = default;
  Encoding(std::size_t n_l, std::size_t n_q) : n_l_(n_l), n_q_(n_q), bits_(n_l * n_q * n_q, 0) {}

  std::size_t n_l() const { return n_l_; }
  std::size_t n_q() const { return n_q_; }
  std::size_t size() const { return bits_.size(); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool at(std::size_t k, std::size_t i, std::size_t j) const { return bits_[offset(k, i, j)] != 0; }
  void mark(std::size_t k, Qubit i, Qubit j) {
    bits_[offset(k, i, j)] = 1;
    bits_[offset(k, j, i)] = 1;
  }

  template <typename Scalar>
  VectorX<Scalar> as_vector() const {
    VectorX<Scalar> v(static_cast<Eigen::Index>(bits_.size()));
    for (std::size_t i = 0; i < bits_.size(); ++i) v[static_cast<Eigen::Index>(i)] = Scalar(bits_[i]);
    return v;
  }

  /// Bits packed LSB-first into bytes, hex encoded.
  std::string to_hex() const;
  static Encoding from_hex(const std::string& hex, std::size_t n_l, std::size_t n_q);

  friend bool operator==(const Encoding&, const Encoding&) = default;

 private:
  std::size_t offset(std::size_t k, std::size_t i, std::size_t j) const { return (k * n_q_ + i) * n_q_ + j; }

  std::size_t n_l_ = 0;
  std::size_t n_q_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// First n_l ASAP layers of c with qubits relabelled through tau; missing
/// layers stay zero. Throws CircuitError if a mapped qubit is >= n_q.
Encoding encode(const Circuit& c, const Mapping& tau, std::size_t n_l, std::size_t n_q);
/// Same for the pending remainder of a routing state (n_q = |V|).
Encoding encode(const RoutingState& state, std::size_t n_l);

/// Encoding with physical qubit i renamed to perm[i].
Encoding permute(const Encoding& x, const std::vector<Qubit>& perm);

class ModelError : public std::runtime_error {
 public:
  enum class Kind { Io, Corrupt, Version, Metadata, Dimension };
  ModelError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ModelMetadata {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint32_t format_version = kFormatVersion;
  std::string arch_name;
  std::string edge_list_sha;
  std::size_t n_q = 0;
  std::size_t n_l = 0;
  std::vector<Edge> edges;
  std::vector<Eigen::Index> layer_dims;
  std::string feeding_algorithm;  // informational: "sahs", "mcts", "base", ...
};

using PolicyNet = Mlp<float>;

/// Policy network bound to one architecture graph.
class PolicyModel {
 public:
  PolicyModel() = default;
  /// Fresh model: He-initialized hidden layers, zero output layer (uniform policy).
  PolicyModel(const ArchGraph& g, std::size_t n_l, std::vector<Eigen::Index> hidden = {512, 256},
              std::uint64_t seed = 0);
  PolicyModel(ModelMetadata meta, PolicyNet net);

  const ModelMetadata& metadata() const { return meta_; }
  const PolicyNet& net() const { return net_; }
  PolicyNet& net() { return net_; }
  std::size_t n_l() const { return meta_.n_l; }
  std::size_t num_edges() const { return meta_.edges.size(); }
  void set_feeding_algorithm(std::string name) { meta_.feeding_algorithm = std::move(name); }

  /// Throws ModelError(Metadata) unless the model was built for g.
  void check_compatible(const ArchGraph& g) const;

  Eigen::VectorXd recommend(const Encoding& x) const;
  Eigen::VectorXd recommend(const RoutingState& state) const { return recommend(encode(state, meta_.n_l)); }
  /// One column of probabilities per encoding.
  Eigen::MatrixXd recommend_batch(const std::vector<Encoding>& xs) const;

  std::optional<AdamState<float>> optimizer;

 private:
  ModelMetadata meta_;
  PolicyNet net_;
};

/// forward() of the policy: softmax output as a validated distribution.
RecommendationDistribution forward(const PolicyModel& m, const Encoding& x);

/// Binary model file:
///   bytes 0-7    magic "QRPOLICY"
///   bytes 8-11   u32 format version
///   bytes 12-15  u32 header length H
///   16..16+H     JSON header {format_version, arch_name, edge_list_sha, n_q,
///                n_l, num_edges, edges, layer_dims, feeding_algorithm,
///                scalar: "f32", has_optimizer}
///   then         u64 parameter count P, P little-endian f32 parameters
///   if optimizer i64 step, f32 lr, beta1, beta2, eps, P f32 m, P f32 v
///   last 8 bytes u64 FNV-1a of everything before
void save(const PolicyModel& m, const std::filesystem::path& path);
PolicyModel load(const std::filesystem::path& path);
/// load() plus check_compatible(g) and, when n_l is non-zero, an n_l check.
PolicyModel load(const std::filesystem::path& path, const ArchGraph& g, std::size_t n_l = 0);

struct TrainingSample {
  Encoding encoding;
  RecommendationDistribution label;
};

struct TrainConfig {
  std::vector<Eigen::Index> hidden{512, 256};
  std::size_t epochs = 40;
  std::size_t batch_size = 32;
  float learning_rate = 1e-3f;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
  std::string feeding_algorithm;
  bool keep_optimizer_state = true;
  /// Return the parameters of the epoch with the lowest validation loss.
  bool restore_best = false;
  /// Add every automorphic image of each training sample (validation
  /// samples are left alone).
  bool augment_symmetries = false;
};

struct TrainResult {
  PolicyModel model;
  double initial_train_loss = 0.0;
  double initial_validation_loss = 0.0;
  std::vector<double> train_loss;       // per epoch, full pass after the epoch
  std::vector<double> validation_loss;  // empty when there is no validation split
  std::size_t best_epoch = 0;           // 1-based epoch of the returned parameters; 0 = untrained
};

/// Mini-batch MSE + Adam. Deterministic for a fixed seed.
TrainResult train(const std::vector<TrainingSample>& dataset, const ArchGraph& g, const TrainConfig& cfg);

}  // namespace qroute
