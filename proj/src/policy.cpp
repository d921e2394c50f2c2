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

#include "qroute/policy.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>
#include <utility>

#include "json.hpp"

namespace qroute {
namespace {

constexpr char kMagic[8] = {'Q', 'R', 'P', 'O', 'L', 'I', 'C', 'Y'};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

static_assert(std::endian::native == std::endian::little, "model files are little-endian");

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_floats(std::string& out, const VectorX<float>& v) {
  out.append(reinterpret_cast<const char*>(v.data()), static_cast<std::size_t>(v.size()) * sizeof(float));
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  VectorX<float> floats(std::size_t n) {
    if (n > data_.size() / sizeof(float)) throw ModelError(ModelError::Kind::Corrupt, "model file truncated");
    const auto raw = bytes(n * sizeof(float));
    VectorX<float> v(static_cast<Eigen::Index>(n));
    std::memcpy(v.data(), raw.data(), raw.size());
    return v;
  }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw ModelError(ModelError::Kind::Corrupt, "model file truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

template <typename Gates>
void fill_encoding(Encoding& enc, const Gates& layer_pairs) {
  for (std::size_t k = 0; k < layer_pairs.size() && k < enc.n_l(); ++k) {
    for (const auto& [a, b] : layer_pairs[k]) {
      if (a >= enc.n_q() || b >= enc.n_q()) {
        throw CircuitError("encode: physical qubit out of range for n_q = " + std::to_string(enc.n_q()));
      }
      enc.mark(k, a, b);
    }
  }
}

MatrixX<float> stack(const std::vector<TrainingSample>& data, const std::vector<std::size_t>& idx,
                     bool labels) {
  if (idx.empty()) return {};
  const auto rows = labels ? static_cast<Eigen::Index>(data[idx[0]].label.size())
                           : static_cast<Eigen::Index>(data[idx[0]].encoding.size());
  MatrixX<float> m(rows, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const auto& s = data[idx[c]];
    m.col(static_cast<Eigen::Index>(c)) =
        labels ? s.label.probabilities().cast<float>() : s.encoding.as_vector<float>();
  }
  return m;
}

// Training columns followed by their images under every non-trivial
// automorphism of g.
std::pair<MatrixX<float>, MatrixX<float>> augment(const MatrixX<float>& x, const MatrixX<float>& y,
                                                  const ArchGraph& g, std::size_t n_l) {
  const auto auts = automorphisms(g, 64);
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  const auto cols = x.cols();
  MatrixX<float> xa(x.rows(), cols * static_cast<Eigen::Index>(auts.size()));
  MatrixX<float> ya(y.rows(), xa.cols());
  xa.leftCols(cols) = x;
  ya.leftCols(cols) = y;
  for (std::size_t a = 1; a < auts.size(); ++a) {
    const auto& perm = auts[a];
    const auto edge_map = permute_edges(g, perm);
    const auto base = cols * static_cast<Eigen::Index>(a);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n_l); ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          const Eigen::Index from = (k * n + i) * n + j;
          const Eigen::Index to = (k * n + perm[static_cast<std::size_t>(i)]) * n + perm[static_cast<std::size_t>(j)];
          xa.block(to, base, 1, cols) = x.row(from);
        }
      }
    }
    for (Eigen::Index e = 0; e < y.rows(); ++e) {
      ya.block(edge_map[static_cast<std::size_t>(e)], base, 1, cols) = y.row(e);
    }
  }
  return {std::move(xa), std::move(ya)};
}

double batched_loss(const PolicyNet& net, const MatrixX<float>& x, const MatrixX<float>& y) {
  if (x.cols() == 0) return 0.0;
  constexpr Eigen::Index kChunk = 512;
  double total = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); c += kChunk) {
    const auto n = std::min(kChunk, x.cols() - c);
    const MatrixX<float> p = net.forward(x.middleCols(c, n));
    total += static_cast<double>((p - y.middleCols(c, n)).squaredNorm());
  }
  return total / static_cast<double>(y.size());
}

}  // namespace

std::string Encoding::to_hex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits_.size() + 7) / 8 * 2);
  for (std::size_t i = 0; i < bits_.size(); i += 8) {
    unsigned byte = 0;
    for (std::size_t b = 0; b < 8 && i + b < bits_.size(); ++b) byte |= (bits_[i + b] ? 1u : 0u) << b;
    out.push_back(kHex[byte >> 4]);
    out.push_back(kHex[byte & 0xf]);
  }
  return out;
}

Encoding Encoding::from_hex(const std::string& hex, std::size_t n_l, std::size_t n_q) {
  Encoding enc(n_l, n_q);
  if (hex.size() != (enc.size() + 7) / 8 * 2) {
    throw std::invalid_argument("encoding hex has wrong length for n_l=" + std::to_string(n_l) +
                                ", n_q=" + std::to_string(n_q));
  }
  const auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    throw std::invalid_argument("bad hex digit in encoding");
  };
  for (std::size_t i = 0; i < enc.size(); ++i) {
    const unsigned byte = nibble(hex[i / 8 * 2]) << 4 | nibble(hex[i / 8 * 2 + 1]);
    enc.bits_[i] = static_cast<std::uint8_t>((byte >> (i % 8)) & 1u);
  }
  return enc;
}

Encoding encode(const Circuit& c, const Mapping& tau, std::size_t n_l, std::size_t n_q) {
  Encoding enc(n_l, n_q);
  const auto ld = layers(c);
  std::vector<std::vector<std::pair<Qubit, Qubit>>> pairs;
  for (std::size_t k = 0; k < ld.depth() && k < n_l; ++k) {
    auto& layer = pairs.emplace_back();
    for (auto i : ld.layers[k]) {
      if (c[i].q0 >= tau.size() || c[i].q1 >= tau.size()) {
        throw CircuitError("encode: logical qubit outside the mapping");
      }
      layer.emplace_back(tau.physical(c[i].q0), tau.physical(c[i].q1));
    }
  }
  fill_encoding(enc, pairs);
  return enc;
}

Encoding permute(const Encoding& x, const std::vector<Qubit>& perm) {
  if (perm.size() != x.n_q()) throw std::invalid_argument("permute: permutation size differs from n_q");
  Encoding out(x.n_l(), x.n_q());
  for (std::size_t k = 0; k < x.n_l(); ++k) {
    for (Qubit i = 0; i < x.n_q(); ++i) {
      for (Qubit j = i + 1; j < x.n_q(); ++j) {
        if (x.at(k, i, j)) out.mark(k, perm[i], perm[j]);
      }
    }
  }
  return out;
}

Encoding encode(const RoutingState& state, std::size_t n_l) {
  Encoding enc(n_l, state.arch().num_nodes());
  fill_encoding(enc, state.leading_layers(n_l));
  return enc;
}

PolicyModel::PolicyModel(const ArchGraph& g, std::size_t n_l, std::vector<Eigen::Index> hidden,
                         std::uint64_t seed) {
  meta_.arch_name = g.name();
  meta_.edge_list_sha = edge_list_sha256(g);
  meta_.n_q = g.num_nodes();
  meta_.n_l = n_l;
  meta_.edges = g.edges();
  meta_.layer_dims.push_back(static_cast<Eigen::Index>(n_l * g.num_nodes() * g.num_nodes()));
  meta_.layer_dims.insert(meta_.layer_dims.end(), hidden.begin(), hidden.end());
  meta_.layer_dims.push_back(static_cast<Eigen::Index>(g.num_edges()));
  net_ = PolicyNet::initialized(meta_.layer_dims, seed);
}

PolicyModel::PolicyModel(ModelMetadata meta, PolicyNet net) : meta_(std::move(meta)), net_(std::move(net)) {
  if (net_.dims() != meta_.layer_dims) {
    throw ModelError(ModelError::Kind::Dimension, "network dims do not match model metadata");
  }
  if (static_cast<std::size_t>(net_.input_dim()) != meta_.n_l * meta_.n_q * meta_.n_q ||
      static_cast<std::size_t>(net_.output_dim()) != meta_.edges.size()) {
    throw ModelError(ModelError::Kind::Dimension, "network input/output dims inconsistent with n_l, n_q, |E|");
  }
}

void PolicyModel::check_compatible(const ArchGraph& g) const {
  if (meta_.arch_name != g.name() || meta_.edge_list_sha != edge_list_sha256(g) ||
      meta_.n_q != g.num_nodes()) {
    throw ModelError(ModelError::Kind::Metadata, "model was trained for '" + meta_.arch_name +
                                                     "', not for architecture '" + g.name() + "'");
  }
}

Eigen::VectorXd PolicyModel::recommend(const Encoding& x) const {
  if (x.n_l() != meta_.n_l || x.n_q() != meta_.n_q) {
    throw ModelError(ModelError::Kind::Dimension,
                     "encoding (n_l=" + std::to_string(x.n_l()) + ", n_q=" + std::to_string(x.n_q()) +
                         ") does not match model (n_l=" + std::to_string(meta_.n_l) +
                         ", n_q=" + std::to_string(meta_.n_q) + ")");
  }
  return net_.forward(x.as_vector<float>()).col(0).cast<double>();
}

Eigen::MatrixXd PolicyModel::recommend_batch(const std::vector<Encoding>& xs) const {
  MatrixX<float> x(net_.input_dim(), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].n_l() != meta_.n_l || xs[i].n_q() != meta_.n_q) {
      throw ModelError(ModelError::Kind::Dimension, "encoding does not match model");
    }
    x.col(static_cast<Eigen::Index>(i)) = xs[i].as_vector<float>();
  }
  return net_.forward(x).cast<double>();
}

RecommendationDistribution forward(const PolicyModel& m, const Encoding& x) {
  Eigen::VectorXd p = m.recommend(x);
  return RecommendationDistribution(p / p.sum());
}

void save(const PolicyModel& m, const std::filesystem::path& path) {
  const auto& meta = m.metadata();
  nlohmann::json header;
  header["format_version"] = meta.format_version;
  header["arch_name"] = meta.arch_name;
  header["edge_list_sha"] = meta.edge_list_sha;
  header["n_q"] = meta.n_q;
  header["n_l"] = meta.n_l;
  header["num_edges"] = meta.edges.size();
  header["edges"] = nlohmann::json::array();
  for (const auto& e : meta.edges) header["edges"].push_back({e.u, e.v});
  header["layer_dims"] = meta.layer_dims;
  header["feeding_algorithm"] = meta.feeding_algorithm;
  header["scalar"] = "f32";
  header["has_optimizer"] = m.optimizer.has_value();
  const std::string header_text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, meta.format_version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(header_text.size()));
  out += header_text;
  const auto& params = m.net().parameters();
  put<std::uint64_t>(out, static_cast<std::uint64_t>(params.size()));
  put_floats(out, params);
  if (m.optimizer) {
    const auto& opt = *m.optimizer;
    put<std::int64_t>(out, opt.step);
    put<float>(out, opt.lr);
    put<float>(out, opt.beta1);
    put<float>(out, opt.beta2);
    put<float>(out, opt.eps);
    const VectorX<float> zeros = VectorX<float>::Zero(params.size());
    put_floats(out, opt.m.size() == params.size() ? opt.m : zeros);
    put_floats(out, opt.v.size() == params.size() ? opt.v : zeros);
  }
  put<std::uint64_t>(out, fnv1a(out));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelError(ModelError::Kind::Io, "cannot write model file " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw ModelError(ModelError::Kind::Io, "write failed for " + path.string());
}

PolicyModel load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelError(ModelError::Kind::Io, "cannot open model file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string data = ss.str();

  if (data.size() < sizeof(kMagic) + 8 || std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ModelError(ModelError::Kind::Corrupt, path.string() + " is not a policy model file");
  }
  Reader hdr(std::string_view(data).substr(sizeof(kMagic)));
  const auto version = hdr.get<std::uint32_t>();
  if (version != ModelMetadata::kFormatVersion) {
    throw ModelError(ModelError::Kind::Version, "unsupported model format version " + std::to_string(version));
  }
  if (data.size() < sizeof(kMagic) + 16) throw ModelError(ModelError::Kind::Corrupt, "model file truncated");
  std::uint64_t stored_hash;
  std::memcpy(&stored_hash, data.data() + data.size() - 8, 8);
  const std::string body = data.substr(0, data.size() - 8);
  if (fnv1a(body) != stored_hash) {
    throw ModelError(ModelError::Kind::Corrupt, path.string() + " is truncated or corrupt (checksum mismatch)");
  }

  Reader r(std::string_view(body).substr(sizeof(kMagic) + 4));
  const auto header_len = r.get<std::uint32_t>();
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(r.bytes(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(ModelError::Kind::Corrupt, std::string("bad model header: ") + e.what());
  }

  ModelMetadata meta;
  try {
    meta.format_version = header.at("format_version").get<std::uint32_t>();
    meta.arch_name = header.at("arch_name").get<std::string>();
    meta.edge_list_sha = header.at("edge_list_sha").get<std::string>();
    meta.n_q = header.at("n_q").get<std::size_t>();
    meta.n_l = header.at("n_l").get<std::size_t>();
    for (const auto& e : header.at("edges")) meta.edges.push_back({e.at(0).get<Qubit>(), e.at(1).get<Qubit>()});
    meta.layer_dims = header.at("layer_dims").get<std::vector<Eigen::Index>>();
    meta.feeding_algorithm = header.value("feeding_algorithm", std::string());
    if (header.at("num_edges").get<std::size_t>() != meta.edges.size() || header.value("scalar", "") != "f32") {
      throw ModelError(ModelError::Kind::Corrupt, "inconsistent model header");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(ModelError::Kind::Corrupt, std::string("bad model header: ") + e.what());
  }

  PolicyNet net(meta.layer_dims);
  const auto count = r.get<std::uint64_t>();
  if (count != static_cast<std::uint64_t>(net.parameters().size())) {
    throw ModelError(ModelError::Kind::Corrupt, "parameter count does not match layer dims");
  }
  net.parameters() = r.floats(count);

  PolicyModel model(std::move(meta), std::move(net));
  if (header.value("has_optimizer", false)) {
    AdamState<float> opt;
    opt.step = r.get<std::int64_t>();
    opt.lr = r.get<float>();
    opt.beta1 = r.get<float>();
    opt.beta2 = r.get<float>();
    opt.eps = r.get<float>();
    opt.m = r.floats(count);
    opt.v = r.floats(count);
    model.optimizer = std::move(opt);
  }
  if (r.remaining() != 0) throw ModelError(ModelError::Kind::Corrupt, "trailing bytes in model file");
  return model;
}

PolicyModel load(const std::filesystem::path& path, const ArchGraph& g, std::size_t n_l) {
  auto m = load(path);
  m.check_compatible(g);
  if (n_l != 0 && m.n_l() != n_l) {
    throw ModelError(ModelError::Kind::Metadata, "model has n_l=" + std::to_string(m.n_l()) +
                                                     ", expected " + std::to_string(n_l));
  }
  return m;
}

TrainResult train(const std::vector<TrainingSample>& dataset, const ArchGraph& g, const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  const auto n_l = dataset.front().encoding.n_l();
  const auto n_q = dataset.front().encoding.n_q();
  for (const auto& s : dataset) {
    if (s.encoding.n_l() != n_l || s.encoding.n_q() != n_q || s.label.size() != g.num_edges()) {
      throw std::invalid_argument("train: samples have heterogeneous (n_l, n_q, |E|)");
    }
  }
  if (n_q != g.num_nodes()) throw std::invalid_argument("train: sample n_q does not match the architecture");
  if (cfg.batch_size == 0) throw std::invalid_argument("train: batch size must be positive");

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(derive_seed({cfg.seed, 0x5e1ffULL}));
  split_rng.shuffle(order.begin(), order.end());
  auto n_val = static_cast<std::size_t>(cfg.validation_fraction * static_cast<double>(dataset.size()));
  if (n_val >= dataset.size()) n_val = dataset.size() - 1;
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(train_idx.begin(), train_idx.end());

  MatrixX<float> x_train = stack(dataset, train_idx, false);
  MatrixX<float> y_train = stack(dataset, train_idx, true);
  if (cfg.augment_symmetries) std::tie(x_train, y_train) = augment(x_train, y_train, g, n_l);
  const MatrixX<float> x_val = stack(dataset, val_idx, false);
  const MatrixX<float> y_val = stack(dataset, val_idx, true);

  TrainResult result;
  result.model = PolicyModel(g, n_l, cfg.hidden, derive_seed({cfg.seed, 0x1417ULL}));
  PolicyModel& model = result.model;
  AdamState<float> opt;
  opt.lr = cfg.learning_rate;

  result.initial_train_loss = batched_loss(model.net(), x_train, y_train);
  result.initial_validation_loss = batched_loss(model.net(), x_val, y_val);

  const auto n = x_train.cols();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  PolicyNet::Tape tape;
  MatrixX<float> xb, yb;
  double best_loss = result.initial_validation_loss;
  VectorX<float> best_params = model.net().parameters();
  AdamState<float> best_opt = opt;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(derive_seed({cfg.seed, epoch}));
    rng.shuffle(perm.begin(), perm.end());
    for (Eigen::Index start = 0; start < n; start += static_cast<Eigen::Index>(cfg.batch_size)) {
      const auto b = std::min(static_cast<Eigen::Index>(cfg.batch_size), n - start);
      xb.resize(x_train.rows(), b);
      yb.resize(y_train.rows(), b);
      for (Eigen::Index c = 0; c < b; ++c) {
        xb.col(c) = x_train.col(perm[static_cast<std::size_t>(start + c)]);
        yb.col(c) = y_train.col(perm[static_cast<std::size_t>(start + c)]);
      }
      const MatrixX<float> probs = model.net().forward(xb, tape);
      const VectorX<float> grad = model.net().backward(tape, loss_gradient(probs, yb));
      adam_step<float>(model.net().parameters(), grad, opt);
    }
    result.train_loss.push_back(batched_loss(model.net(), x_train, y_train));
    if (!val_idx.empty()) result.validation_loss.push_back(batched_loss(model.net(), x_val, y_val));
    if (cfg.restore_best && !val_idx.empty()) {
      if (result.validation_loss.back() < best_loss) {
        best_loss = result.validation_loss.back();
        best_params = model.net().parameters();
        best_opt = opt;
        result.best_epoch = epoch + 1;
      }
    } else {
      result.best_epoch = epoch + 1;
    }
  }
  if (cfg.restore_best && !val_idx.empty()) {
    model.net().parameters() = best_params;
    opt = best_opt;
  }
  if (cfg.keep_optimizer_state) model.optimizer = std::move(opt);
  model.set_feeding_algorithm(cfg.feeding_algorithm);
  return result;
}

}  // namespace qroute
