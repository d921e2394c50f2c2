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

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/rng.hpp"

namespace qroute {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Column-wise softmax.
template <typename Derived>
MatrixX<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> out = (logits.rowwise() - logits.colwise().maxCoeff()).array().exp().matrix();
  out.array().rowwise() /= out.colwise().sum().array();
  return out;
}

/// Pulls dL/dp back through p = softmax(z): dL/dz = p * (g - <p, g>).
template <typename DerivedP, typename DerivedG>
MatrixX<typename DerivedP::Scalar> softmax_backward(const Eigen::MatrixBase<DerivedP>& probs,
                                                    const Eigen::MatrixBase<DerivedG>& grad) {
  const auto inner = probs.cwiseProduct(grad).colwise().sum();
  return probs.cwiseProduct(grad - inner.replicate(probs.rows(), 1));
}

/// Mean of squared coordinate differences over every entry.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar mse_loss(const Eigen::MatrixBase<DerivedA>& pred,
                                   const Eigen::MatrixBase<DerivedB>& label) {
  if (pred.rows() != label.rows() || pred.cols() != label.cols()) {
    throw std::invalid_argument("mse_loss: shape mismatch");
  }
  return (pred - label).squaredNorm() / static_cast<typename DerivedA::Scalar>(pred.size());
}

/// d mse_loss / d pred.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> loss_gradient(const Eigen::MatrixBase<DerivedA>& pred,
                                                 const Eigen::MatrixBase<DerivedB>& label) {
  if (pred.rows() != label.rows() || pred.cols() != label.cols()) {
    throw std::invalid_argument("loss_gradient: shape mismatch");
  }
  using Scalar = typename DerivedA::Scalar;
  return (Scalar(2) / static_cast<Scalar>(pred.size())) * (pred - label);
}

/// Fully connected network: ReLU hidden layers, softmax output. All
/// parameters live in one flat vector (per layer: weight column-major, then
/// bias) so optimizers and gradient checks see a single vector.
template <typename Scalar>
class Mlp {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  /// Activations kept by a forward pass for backpropagation.
  struct Tape {
    std::vector<Matrix> activations;  // [0] = input, [l] = output of hidden layer l-1
    Matrix probs;
  };

  Mlp() = default;

  /// dims = {input, hidden..., output}; parameters start at zero.
  explicit Mlp(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("Mlp needs at least input and output dims");
    Eigen::Index total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      if (dims_[l] <= 0 || dims_[l + 1] <= 0) throw std::invalid_argument("Mlp dims must be positive");
      offsets_.push_back(total);
      total += dims_[l + 1] * dims_[l] + dims_[l + 1];
    }
    params_ = Vector::Zero(total);
  }

  /// He-normal hidden layers, zero output layer: the initial policy is
  /// uniform for every input.
  static Mlp initialized(std::vector<Eigen::Index> dims, std::uint64_t seed) {
    Mlp net(std::move(dims));
    Rng rng(seed);
    for (std::size_t l = 0; l + 2 < net.dims_.size(); ++l) {
      const Scalar scale = std::sqrt(Scalar(2) / static_cast<Scalar>(net.dims_[l]));
      auto w = net.weight(l);
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = scale * static_cast<Scalar>(rng.normal());
      }
    }
    return net;
  }

  std::size_t num_layers() const { return offsets_.size(); }
  const std::vector<Eigen::Index>& dims() const { return dims_; }
  Eigen::Index input_dim() const { return dims_.front(); }
  Eigen::Index output_dim() const { return dims_.back(); }

  Vector& parameters() { return params_; }
  const Vector& parameters() const { return params_; }

  Eigen::Map<Matrix> weight(std::size_t l) {
    return {params_.data() + offsets_[l], dims_[l + 1], dims_[l]};
  }
  Eigen::Map<const Matrix> weight(std::size_t l) const {
    return {params_.data() + offsets_[l], dims_[l + 1], dims_[l]};
  }
  Eigen::Map<Vector> bias(std::size_t l) {
    return {params_.data() + offsets_[l] + dims_[l + 1] * dims_[l], dims_[l + 1]};
  }
  Eigen::Map<const Vector> bias(std::size_t l) const {
    return {params_.data() + offsets_[l] + dims_[l + 1] * dims_[l], dims_[l + 1]};
  }

  /// Probabilities for each column of x.
  Matrix forward(const Eigen::Ref<const Matrix>& x) const {
    check_input(x);
    Matrix a = x;
    for (std::size_t l = 0; l < num_layers(); ++l) {
      Matrix z = weight(l) * a;
      z.colwise() += bias(l);
      if (l + 1 < num_layers()) z = z.cwiseMax(Scalar(0));
      a = std::move(z);
    }
    return softmax(a);
  }

  Matrix forward(const Eigen::Ref<const Matrix>& x, Tape& tape) const {
    check_input(x);
    tape.activations.clear();
    tape.activations.push_back(x);
    Matrix z;
    for (std::size_t l = 0; l < num_layers(); ++l) {
      z = weight(l) * tape.activations.back();
      z.colwise() += bias(l);
      if (l + 1 < num_layers()) tape.activations.push_back(z.cwiseMax(Scalar(0)));
    }
    tape.probs = softmax(z);
    return tape.probs;
  }

  /// Flat parameter gradient given dL/dprobs for the batch in `tape`.
  Vector backward(const Tape& tape, const Eigen::Ref<const Matrix>& dprobs) const {
    Vector grad = Vector::Zero(params_.size());
    Matrix dz = softmax_backward(tape.probs, dprobs);
    for (std::size_t l = num_layers(); l-- > 0;) {
      const Matrix& a = tape.activations[l];
      Eigen::Map<Matrix>(grad.data() + offsets_[l], dims_[l + 1], dims_[l]).noalias() = dz * a.transpose();
      Eigen::Map<Vector>(grad.data() + offsets_[l] + dims_[l + 1] * dims_[l], dims_[l + 1]) =
          dz.rowwise().sum();
      if (l > 0) {
        Matrix da = weight(l).transpose() * dz;
        dz = da.cwiseProduct((a.array() > Scalar(0)).matrix().template cast<Scalar>());
      }
    }
    return grad;
  }

  template <typename T>
  Mlp<T> cast() const {
    Mlp<T> out(dims_);
    out.parameters() = params_.template cast<T>();
    return out;
  }

 private:
  void check_input(const Eigen::Ref<const Matrix>& x) const {
    if (dims_.empty() || x.rows() != input_dim()) {
      throw std::invalid_argument("Mlp input has " + std::to_string(x.rows()) + " rows, expected " +
                                  std::to_string(dims_.empty() ? 0 : input_dim()));
    }
  }

  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> offsets_;
  Vector params_;
};

/// Mean MSE over a batch and its flat parameter gradient.
template <typename Scalar>
std::pair<Scalar, VectorX<Scalar>> loss_and_gradient(const Mlp<Scalar>& net,
                                                     const Eigen::Ref<const MatrixX<Scalar>>& x,
                                                     const Eigen::Ref<const MatrixX<Scalar>>& labels) {
  typename Mlp<Scalar>::Tape tape;
  const auto probs = net.forward(x, tape);
  return {mse_loss(probs, labels), net.backward(tape, loss_gradient(probs, labels))};
}

/// Adam optimizer state over a flat parameter vector.
template <typename Scalar>
struct AdamState {
  Scalar lr = Scalar(1e-3);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);
  std::int64_t step = 0;
  VectorX<Scalar> m;
  VectorX<Scalar> v;
};

/// One bias-corrected Adam update. Moments are created on the first call.
template <typename Scalar>
void adam_step(Eigen::Ref<VectorX<Scalar>> params, const Eigen::Ref<const VectorX<Scalar>>& grads,
               AdamState<Scalar>& state) {
  if (grads.size() != params.size()) throw std::invalid_argument("adam_step: gradient shape mismatch");
  if (state.m.size() == 0 && state.step == 0) {
    state.m = VectorX<Scalar>::Zero(params.size());
    state.v = VectorX<Scalar>::Zero(params.size());
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: optimizer state shape mismatch");
  }
  ++state.step;
  state.m = state.beta1 * state.m + (Scalar(1) - state.beta1) * grads;
  state.v = state.beta2 * state.v + (Scalar(1) - state.beta2) * grads.cwiseAbs2();
  const auto t = static_cast<Scalar>(state.step);
  const Scalar c1 = Scalar(1) - std::pow(state.beta1, t);
  const Scalar c2 = Scalar(1) - std::pow(state.beta2, t);
  params.array() -= state.lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + state.eps);
}

}  // namespace qroute
