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
#include <cstddef>
#include <span>

namespace qroute {

/// Probability per architecture edge, in canonical edge order.
class RecommendationDistribution {
 public:
  static constexpr double kTolerance = 1e-9;

  RecommendationDistribution() = default;
  /// Throws std::invalid_argument unless entries are >= 0 and sum to 1.
  explicit RecommendationDistribution(Eigen::VectorXd p);

  static RecommendationDistribution uniform(std::size_t n);
  /// p(e) proportional to 1 / (w(e) + 1).
  static RecommendationDistribution from_swap_counts(std::span<const std::size_t> w);
  /// p(e) proportional to non-negative scores; all-zero scores give uniform.
  static RecommendationDistribution from_scores(std::span<const double> scores);

  const Eigen::VectorXd& probabilities() const { return p_; }
  double operator[](std::size_t i) const { return p_[static_cast<Eigen::Index>(i)]; }
  std::size_t size() const { return static_cast<std::size_t>(p_.size()); }
  /// Lowest index among the maxima.
  std::size_t argmax() const;

 private:
  Eigen::VectorXd p_;
};

}  // namespace qroute
