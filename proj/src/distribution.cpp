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

#include "qroute/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace qroute {

RecommendationDistribution::RecommendationDistribution(Eigen::VectorXd p) : p_(std::move(p)) {
  if (p_.size() == 0) throw std::invalid_argument("empty recommendation distribution");
  if ((p_.array() < 0.0).any() || !p_.allFinite()) {
    throw std::invalid_argument("recommendation distribution has a negative or non-finite entry");
  }
  if (std::abs(p_.sum() - 1.0) > kTolerance) {
    throw std::invalid_argument("recommendation distribution sums to " + std::to_string(p_.sum()));
  }
}

RecommendationDistribution RecommendationDistribution::uniform(std::size_t n) {
  return RecommendationDistribution(
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

RecommendationDistribution RecommendationDistribution::from_swap_counts(std::span<const std::size_t> w) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) p[static_cast<Eigen::Index>(i)] = 1.0 / (static_cast<double>(w[i]) + 1.0);
  return RecommendationDistribution(p / p.sum());
}

RecommendationDistribution RecommendationDistribution::from_scores(std::span<const double> scores) {
  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(scores.data(), static_cast<Eigen::Index>(scores.size()));
  if ((p.array() < 0.0).any()) throw std::invalid_argument("negative score");
  const double total = p.sum();
  if (total <= 0.0) return uniform(scores.size());
  return RecommendationDistribution(p / total);
}

std::size_t RecommendationDistribution::argmax() const {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < p_.size(); ++i) {
    if (p_[i] > p_[best]) best = i;
  }
  return static_cast<std::size_t>(best);
}

}  // namespace qroute
