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
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qroute/mcts.hpp"
#include "qroute/policy.hpp"
#include "qroute/sahs.hpp"

namespace qroute {

/// (n_base - n_test) / n_base. Throws std::invalid_argument if n_base == 0.
double gate_count_reduction(double n_base, double n_test);
/// Input gates routed per second; 0 gates give 0. Throws
/// std::invalid_argument if elapsed <= 0 and gates > 0.
double time_efficiency(std::size_t gate_count, double elapsed_s);

enum class RouterKind { Base, AnnQct, BaseAnn, Sahs, SahsAnn, Mcts, MctsAnn };

std::string router_name(RouterKind k);
/// Accepts base, ann-qct, base-ann, sahs, sahs-ann, mcts, mcts-ann.
RouterKind parse_router(const std::string& name);
bool needs_model(RouterKind k);
bool is_stochastic(RouterKind k);

struct RouterSpec {
  RouterKind kind = RouterKind::Base;
  SahsParams sahs;
  MctsParams mcts;
  double pruning_ratio = 0.0;
  std::shared_ptr<const PolicyModel> model;
  std::string label;  // defaults to the router name

  std::string id() const { return label.empty() ? router_name(kind) : label; }
};

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks that the spec carries a model compatible with g when it needs one.
/// Throws ModelError(Metadata) or std::invalid_argument.
void validate_router(const RouterSpec& spec, const ArchGraph& g);

/// One routing run; `seed` overrides the MCTS seed for stochastic routers.
RoutingResult run_router(const RouterSpec& spec, const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                         std::uint64_t seed);

struct BenchRecord {
  std::size_t circuit = 0;
  std::string circuit_id;
  std::string router;
  std::size_t input_gates = 0;
  std::size_t swap_count = 0;
  std::size_t cnot_overhead = 0;
  double elapsed_s = 0.0;  // mean over repetitions
  std::uint64_t seed = 0;  // seed of the best repetition
};

struct BenchConfig {
  explicit BenchConfig(ArchGraph g) : arch(std::move(g)) {}

  ArchGraph arch;
  std::vector<RouterSpec> routers;
  std::vector<Circuit> circuits;
  std::vector<std::string> circuit_ids;  // optional, parallel to circuits
  std::uint64_t seed = 0;
  std::size_t repetitions = 5;  // best-of-k for stochastic routers
  std::size_t workers = 1;
  std::string baseline;  // router id for reductions; defaults to the first router
};

struct RouterSummary {
  std::string router;
  std::size_t circuits = 0;
  std::size_t total_input_gates = 0;
  std::size_t total_swaps = 0;
  std::size_t total_cnot_overhead = 0;
  double total_elapsed_s = 0.0;
  double reduction_vs_baseline = 0.0;
  double gates_per_second = 0.0;
};

struct CompareReport {
  std::string arch_name;
  std::string baseline;
  std::vector<BenchRecord> records;  // circuit-major, routers in config order
  std::vector<RouterSummary> summary;
};

/// Routes every (router, circuit) cell, verifying each output. Throws
/// std::invalid_argument("no inputs") on an empty circuit list and
/// VerificationError if any routed circuit fails verify().
CompareReport run_compare(const BenchConfig& cfg);

/// Totals and reductions recomputed from records alone.
std::vector<RouterSummary> summarize(const std::vector<BenchRecord>& records, const std::string& baseline);

std::string records_csv(const CompareReport& r);
std::string summary_csv(const CompareReport& r);
std::string summary_table(const CompareReport& r);
/// Bar chart of total CNOT overhead per router.
std::string overhead_svg(const CompareReport& r);
/// Histogram of per-circuit reductions of `router` against the baseline.
std::string improvement_histogram_svg(const CompareReport& r, const std::string& router, double bucket = 0.05);
/// records.csv, summary.csv, summary.txt, overhead.svg and one histogram per
/// non-baseline router.
void write_report(const CompareReport& r, const std::filesystem::path& dir);

struct TimingPoint {
  std::string arch;
  std::size_t num_nodes = 0;
  double seconds_per_label = 0.0;
};

struct TimingReport {
  std::vector<TimingPoint> points;
  double exponent = 0.0;  // least-squares slope of log(time) against log(|V|)
};

/// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Times label_sahs over n_samples 3-layer circuits per architecture.
/// Throws std::invalid_argument with fewer than 3 architectures.
TimingReport labelgen_timing(const std::vector<ArchGraph>& archs, std::size_t n_samples, std::uint64_t seed,
                             const SahsParams& params = {});

}  // namespace qroute
