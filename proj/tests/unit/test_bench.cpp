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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "qroute/bench.hpp"

using namespace qroute;
using testing::constant_model;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

BenchConfig small_config() {
  BenchConfig cfg(build_grid(3, 3));
  auto model = std::make_shared<const PolicyModel>(constant_model(cfg.arch, 3, {{1, 1.0f}, {4, 0.5f}}));
  for (const char* name : {"base", "sahs", "mcts", "ann-qct", "sahs-ann", "mcts-ann", "base-ann"}) {
    RouterSpec s;
    s.kind = parse_router(name);
    if (needs_model(s.kind)) s.model = model;
    s.pruning_ratio = 0.5;
    cfg.routers.push_back(s);
  }
  for (std::uint64_t i = 0; i < 4; ++i) cfg.circuits.push_back(random_circuit(9, 25, i));
  cfg.seed = 3;
  cfg.repetitions = 2;
  return cfg;
}

// Seconds for label_sahs over n three-layer circuits on g, best of two.
double labelling_seconds(const ArchGraph& g, std::size_t n) {
  double best = 1e9;
  for (int rep = 0; rep < 2; ++rep) {
    const auto r = labelgen_timing({g, g, g}, n, 1);
    best = std::min(best, r.points[0].seconds_per_label * static_cast<double>(n));
  }
  return best;
}

}  // namespace

TEST_CASE("gate count reduction and time efficiency") {
  CHECK(gate_count_reduction(8388, 6030) == doctest::Approx(0.2811).epsilon(1e-3));
  CHECK(gate_count_reduction(6396, 4896) == doctest::Approx(0.2345).epsilon(1e-3));
  CHECK(gate_count_reduction(77, 77) == 0.0);
  CHECK(gate_count_reduction(10, 12) < 0.0);
  CHECK_THROWS_AS(gate_count_reduction(0, 3), std::invalid_argument);

  CHECK(time_efficiency(200, 2.5) == doctest::Approx(80.0));
  CHECK(time_efficiency(0, 1.0) == 0.0);
  CHECK_THROWS_AS(time_efficiency(200, 0.0), std::invalid_argument);
}

TEST_CASE("router names") {
  for (const char* name : {"base", "ann-qct", "base-ann", "sahs", "sahs-ann", "mcts", "mcts-ann"}) {
    CHECK(router_name(parse_router(name)) == name);
  }
  CHECK_THROWS(parse_router("astar"));
  CHECK(needs_model(RouterKind::AnnQct));
  CHECK_FALSE(needs_model(RouterKind::Sahs));
  CHECK(is_stochastic(RouterKind::MctsAnn));
  CHECK_FALSE(is_stochastic(RouterKind::Base));
}

TEST_CASE("router validation rejects missing or foreign models") {
  const ArchGraph g = build_grid(4, 4);
  RouterSpec s;
  s.kind = RouterKind::SahsAnn;
  CHECK_THROWS(validate_router(s, g));
  s.model = std::make_shared<const PolicyModel>(constant_model(resolve_topology("tokyo"), 3));
  CHECK_THROWS_AS(validate_router(s, g), ModelError);
  s.model = std::make_shared<const PolicyModel>(constant_model(g, 3));
  CHECK_NOTHROW(validate_router(s, g));
  s.pruning_ratio = 1.0;
  CHECK_THROWS(validate_router(s, g));

  BenchConfig cfg(g);
  RouterSpec bad;
  bad.kind = RouterKind::AnnQct;
  cfg.routers.push_back(bad);
  cfg.circuits.push_back(random_circuit(16, 10, 1));
  CHECK_THROWS(run_compare(cfg));
}

TEST_CASE("run_compare") {
  BenchConfig empty(build_grid(2, 2));
  empty.routers.push_back(RouterSpec{});
  try {
    run_compare(empty);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "no inputs");
  }

  const BenchConfig cfg = small_config();
  const CompareReport a = run_compare(cfg);
  CHECK(a.baseline == "base");
  REQUIRE(a.records.size() == cfg.routers.size() * cfg.circuits.size());
  for (const auto& rec : a.records) CHECK(rec.cnot_overhead == 3 * rec.swap_count);

  // Circuit-major, routers in configuration order.
  CHECK(a.records[0].router == "base");
  CHECK(a.records[1].router == "sahs");
  CHECK(a.records[cfg.routers.size()].circuit == 1);

  // Reproducible apart from timings.
  CompareReport b = run_compare(cfg);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].swap_count == b.records[i].swap_count);
    CHECK(a.records[i].seed == b.records[i].seed);
  }

  // The same numbers come back from the records CSV.
  const auto rows = parse_csv(records_csv(a));
  REQUIRE(rows.size() == a.records.size() + 1);
  std::vector<BenchRecord> reread;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    BenchRecord r;
    r.circuit = std::stoul(rows[i][0]);
    r.circuit_id = rows[i][1];
    r.router = rows[i][2];
    r.input_gates = std::stoul(rows[i][3]);
    r.swap_count = std::stoul(rows[i][4]);
    r.cnot_overhead = std::stoul(rows[i][5]);
    r.elapsed_s = std::stod(rows[i][6]);
    r.seed = std::stoull(rows[i][7]);
    reread.push_back(r);
  }
  const auto again = summarize(reread, a.baseline);
  REQUIRE(again.size() == a.summary.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].router == a.summary[i].router);
    CHECK(again[i].total_swaps == a.summary[i].total_swaps);
    CHECK(again[i].total_cnot_overhead == a.summary[i].total_cnot_overhead);
    CHECK(again[i].reduction_vs_baseline == a.summary[i].reduction_vs_baseline);
  }
  const auto summary_rows = parse_csv(summary_csv(a));
  CHECK(summary_rows.size() == a.summary.size() + 1);
  CHECK(std::stoul(summary_rows[1][3]) == a.summary[0].total_swaps);

  // Workers do not change the outcome.
  BenchConfig parallel = cfg;
  parallel.workers = 3;
  const CompareReport p = run_compare(parallel);
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].swap_count == p.records[i].swap_count);

  // Best-of-k is no worse than a single repetition.
  BenchConfig once = cfg;
  once.repetitions = 1;
  const CompareReport o = run_compare(once);
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].swap_count <= o.records[i].swap_count);
}

TEST_CASE("reports") {
  namespace fs = std::filesystem;
  const CompareReport r = run_compare(small_config());
  const std::string svg = overhead_svg(r);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("sahs-ann") != std::string::npos);
  CHECK(improvement_histogram_svg(r, "sahs").find("<svg") != std::string::npos);
  CHECK(summary_table(r).find("mcts-ann") != std::string::npos);

  const fs::path dir = fs::temp_directory_path() / "qroute_report_test";
  fs::remove_all(dir);
  write_report(r, dir);
  for (const char* f : {"records.csv", "summary.csv", "summary.txt", "overhead.svg", "improvement_sahs.svg"}) {
    CHECK(fs::exists(dir / f));
  }
  fs::remove_all(dir);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 4.4));
  CHECK(loglog_slope(x, y) == doctest::Approx(4.4));
  CHECK_THROWS(loglog_slope({1.0}, {1.0}));
}

TEST_CASE("labelgen timing") {
  CHECK_THROWS_AS(labelgen_timing({build_grid(2, 2)}, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(labelgen_timing({build_grid(2, 2), build_grid(3, 3)}, 5, 0), std::invalid_argument);

  const auto r = labelgen_timing({build_grid(2, 2), build_grid(3, 3), build_grid(4, 4)}, 30, 2);
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[2].num_nodes == 16);
  CHECK(r.exponent >= 3.0);
  CHECK(r.exponent <= 5.5);

  const ArchGraph g = build_grid(4, 4);
  const double t1 = labelling_seconds(g, 20);
  const double t2 = labelling_seconds(g, 40);
  CHECK(t2 / t1 >= 2.0 * 0.75);
  CHECK(t2 / t1 <= 2.0 * 1.25);
}
