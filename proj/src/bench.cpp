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

#include "qroute/bench.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "qroute/datagen.hpp"
#include "qroute/rng.hpp"

namespace qroute {

double gate_count_reduction(double n_base, double n_test) {
  if (n_base == 0.0) throw std::invalid_argument("gate_count_reduction: baseline count is zero");
  return (n_base - n_test) / n_base;
}

double time_efficiency(std::size_t gate_count, double elapsed_s) {
  if (gate_count == 0) return 0.0;
  if (!(elapsed_s > 0.0)) throw std::invalid_argument("time_efficiency: elapsed time must be positive");
  return static_cast<double>(gate_count) / elapsed_s;
}

namespace {

struct RouterInfo {
  RouterKind kind;
  const char* name;
};

constexpr RouterInfo kRouters[] = {
    {RouterKind::Base, "base"}, {RouterKind::AnnQct, "ann-qct"}, {RouterKind::BaseAnn, "base-ann"},
    {RouterKind::Sahs, "sahs"}, {RouterKind::SahsAnn, "sahs-ann"}, {RouterKind::Mcts, "mcts"},
    {RouterKind::MctsAnn, "mcts-ann"},
};

std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::string router_name(RouterKind k) {
  for (const auto& r : kRouters) {
    if (r.kind == k) return r.name;
  }
  return "?";
}

RouterKind parse_router(const std::string& name) {
  for (const auto& r : kRouters) {
    if (name == r.name) return r.kind;
  }
  throw std::invalid_argument("unknown router '" + name + "'");
}

bool needs_model(RouterKind k) {
  return k == RouterKind::AnnQct || k == RouterKind::BaseAnn || k == RouterKind::SahsAnn || k == RouterKind::MctsAnn;
}

bool is_stochastic(RouterKind k) { return k == RouterKind::Mcts || k == RouterKind::MctsAnn; }

void validate_router(const RouterSpec& spec, const ArchGraph& g) {
  if (!needs_model(spec.kind)) return;
  if (!spec.model) throw std::invalid_argument("router '" + spec.id() + "' needs a model");
  spec.model->check_compatible(g);
  if (!(spec.pruning_ratio >= 0.0 && spec.pruning_ratio < 1.0)) {
    throw std::invalid_argument("pruning ratio must lie in [0, 1)");
  }
}

RoutingResult run_router(const RouterSpec& spec, const Circuit& lc, const ArchGraph& g, const Mapping& initial,
                         std::uint64_t seed) {
  MctsParams mcts = spec.mcts;
  mcts.seed = seed;
  switch (spec.kind) {
    case RouterKind::Base: return base_route(lc, g, initial);
    case RouterKind::AnnQct: return ann_qct_route(lc, g, initial, *spec.model);
    case RouterKind::BaseAnn: return base_ann_route(lc, g, initial, *spec.model);
    case RouterKind::Sahs: return sahs_route(lc, g, initial, spec.sahs);
    case RouterKind::SahsAnn: return sahs_ann_route(lc, g, initial, spec.sahs, *spec.model, spec.pruning_ratio);
    case RouterKind::Mcts: return mcts_route(lc, g, initial, mcts);
    case RouterKind::MctsAnn: return mcts_ann_route(lc, g, initial, mcts, *spec.model, spec.pruning_ratio);
  }
  throw std::logic_error("unreachable router kind");
}

CompareReport run_compare(const BenchConfig& cfg) {
  if (cfg.circuits.empty()) throw std::invalid_argument("no inputs");
  if (cfg.routers.empty()) throw std::invalid_argument("no routers");
  for (const auto& r : cfg.routers) validate_router(r, cfg.arch);
  const auto& g = cfg.arch;
  const Mapping naive = Mapping::naive(g.num_nodes());

  const std::size_t nr = cfg.routers.size();
  const std::size_t cells = cfg.circuits.size() * nr;
  std::vector<std::optional<BenchRecord>> out(cells);
  std::vector<std::string> errors(cells);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t cell; (cell = next.fetch_add(1)) < cells;) {
      const std::size_t ci = cell / nr;
      const RouterSpec& spec = cfg.routers[cell % nr];
      const Circuit& lc = cfg.circuits[ci];
      const std::size_t reps = is_stochastic(spec.kind) ? std::max<std::size_t>(cfg.repetitions, 1) : 1;
      BenchRecord rec;
      rec.circuit = ci;
      rec.circuit_id = ci < cfg.circuit_ids.size() ? cfg.circuit_ids[ci] : std::to_string(ci);
      rec.router = spec.id();
      rec.input_gates = lc.size();
      double elapsed = 0.0;
      try {
        for (std::size_t k = 0; k < reps; ++k) {
          const std::uint64_t seed = derive_seed({cfg.seed, ci, k});
          const auto res = run_router(spec, lc, g, naive, seed);
          if (const auto v = verify(res.physical_circuit, lc, g, naive); !v) {
            throw VerificationError("router " + spec.id() + " on circuit " + rec.circuit_id + ": " + v.reason);
          }
          elapsed += res.elapsed_s;
          if (k == 0 || res.swap_count < rec.swap_count) {
            rec.swap_count = res.swap_count;
            rec.seed = seed;
          }
        }
        rec.cnot_overhead = 3 * rec.swap_count;
        rec.elapsed_s = elapsed / static_cast<double>(reps);
        out[cell] = rec;
      } catch (const std::exception& e) {
        errors[cell] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(std::max<std::size_t>(cfg.workers, 1), cells); ++w) pool.emplace_back(work);
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!out[cell]) throw VerificationError(errors[cell]);
  }

  CompareReport report;
  report.arch_name = g.name();
  report.baseline = cfg.baseline.empty() ? cfg.routers.front().id() : cfg.baseline;
  for (auto& r : out) report.records.push_back(std::move(*r));
  report.summary = summarize(report.records, report.baseline);
  return report;
}

std::vector<RouterSummary> summarize(const std::vector<BenchRecord>& records, const std::string& baseline) {
  std::vector<RouterSummary> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& r : records) {
    auto [it, fresh] = slot.try_emplace(r.router, out.size());
    if (fresh) out.push_back(RouterSummary{.router = r.router});
    auto& s = out[it->second];
    ++s.circuits;
    s.total_input_gates += r.input_gates;
    s.total_swaps += r.swap_count;
    s.total_cnot_overhead += r.cnot_overhead;
    s.total_elapsed_s += r.elapsed_s;
  }
  const auto base = slot.find(baseline);
  for (auto& s : out) {
    if (base != slot.end() && out[base->second].total_cnot_overhead > 0) {
      s.reduction_vs_baseline = gate_count_reduction(static_cast<double>(out[base->second].total_cnot_overhead),
                                                     static_cast<double>(s.total_cnot_overhead));
    }
    s.gates_per_second = s.total_elapsed_s > 0.0 ? time_efficiency(s.total_input_gates, s.total_elapsed_s) : 0.0;
  }
  return out;
}

std::string records_csv(const CompareReport& r) {
  std::ostringstream os;
  os << "circuit,circuit_id,router,input_gates,swap_count,cnot_overhead,elapsed_s,seed\n";
  for (const auto& x : r.records) {
    os << x.circuit << ',' << x.circuit_id << ',' << x.router << ',' << x.input_gates << ',' << x.swap_count << ','
       << x.cnot_overhead << ',' << fmt(x.elapsed_s) << ',' << x.seed << '\n';
  }
  return os.str();
}

std::string summary_csv(const CompareReport& r) {
  std::ostringstream os;
  os << "router,circuits,total_input_gates,total_swaps,total_cnot_overhead,reduction_vs_" << r.baseline
     << ",gates_per_second\n";
  for (const auto& s : r.summary) {
    os << s.router << ',' << s.circuits << ',' << s.total_input_gates << ',' << s.total_swaps << ','
       << s.total_cnot_overhead << ',' << fmt(s.reduction_vs_baseline) << ',' << fmt(s.gates_per_second, 2) << '\n';
  }
  return os.str();
}

std::string summary_table(const CompareReport& r) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %8s %10s %14s %10s %12s\n", "router", "circuits", "swaps", "cnot_overhead",
                "reduction", "gates/s");
  os << "architecture: " << r.arch_name << "  baseline: " << r.baseline << '\n' << line;
  for (const auto& s : r.summary) {
    std::snprintf(line, sizeof line, "%-12s %8zu %10zu %14zu %9.2f%% %12.1f\n", s.router.c_str(), s.circuits,
                  s.total_swaps, s.total_cnot_overhead, 100.0 * s.reduction_vs_baseline, s.gates_per_second);
    os << line;
  }
  return os.str();
}

namespace {

std::string bar_chart(const std::string& title, const std::vector<std::pair<std::string, double>>& bars) {
  const double width = 640, height = 360, left = 60, bottom = 300, top = 40;
  double peak = 0.0;
  for (const auto& b : bars) peak = std::max(peak, b.second);
  if (peak <= 0.0) peak = 1.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n"
     << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << width - 20 << "\" y2=\"" << bottom
     << "\" stroke=\"black\"/>\n";
  const double slot = (width - left - 20) / static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = (bottom - top) * bars[i].second / peak;
    const double x = left + slot * static_cast<double>(i) + slot * 0.15;
    os << "<rect x=\"" << fmt(x, 1) << "\" y=\"" << fmt(bottom - h, 1) << "\" width=\"" << fmt(slot * 0.7, 1)
       << "\" height=\"" << fmt(h, 1) << "\" fill=\"#4472c4\"/>\n"
       << "<text x=\"" << fmt(x + slot * 0.35, 1) << "\" y=\"" << bottom + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << bars[i].first << "</text>\n"
       << "<text x=\"" << fmt(x + slot * 0.35, 1) << "\" y=\"" << fmt(bottom - h - 4, 1)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << bars[i].second << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string overhead_svg(const CompareReport& r) {
  std::vector<std::pair<std::string, double>> bars;
  for (const auto& s : r.summary) bars.emplace_back(s.router, static_cast<double>(s.total_cnot_overhead));
  return bar_chart("CNOT overhead on " + r.arch_name, bars);
}

std::string improvement_histogram_svg(const CompareReport& r, const std::string& router, double bucket) {
  std::map<std::size_t, const BenchRecord*> base;
  for (const auto& x : r.records) {
    if (x.router == r.baseline) base[x.circuit] = &x;
  }
  std::map<long, double> counts;
  for (const auto& x : r.records) {
    if (x.router != router) continue;
    const auto it = base.find(x.circuit);
    if (it == base.end() || it->second->cnot_overhead == 0) continue;
    const double red = gate_count_reduction(static_cast<double>(it->second->cnot_overhead),
                                            static_cast<double>(x.cnot_overhead));
    counts[static_cast<long>(std::floor(red / bucket))] += 1.0;
  }
  std::vector<std::pair<std::string, double>> bars;
  for (const auto& [k, n] : counts) bars.emplace_back(fmt(100.0 * bucket * static_cast<double>(k), 0) + "%", n);
  return bar_chart("Per-circuit reduction of " + router + " vs " + r.baseline, bars);
}

void write_report(const CompareReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << text;
  };
  put("records.csv", records_csv(r));
  put("summary.csv", summary_csv(r));
  put("summary.txt", summary_table(r));
  put("overhead.svg", overhead_svg(r));
  for (const auto& s : r.summary) {
    if (s.router != r.baseline) put("improvement_" + s.router + ".svg", improvement_histogram_svg(r, s.router));
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs >= 2 paired points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) throw std::invalid_argument("loglog_slope needs positive values");
    a(i, 0) = std::log(x[i]);
    a(i, 1) = 1.0;
    b[i] = std::log(y[i]);
  }
  return a.colPivHouseholderQr().solve(b)[0];
}

TimingReport labelgen_timing(const std::vector<ArchGraph>& archs, std::size_t n_samples, std::uint64_t seed,
                             const SahsParams& params) {
  if (archs.size() < 3) throw std::invalid_argument("labelgen_timing needs at least 3 architectures");
  if (n_samples < 1) throw std::invalid_argument("labelgen_timing needs n_samples >= 1");
  TimingReport report;
  std::vector<double> xs, ys;
  for (const auto& g : archs) {
    const auto circuits = gen_training_circuits(g.num_nodes(), 3, n_samples, derive_seed({seed, g.num_nodes()}));
    const auto start = std::chrono::steady_clock::now();
    for (const auto& c : circuits) (void)label_sahs(c, g, params);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.points.push_back({g.name(), g.num_nodes(), secs / static_cast<double>(n_samples)});
    xs.push_back(static_cast<double>(g.num_nodes()));
    ys.push_back(std::max(secs / static_cast<double>(n_samples), 1e-12));
  }
  report.exponent = loglog_slope(xs, ys);
  return report;
}

}  // namespace qroute
