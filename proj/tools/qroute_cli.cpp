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

// qroute command-line front end.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 verification failure,
// 3 model/dataset/architecture incompatibility.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qroute/arch.hpp"
#include "qroute/bench.hpp"
#include "qroute/datagen.hpp"
#include "qroute/policy.hpp"
#include "qroute/qasm.hpp"
#include "qroute/rng.hpp"
#include "qroute/route.hpp"

namespace fs = std::filesystem;
using namespace qroute;

namespace {

enum Exit { kOk = 0, kUsage = 1, kVerification = 2, kIncompatible = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Incompatible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts TOML/INI through CLI11 and JSON objects whose nested objects name
// subcommand sections, e.g. {"compare": {"routers": ["base", "sahs"]}}.
class JsonOrTomlConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream buf;
    buf << input.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigTOML::from_config(again);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config", e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto sub = parents;
        sub.push_back(key);
        out.push_back({sub, "++", {}});
        flatten(value, sub, out);
        out.push_back({sub, "--", {}});
        continue;
      }
      CLI::ConfigItem item{parents, key, {}};
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }
};

ArchGraph load_arch(const std::string& spec) {
  try {
    return resolve_topology(spec);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// .qasm files of a directory in name order, or the single file given.
std::vector<fs::path> qasm_inputs(const fs::path& p) {
  if (!fs::exists(p)) throw UsageError("no such file or directory: " + p.string());
  if (!fs::is_directory(p)) return {p};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(p)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct RouterOptions {
  std::string model_path;
  std::size_t depth = 2;
  std::size_t lookahead_layers = 2;
  double lookahead_decay = 0.5;
  double cost_weight = 0.3;
  double pruning_ratio = 0.0;
  std::size_t n_bp = 20;
  std::size_t sim_depth = 20;
  std::size_t runs = 1;
  double exploration_c = 1.4142135623730951;

  void add_to(CLI::App* app) {
    app->add_option("--model", model_path, "Trained policy model file");
    app->add_option("--depth", depth, "SAHS search depth")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--lookahead-layers", lookahead_layers, "SAHS look-ahead layers")->capture_default_str();
    app->add_option("--lookahead-decay", lookahead_decay, "SAHS look-ahead decay")->capture_default_str();
    app->add_option("--cost-weight", cost_weight, "SAHS distance-cost weight")->capture_default_str();
    app->add_option("--pruning-ratio", pruning_ratio, "Fraction of swaps pruned by the model")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.999999));
    app->add_option("--n-bp", n_bp, "MCTS iterations per decision")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--sim-depth", sim_depth, "MCTS rollout length")->capture_default_str();
    app->add_option("--exploration", exploration_c, "MCTS UCT exploration constant")->capture_default_str();
    app->add_option("--runs", runs, "MCTS independent runs per routing (best kept)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  RouterSpec spec(RouterKind kind, const ArchGraph& g, std::uint64_t seed,
                  std::shared_ptr<const PolicyModel>& model_cache) const {
    RouterSpec s;
    s.kind = kind;
    s.sahs.depth = depth;
    s.sahs.lookahead_layers = lookahead_layers;
    s.sahs.lookahead_decay = lookahead_decay;
    s.sahs.cost_weight = cost_weight;
    s.mcts.n_bp = n_bp;
    s.mcts.sim_depth = sim_depth;
    s.mcts.exploration_c = exploration_c;
    s.mcts.runs = runs;
    s.mcts.seed = seed;
    s.pruning_ratio = pruning_ratio;
    if (needs_model(kind)) {
      if (model_path.empty()) throw UsageError("router '" + router_name(kind) + "' needs --model");
      if (!model_cache) model_cache = std::make_shared<const PolicyModel>(load(model_path, g));
      s.model = model_cache;
    }
    validate_router(s, g);
    return s;
  }
};

RouterKind router_kind(const std::string& name) {
  try {
    return parse_router(name);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- route

struct RouteCmd {
  std::string arch;
  std::string input;
  std::string output;
  std::string router = "sahs";
  std::uint64_t seed = 0;
  RouterOptions opts;

  void add_to(CLI::App& parent) {
    auto* app = parent.add_subcommand("route", "Route one OpenQASM circuit");
    app->add_option("--arch", arch, "grid:RxC, tokyo, guadalupe, sycamore or a topology JSON file")->required();
    app->add_option("-i,--input", input, "Input OpenQASM 2.0 file")->required()->check(CLI::ExistingFile);
    app->add_option("-o,--output", output, "Routed OpenQASM output file");
    app->add_option("--router", router, "base, ann-qct, base-ann, sahs, sahs-ann, mcts or mcts-ann")
        ->capture_default_str();
    app->add_option("--seed", seed, "Seed for stochastic routers")->capture_default_str();
    opts.add_to(app);
    app->callback([this] { run(); });
  }

  void run() {
    const ArchGraph g = load_arch(arch);
    const Circuit lc = read_qasm_file(input);
    std::shared_ptr<const PolicyModel> model;
    const RouterSpec spec = opts.spec(router_kind(router), g, seed, model);
    const Mapping initial = Mapping::naive(g.num_nodes());
    const RoutingResult r = run_router(spec, lc, g, initial, seed);
    if (auto v = verify(r.physical_circuit, lc, g, initial); !v) {
      throw VerificationError("routed circuit failed verification: " + v.reason);
    }
    if (!output.empty()) write_qasm_file(r.physical_circuit, output);
    std::cout << to_json(r, output) << "\n";
  }
};

// ---------------------------------------------------------- gen-circuits

struct GenCircuitsCmd {
  std::string kind = "random";
  std::size_t n_q = 16;
  std::size_t count = 10;
  std::size_t gates = 200;
  std::size_t n_l = 3;
  std::uint64_t seed = 0;
  std::string out_dir;

  void add_to(CLI::App& parent) {
    auto* app = parent.add_subcommand("gen-circuits", "Write random or layered training circuits as OpenQASM");
    app->add_option("--kind", kind, "random (fixed CNOT count) or training (n_l-layer slices)")
        ->capture_default_str()
        ->check(CLI::IsMember({"random", "training"}));
    app->add_option("--n-q", n_q, "Qubits per circuit")->capture_default_str()->check(CLI::Range(2, 1 << 16));
    app->add_option("-n,--count", count, "Number of circuits")->capture_default_str();
    app->add_option("--gates", gates, "CNOTs per random circuit")->capture_default_str();
    app->add_option("--n-l", n_l, "Layers per training circuit")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("-o,--out-dir", out_dir, "Output directory")->required();
    app->callback([this] { run(); });
  }

  void run() {
    std::vector<Circuit> circuits;
    if (kind == "training") {
      circuits = gen_training_circuits(n_q, n_l, count, seed);
    } else {
      for (std::size_t i = 0; i < count; ++i) circuits.push_back(random_circuit(n_q, gates, derive_seed({seed, i})));
    }
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < circuits.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "circuit_%05zu.qasm", i);
      write_qasm_file(circuits[i], fs::path(out_dir) / name);
    }
    std::cout << "wrote " << circuits.size() << " circuits to " << out_dir << "\n";
  }
};

// ------------------------------------------------------------ gen-labels

struct GenLabelsCmd {
  std::string arch;
  std::string labeler = "sahs";
  std::string circuits;
  bool slice = false;
  std::size_t n_c = 1000;
  std::size_t n_l = 3;
  std::size_t depth = 2;
  std::size_t n_bp = 200;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool quiet = false;

  void add_to(CLI::App& parent) {
    auto* app = parent.add_subcommand("gen-labels", "Label circuits with a feeding router and write a dataset");
    app->add_option("--arch", arch, "Architecture")->required();
    app->add_option("--labeler", labeler, "sahs, mcts or base")
        ->capture_default_str()
        ->check(CLI::IsMember({"sahs", "mcts", "base"}));
    app->add_option("--circuits", circuits, "OpenQASM file or directory; random training circuits when omitted");
    app->add_flag("--slice", slice, "Cut the given circuits into n_l-layer slices first");
    app->add_option("--n-c", n_c, "Number of generated training circuits")->capture_default_str();
    app->add_option("--n-l", n_l, "Layers per training circuit")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--depth", depth, "SAHS labeler depth")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--n-bp", n_bp, "MCTS labeler iterations")->capture_default_str();
    app->add_option("-j,--workers", workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("-o,--out-dir", out_dir, "Dataset directory")->required();
    app->add_flag("-q,--quiet", quiet, "No progress output");
    app->callback([this] { run(); });
  }

  void run() {
    const ArchGraph g = load_arch(arch);
    std::vector<Circuit> input;
    if (circuits.empty()) {
      input = gen_training_circuits(g.num_nodes(), n_l, n_c, seed);
    } else {
      for (const auto& p : qasm_inputs(circuits)) input.push_back(read_qasm_file(p));
      if (slice) input = slice_realistic_corpus(input, n_l);
      for (const auto& c : input) {
        if (c.num_qubits() > g.num_nodes()) throw Incompatible("circuit wider than architecture '" + g.name() + "'");
      }
    }
    LabelerSpec spec;
    spec.kind = LabelerSpec::parse_kind(labeler);
    spec.sahs.depth = depth;
    spec.mcts.n_bp = n_bp;
    FarmOptions fo;
    fo.workers = workers;
    fo.seed = seed;
    fo.n_l = n_l;
    if (!quiet) {
      fo.progress = [](std::size_t i, std::size_t total, bool) {
        if ((i + 1) % 100 == 0 || i + 1 == total) std::cerr << "\rlabelled " << (i + 1) << "/" << total << std::flush;
      };
    }
    const DatasetManifest m = run_label_farm(input, g, spec, fo, out_dir);
    if (!quiet) std::cerr << "\n";
    std::cout << "wrote " << m.num_samples << " samples (" << m.failures.size() << " failures) to "
              << (fs::path(out_dir) / "manifest.json").string() << "\n";
  }
};

// ----------------------------------------------------------------- train

struct TrainCmd {
  std::string arch;
  std::string dataset;
  std::string output;
  TrainConfig cfg;
  bool augment = false;
  bool restore_best = false;

  void add_to(CLI::App& parent) {
    auto* app = parent.add_subcommand("train", "Train a policy model on a labelled dataset");
    app->add_option("--arch", arch, "Architecture the dataset was labelled on")->required();
    app->add_option("--dataset", dataset, "Dataset manifest.json or its directory")->required();
    app->add_option("-o,--output", output, "Model file")->required();
    app->add_option("--epochs", cfg.epochs)->capture_default_str();
    app->add_option("--batch-size", cfg.batch_size)->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
    app->add_option("--hidden", cfg.hidden, "Hidden layer widths")->capture_default_str()->delimiter(',');
    app->add_option("--validation-fraction", cfg.validation_fraction)
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.9));
    app->add_option("--seed", cfg.seed)->capture_default_str();
    app->add_flag("--augment", augment, "Add automorphic images of every training sample");
    app->add_flag("--restore-best", restore_best, "Keep the epoch with the lowest validation loss");
    app->callback([this] { run(); });
  }

  void run() {
    const ArchGraph g = load_arch(arch);
    fs::path manifest_path = dataset;
    if (fs::is_directory(manifest_path)) manifest_path /= "manifest.json";
    const DatasetManifest m = read_manifest(manifest_path);
    if (m.edge_list_sha != edge_list_sha256(g)) {
      throw Incompatible("dataset was labelled on '" + m.arch_name + "', not on '" + g.name() + "'");
    }
    const auto samples = load_dataset(manifest_path);
    if (samples.empty()) throw UsageError("dataset has no samples");
    cfg.feeding_algorithm = m.generator;
    cfg.augment_symmetries = augment;
    cfg.restore_best = restore_best;
    const TrainResult r = train(samples, g, cfg);
    save(r.model, output);
    nlohmann::json j{{"model", output},
                     {"samples", samples.size()},
                     {"initial_validation_loss", r.initial_validation_loss},
                     {"train_loss", r.train_loss},
                     {"validation_loss", r.validation_loss},
                     {"best_epoch", r.best_epoch}};
    std::cout << j.dump() << "\n";
  }
};

// --------------------------------------------------------------- compare

struct CompareCmd {
  std::string arch;
  std::vector<std::string> routers{"base", "sahs"};
  std::string circuits;
  std::size_t random = 10;
  std::size_t gates = 200;
  std::uint64_t seed = 0;
  std::size_t repetitions = 5;
  std::size_t workers = 1;
  std::string baseline;
  std::string out_dir;
  RouterOptions opts;

  void add_to(CLI::App& parent) {
    auto* app = parent.add_subcommand("compare", "Benchmark routers on a circuit set and write CSV/SVG reports");
    app->add_option("--arch", arch, "Architecture")->required();
    app->add_option("--routers", routers, "Routers to compare")->capture_default_str()->delimiter(',');
    app->add_option("--circuits", circuits, "OpenQASM file or directory");
    app->add_option("--random", random, "Random circuits with |V| qubits when --circuits is omitted")
        ->capture_default_str();
    app->add_option("--gates", gates, "CNOTs per random circuit")->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--repetitions", repetitions, "Best-of-k for stochastic routers")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("-j,--workers", workers)->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--baseline", baseline, "Router id the reductions are measured against");
    app->add_option("-o,--out-dir", out_dir, "Report directory");
    opts.add_to(app);
    app->callback([this] { run(); });
  }

  void run() {
    BenchConfig cfg(load_arch(arch));
    const ArchGraph& g = cfg.arch;
    std::shared_ptr<const PolicyModel> model;
    for (const auto& name : routers) cfg.routers.push_back(opts.spec(router_kind(name), g, seed, model));
    if (circuits.empty()) {
      for (std::size_t i = 0; i < random; ++i) {
        cfg.circuits.push_back(random_circuit(g.num_nodes(), gates, derive_seed({seed, 0xc1c0ULL, i})));
        cfg.circuit_ids.push_back("random_" + std::to_string(i));
      }
    } else {
      for (const auto& p : qasm_inputs(circuits)) {
        cfg.circuits.push_back(read_qasm_file(p));
        cfg.circuit_ids.push_back(p.stem().string());
      }
    }
    for (const auto& c : cfg.circuits) {
      if (c.num_qubits() > g.num_nodes()) throw Incompatible("circuit wider than architecture '" + g.name() + "'");
    }
    cfg.seed = seed;
    cfg.repetitions = repetitions;
    cfg.workers = workers;
    cfg.baseline = baseline;
    const CompareReport report = run_compare(cfg);
    if (!out_dir.empty()) write_report(report, out_dir);
    std::cout << summary_table(report);
  }
};

// ------------------------------------------------------- labelgen-timing

struct TimingCmd {
  std::vector<std::string> archs{"grid:2x2", "grid:3x3", "grid:4x4", "grid:5x5"};
  std::size_t n_samples = 100;
  std::size_t depth = 2;
  std::uint64_t seed = 0;
  std::string output;

  void add_to(CLI::App& parent) {
    auto* app = parent.add_subcommand("labelgen-timing", "Time SAHS label generation against architecture size");
    app->add_option("--archs", archs, "At least three architectures")->capture_default_str()->delimiter(',');
    app->add_option("--n-samples", n_samples, "Labels timed per architecture")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--depth", depth, "SAHS labeler depth")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("-o,--output", output, "JSON report file");
    app->callback([this] { run(); });
  }

  void run() {
    std::vector<ArchGraph> graphs;
    for (const auto& a : archs) graphs.push_back(load_arch(a));
    if (graphs.size() < 3) throw UsageError("labelgen-timing needs at least three architectures");
    SahsParams params;
    params.depth = depth;
    const TimingReport r = labelgen_timing(graphs, n_samples, seed, params);
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : r.points) {
      std::printf("%-16s |V|=%-4zu %.6f s/label\n", p.arch.c_str(), p.num_nodes, p.seconds_per_label);
      points.push_back({{"arch", p.arch}, {"num_nodes", p.num_nodes}, {"seconds_per_label", p.seconds_per_label}});
    }
    std::printf("log-log exponent: %.3f\n", r.exponent);
    if (!output.empty()) {
      write_text(output, nlohmann::json{{"points", points}, {"exponent", r.exponent}}.dump(2) + "\n");
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit routing with search and learned swap recommendations"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonOrTomlConfig>());
  app.set_config("--config", "", "TOML or JSON file with option values (sections per subcommand)");

  RouteCmd route;
  GenCircuitsCmd gen_circuits;
  GenLabelsCmd gen_labels;
  TrainCmd train_cmd;
  CompareCmd compare;
  TimingCmd timing;
  route.add_to(app);
  gen_circuits.add_to(app);
  gen_labels.add_to(app);
  train_cmd.add_to(app);
  compare.add_to(app);
  timing.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerification;
  } catch (const Incompatible& e) {
    std::cerr << "incompatible: " << e.what() << "\n";
    return kIncompatible;
  } catch (const ModelError& e) {
    std::cerr << "model: " << e.what() << "\n";
    const bool mismatch = e.kind() == ModelError::Kind::Metadata || e.kind() == ModelError::Kind::Dimension ||
                          e.kind() == ModelError::Kind::Version;
    return mismatch ? kIncompatible : kUsage;
  } catch (const ArchError& e) {
    std::cerr << "incompatible: " << e.what() << "\n";
    return kIncompatible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
