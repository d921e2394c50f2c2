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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qroute/qasm.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(QROUTE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Workdir {
  fs::path path = fs::temp_directory_path() / "qroute_cli_test";
  Workdir() {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cli round trip and exit codes") {
  const Workdir w;
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("route --arch grid:2x3") == 1);
  CHECK(run("frobnicate") == 1);

  REQUIRE(run("gen-circuits --n-q 6 -n 3 --gates 15 --seed 2 -o " + (w / "circ")) == 0);
  const std::string in = w / "circ/circuit_00000.qasm";
  CHECK(fs::exists(in));
  CHECK(run("route --arch grid:2x3 -i " + in + " -o " + (w / "out.qasm") + " --router sahs --depth 3") == 0);
  CHECK(qroute::read_qasm_file(w / "out.qasm").count(qroute::GateKind::CNOT) == 15);
  CHECK(run("route --arch grid:2x3 -i " + in + " --router mcts --n-bp 30 --seed 4") == 0);
  CHECK(run("route --arch nowhere -i " + in) == 1);
  CHECK(run("route --arch grid:2x2 -i " + in) == 3);
  CHECK(run("route --arch grid:2x3 -i " + in + " --router sahs-ann") == 1);
  CHECK(run("route --arch grid:2x3 -i " + in + " --pruning-ratio 1.5") == 1);

  REQUIRE(run("gen-labels --arch grid:2x3 --labeler base --n-c 60 -j 2 -q -o " + (w / "ds")) == 0);
  REQUIRE(run("train --arch grid:2x3 --dataset " + (w / "ds") + " --epochs 2 --hidden 16 -o " + (w / "m.bin")) == 0);
  CHECK(run("train --arch grid:3x3 --dataset " + (w / "ds") + " -o " + (w / "m2.bin")) == 3);
  CHECK(run("route --arch grid:2x3 -i " + in + " --router ann-qct --model " + (w / "m.bin")) == 0);
  CHECK(run("route --arch tokyo -i " + in + " --router ann-qct --model " + (w / "m.bin")) == 3);

  CHECK(run("compare --arch grid:2x3 --routers base,sahs,sahs-ann --model " + (w / "m.bin") +
            " --pruning-ratio 0.3 --random 2 --gates 20 -o " + (w / "rep")) == 0);
  CHECK(fs::exists(w / "rep/records.csv"));
  CHECK(run("compare --arch grid:2x3 --circuits " + (w / "circ") + " --routers base,mcts --repetitions 2") == 0);

  {
    std::ofstream(w / "cfg.json") << R"({"compare": {"routers": ["base", "sahs"], "random": 1, "gates": 10}})";
    std::ofstream(w / "cfg.toml") << "[compare]\nrouters = [\"base\"]\nrandom = 1\n";
  }
  CHECK(run("--config " + (w / "cfg.json") + " compare --arch grid:2x3") == 0);
  CHECK(run("--config " + (w / "cfg.toml") + " compare --arch grid:2x3") == 0);

  CHECK(run("labelgen-timing --archs grid:2x2,grid:2x3 --n-samples 2") == 1);
  CHECK(run("labelgen-timing --archs grid:2x2,grid:2x3,grid:3x3 --n-samples 2 -o " + (w / "t.json")) == 0);
}
