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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qroute/circuit.hpp"

namespace qroute {

class QasmError : public std::runtime_error {
 public:
  QasmError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the OpenQASM 2.0 subset used for routing benchmarks: a single
/// `qreg`, `cx`/`CX` and `swap` gates. Single-qubit gates, `creg`,
/// `measure`, `barrier`, `reset` and `gate` definitions are skipped, since
/// they do not affect a gate-count routing objective.
Circuit parse_qasm(std::string_view text);
Circuit read_qasm_file(const std::filesystem::path& path);

/// Writes `c` over a register named `q`. CNOTs keep their direction.
std::string emit_qasm(const Circuit& c);
void write_qasm_file(const Circuit& c, const std::filesystem::path& path);

}  // namespace qroute
