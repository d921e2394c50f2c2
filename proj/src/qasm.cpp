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

#include "qroute/qasm.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace qroute {
namespace {

struct Statement {
  std::string text;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on ';' with comments removed. `gate name(...) args { ... }` bodies are
// returned as a single statement starting with "gate".
std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  std::string cur;
  std::size_t line = 1;
  std::size_t start_line = 1;
  int brace_depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) {
        ++line;
        cur.push_back(' ');
      }
      continue;
    }
    if (ch == '\n') ++line;
    if (trim(cur).empty() && !std::isspace(static_cast<unsigned char>(ch))) start_line = line;
    if (ch == '{') ++brace_depth;
    if (ch == '}') {
      if (brace_depth == 0) throw QasmError(line, "unbalanced '}'");
      if (--brace_depth == 0) {
        cur.push_back(ch);
        out.push_back({std::string(trim(cur)), start_line});
        cur.clear();
        continue;
      }
    }
    if (ch == ';' && brace_depth == 0) {
      out.push_back({std::string(trim(cur)), start_line});
      cur.clear();
      continue;
    }
    cur.push_back(ch);
  }
  if (brace_depth != 0) throw QasmError(line, "unterminated '{'");
  if (!trim(cur).empty()) throw QasmError(start_line, "missing ';' after '" + std::string(trim(cur)) + "'");
  return out;
}

struct Operand {
  std::string reg;
  std::optional<std::size_t> index;
};

Operand parse_operand(std::string_view s, std::size_t line) {
  s = trim(s);
  Operand op;
  const auto lb = s.find('[');
  if (lb == std::string_view::npos) {
    op.reg = std::string(s);
  } else {
    const auto rb = s.find(']', lb);
    if (rb == std::string_view::npos || !trim(s.substr(rb + 1)).empty()) {
      throw QasmError(line, "malformed operand '" + std::string(s) + "'");
    }
    op.reg = std::string(trim(s.substr(0, lb)));
    const auto digits = trim(s.substr(lb + 1, rb - lb - 1));
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw QasmError(line, "bad index in operand '" + std::string(s) + "'");
    }
    op.index = value;
  }
  if (op.reg.empty()) throw QasmError(line, "missing register name");
  for (char ch : op.reg) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') {
      throw QasmError(line, "bad register name '" + op.reg + "'");
    }
  }
  return op;
}

std::vector<Operand> parse_operands(std::string_view s, std::size_t line) {
  std::vector<Operand> ops;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto piece = s.substr(pos, comma == std::string_view::npos ? s.size() - pos : comma - pos);
    if (trim(piece).empty()) throw QasmError(line, "empty operand");
    ops.push_back(parse_operand(piece, line));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return ops;
}

bool starts_with_word(std::string_view s, std::string_view word) {
  return s.substr(0, word.size()) == word &&
         (s.size() == word.size() || !std::isalnum(static_cast<unsigned char>(s[word.size()])) );
}

}  // namespace

Circuit parse_qasm(std::string_view text) {
  std::optional<std::string> qreg;
  std::size_t qreg_size = 0;
  std::vector<std::string> cregs;
  std::vector<Gate> gates;

  for (const auto& [stmt_text, line] : split_statements(text)) {
    std::string_view stmt = stmt_text;
    if (stmt.empty()) continue;
    if (starts_with_word(stmt, "OPENQASM") || starts_with_word(stmt, "include") ||
        starts_with_word(stmt, "gate") || starts_with_word(stmt, "opaque") ||
        starts_with_word(stmt, "barrier")) {
      continue;
    }
    if (starts_with_word(stmt, "qreg")) {
      if (qreg) throw QasmError(line, "multiple qreg declarations are not supported");
      const auto op = parse_operand(stmt.substr(4), line);
      if (!op.index) throw QasmError(line, "qreg needs a size");
      qreg = op.reg;
      qreg_size = *op.index;
      continue;
    }
    if (starts_with_word(stmt, "creg")) {
      cregs.push_back(parse_operand(stmt.substr(4), line).reg);
      continue;
    }
    if (starts_with_word(stmt, "measure") || starts_with_word(stmt, "reset") ||
        starts_with_word(stmt, "if")) {
      continue;
    }

    // Gate application: name[(params)] operand, operand...
    std::size_t name_end = 0;
    while (name_end < stmt.size() &&
           (std::isalnum(static_cast<unsigned char>(stmt[name_end])) || stmt[name_end] == '_')) {
      ++name_end;
    }
    if (name_end == 0) throw QasmError(line, "syntax error near '" + std::string(stmt) + "'");
    const std::string name(stmt.substr(0, name_end));
    std::string_view rest = trim(stmt.substr(name_end));
    if (!rest.empty() && rest.front() == '(') {
      const auto close = rest.find(')');
      if (close == std::string_view::npos) throw QasmError(line, "unterminated parameter list");
      rest = trim(rest.substr(close + 1));
    }
    if (rest.empty()) throw QasmError(line, "gate '" + name + "' has no operands");
    const auto ops = parse_operands(rest, line);
    if (!qreg) throw QasmError(line, "gate '" + name + "' before any qreg declaration");

    for (const auto& op : ops) {
      if (op.reg != *qreg) {
        throw QasmError(line, "reference to undeclared qubit register '" + op.reg + "'");
      }
      if (op.index && *op.index >= qreg_size) {
        throw QasmError(line, "qubit index out of range: " + op.reg + "[" +
                                  std::to_string(*op.index) + "] (size " +
                                  std::to_string(qreg_size) + ")");
      }
    }
    if (ops.size() == 1) continue;  // single-qubit gate, possibly broadcast
    if (ops.size() != 2) {
      throw QasmError(line, "gate '" + name + "' with " + std::to_string(ops.size()) +
                                " operands is not supported");
    }
    if (!ops[0].index || !ops[1].index) {
      throw QasmError(line, "register broadcast for two-qubit gate '" + name + "' is not supported");
    }
    const auto a = static_cast<Qubit>(*ops[0].index);
    const auto b = static_cast<Qubit>(*ops[1].index);
    if (a == b) throw QasmError(line, "gate '" + name + "' uses the same qubit twice");
    if (name == "cx" || name == "CX") {
      gates.push_back(Gate::cnot(a, b));
    } else if (name == "swap") {
      gates.push_back(Gate::swap(a, b));
    } else {
      throw QasmError(line, "unsupported two-qubit gate '" + name + "'");
    }
  }
  if (!qreg) throw QasmError(1, "no qreg declaration");
  return Circuit(qreg_size, std::move(gates));
}

Circuit read_qasm_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_qasm(ss.str());
}

std::string emit_qasm(const Circuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.num_qubits() << "];\n";
  for (const auto& g : c) {
    out << (g.kind == GateKind::CNOT ? "cx" : "swap") << " q[" << g.q0 << "],q[" << g.q1 << "];\n";
  }
  return out.str();
}

void write_qasm_file(const Circuit& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << emit_qasm(c);
}

}  // namespace qroute
