// Copyright 2026 The Mutabench Authors
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

#include "mutabench/program.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "mutabench/parser.hpp"

namespace mutabench {

using nlohmann::json;

std::string origin_name(BenchmarkOrigin origin) {
  switch (origin) {
    case BenchmarkOrigin::LiveCodeBench: return "livecodebench";
    case BenchmarkOrigin::CruxEval: return "cruxeval";
    case BenchmarkOrigin::Custom: return "custom";
  }
  return "custom";
}

std::optional<BenchmarkOrigin> origin_from_name(const std::string& name) {
  if (name == "livecodebench") return BenchmarkOrigin::LiveCodeBench;
  if (name == "cruxeval") return BenchmarkOrigin::CruxEval;
  if (name == "custom") return BenchmarkOrigin::Custom;
  return std::nullopt;
}

std::optional<std::string> validate_program(const Program& program) {
  if (program.id.empty()) return "missing id";
  if (program.tests.empty()) return "empty test suite";
  py::NodePtr tree;
  try {
    tree = py::parse(program.source);
  } catch (const py::SyntaxError& e) {
    return std::string("syntax error: ") + e.what();
  }
  bool entry_found = false;
  for (const auto& stmt : tree->children) {
    if ((stmt->kind == py::NodeKind::FunctionDef ||
         stmt->kind == py::NodeKind::AsyncFunctionDef) &&
        stmt->value == program.entry_name) {
      entry_found = true;
      break;
    }
  }
  if (!entry_found) {
    return "entry function '" + program.entry_name +
           "' not defined at module top level";
  }
  return std::nullopt;
}

std::optional<std::string> nondeterminism_reason(const Program& program) {
  static const std::unordered_set<std::string> banned = {
      "random",  "secrets", "time",       "datetime", "os",
      "pathlib", "shutil",  "tempfile",   "socket",   "http",
      "urllib",  "requests", "subprocess", "uuid",    "threading",
      "multiprocessing"};
  py::NodePtr tree;
  try {
    tree = py::parse(program.source);
  } catch (const py::SyntaxError&) {
    return std::nullopt;  // unparseable programs are excluded elsewhere
  }
  std::optional<std::string> reason;
  py::walk(tree, [&](const py::NodePtr& n, const py::NodePath&) {
    if (reason) return;
    if (n->kind == py::NodeKind::Import ||
        n->kind == py::NodeKind::ImportFrom) {
      auto check = [&](const std::string& module) {
        std::string top = module.substr(0, module.find('.'));
        if (banned.count(top)) {
          reason = "imports nondeterministic module '" + top + "'";
        }
      };
      if (n->kind == py::NodeKind::ImportFrom) {
        check(n->value);
      } else {
        for (const auto& alias : n->children) check(alias->value);
      }
    }
  });
  return reason;
}

std::string program_to_json(const Program& program) {
  json tests = json::array();
  for (const auto& t : program.tests) {
    tests.push_back({{"input", t.input_expr}, {"expected", t.expected_output_expr}});
  }
  json j = {{"id", program.id},
            {"source", program.source},
            {"entry", program.entry_name},
            {"tests", tests},
            {"origin", origin_name(program.origin)}};
  return j.dump();
}

Program program_from_json(const std::string& line) {
  json j = json::parse(line);
  Program p;
  p.id = j.at("id").get<std::string>();
  p.source = j.at("source").get<std::string>();
  p.entry_name = j.at("entry").get<std::string>();
  for (const auto& t : j.at("tests")) {
    p.tests.push_back(TestCase{t.at("input").get<std::string>(),
                               t.at("expected").get<std::string>()});
  }
  auto origin = origin_from_name(j.value("origin", "custom"));
  if (!origin) throw std::runtime_error("unknown origin in record " + p.id);
  p.origin = *origin;
  return p;
}

std::vector<Program> read_programs_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Program> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(program_from_json(line));
  }
  return out;
}

void write_programs_jsonl(const std::string& path,
                          const std::vector<Program>& programs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& p : programs) out << program_to_json(p) << "\n";
}

}  // namespace mutabench
