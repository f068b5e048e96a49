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

#ifndef MUTABENCH_PROGRAM_HPP
#define MUTABENCH_PROGRAM_HPP

#include <optional>
#include <string>
#include <vector>

namespace mutabench {

enum class BenchmarkOrigin { LiveCodeBench, CruxEval, Custom };

std::string origin_name(BenchmarkOrigin origin);
std::optional<BenchmarkOrigin> origin_from_name(const std::string& name);

// Self-contained input/expected-output pair. `input_expr` is the argument
// list text of the call (what goes between the parentheses) and
// `expected_output_expr` the expected value, both evaluable without the
// program under test.
struct TestCase {
  std::string input_expr;
  std::string expected_output_expr;
};

struct Program {
  std::string id;
  std::string source;
  std::string entry_name;
  std::vector<TestCase> tests;
  BenchmarkOrigin origin = BenchmarkOrigin::Custom;
};

// Validates the Program invariants: source parses, entry is a module-level
// function, tests non-empty. Returns an error description or nullopt.
std::optional<std::string> validate_program(const Program& program);

// Imports of clock/randomness/filesystem/network modules make execution
// nondeterministic; such programs are excluded at ingestion.
std::optional<std::string> nondeterminism_reason(const Program& program);

// Normalized benchmark record serialization (one JSON object per line).
std::string program_to_json(const Program& program);
Program program_from_json(const std::string& line);

std::vector<Program> read_programs_jsonl(const std::string& path);
void write_programs_jsonl(const std::string& path,
                          const std::vector<Program>& programs);

}  // namespace mutabench

#endif  // MUTABENCH_PROGRAM_HPP
