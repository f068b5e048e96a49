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

#ifndef MUTABENCH_SANDBOX_HPP
#define MUTABENCH_SANDBOX_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mutabench/program.hpp"

namespace mutabench {

struct SandboxUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExecStatus { Passed, Failed, Crashed, Timeout };

std::string exec_status_name(ExecStatus status);

struct TestVerdict {
  bool equal = false;
  std::string actual;  // repr of the returned value, when the call completed
  std::string error;   // per-test exception or timeout note
};

struct ExecutionResult {
  ExecStatus status = ExecStatus::Crashed;
  std::vector<TestVerdict> verdicts;
  std::string stderr_excerpt;
  double wall_time = 0.0;
};

struct EvalResult {
  ExecStatus status = ExecStatus::Crashed;
  std::string literal;  // repr of the value when status == Passed
  std::string stderr_excerpt;
};

// Executes candidate programs in a fresh `python3 -I` process per call; the
// generated driver script travels on stdin and the verdict comes back as one
// JSON object on stdout. No in-process interpretation of the object language.
class Sandbox {
 public:
  // Resolves the interpreter from python_bin, else $MUTABENCH_PYTHON, else
  // "python3". Throws SandboxUnavailable when the interpreter cannot run.
  explicit Sandbox(std::string python_bin = "");

  const std::string& python_bin() const { return python_bin_; }

  // Runs each test as entry(input) == expected in one fresh process.
  // Per-test timeout is timeout_s; misbehavior becomes a status, never an
  // exception.
  ExecutionResult verify(const std::string& source,
                         const std::string& entry_name,
                         const std::vector<TestCase>& tests,
                         double timeout_s = 10.0) const;

  // Calls entry with the argument list spelled by input_expr and returns the
  // repr of the result.
  EvalResult evaluate_call(const std::string& source,
                           const std::string& entry_name,
                           const std::string& input_expr,
                           double timeout_s = 10.0) const;

  // Evaluates both expressions in a bare interpreter (no subject program)
  // and compares them with ==. Unevaluable or unequal -> false.
  bool judge_literals(const std::string& predicted,
                      const std::string& expected,
                      double timeout_s = 10.0) const;

 private:
  std::string python_bin_;
};

}  // namespace mutabench

#endif  // MUTABENCH_SANDBOX_HPP
