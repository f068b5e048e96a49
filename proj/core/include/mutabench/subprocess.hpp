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

#ifndef MUTABENCH_SUBPROCESS_HPP
#define MUTABENCH_SUBPROCESS_HPP

#include <string>
#include <vector>

namespace mutabench {

struct RunResult {
  bool spawn_failed = false;
  bool timed_out = false;
  int exit_code = -1;       // wait status exit code; -1 when signalled
  int term_signal = 0;      // non-zero when the child died from a signal
  std::string stdout_text;
  std::string stderr_text;
  double wall_s = 0.0;
};

// Runs argv with the given stdin, collecting stdout/stderr until exit or the
// wall-clock deadline. On timeout the whole process group is killed. Blocking
// and reentrant; each call owns its child.
RunResult run_process(const std::vector<std::string>& argv,
                      const std::string& stdin_data, double timeout_s);

}  // namespace mutabench

#endif  // MUTABENCH_SUBPROCESS_HPP
