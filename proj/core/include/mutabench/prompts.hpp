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

#ifndef MUTABENCH_PROMPTS_HPP
#define MUTABENCH_PROMPTS_HPP

#include <stdexcept>
#include <string>

namespace mutabench {

struct ProtocolViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The fixed preamble of the initial prompt (through the "no more than 1000
// tokens." line); exposed for template-stability tests.
const std::string& initial_prompt_preamble();

// Initial prompt: preamble, then a fenced block holding the program source
// and `assert entry(input) == ???`. Byte-stable for a given subject.
std::string build_initial_prompt(const std::string& source,
                                 const std::string& entry_name,
                                 const std::string& input_expr);

// The generic retry prompt; carries no program-specific content. Throws
// ProtocolViolation when the profile is single-turn.
std::string build_feedback_prompt(bool supports_multi_turn);

}  // namespace mutabench

#endif  // MUTABENCH_PROMPTS_HPP
