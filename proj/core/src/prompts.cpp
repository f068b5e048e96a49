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

#include "mutabench/prompts.hpp"

namespace mutabench {

namespace {

// Both templates are frozen byte-for-byte, including the hard line wraps and
// trailing spaces; changing them invalidates cross-run comparability.
const char kInitialPreamble[] =
    "Simulate the Execution: You are given a Python function \n"
    "and an assertion containing a function input. \n"
    "Complete the assertion containing the execution output \n"
    "corresponding to the given input in [ANSWER] and [/ANSWER] \n"
    "tags. For example, the answer to \n"
    "'''assert sumEvenNumbers([1,2,3,4])==???''' would be\n"
    "[ANSWER]\n"
    "assert sumEvenNumbers([1,2,3,4]) == 6\n"
    "[/ANSWER]\n"
    "Please complete the assertion and explain your reasoning \n"
    "for your prediction, using no more than 1000 tokens.\n";

const char kFeedback[] =
    "Your previous output prediction was INCORRECT!\n"
    "Try again. Complete the initial program assertion \n"
    "containing the execution output corresponding to the \n"
    "given input in [ANSWER] and [/ANSWER] tags. \n"
    "For example, the answer to \n"
    "'''assert sumEvenNumbers([1,2,3,4])==???''' would be\n"
    "[ANSWER]\n"
    "assert sumEvenNumbers([1,2,3,4]) == 6\n"
    "[/ANSWER]\n"
    "Please complete the assertion and explain your reasoning \n"
    "for your new prediction, using no more than 1000 tokens.";

}  // namespace

const std::string& initial_prompt_preamble() {
  static const std::string preamble = kInitialPreamble;
  return preamble;
}

std::string build_initial_prompt(const std::string& source,
                                 const std::string& entry_name,
                                 const std::string& input_expr) {
  std::string prompt = kInitialPreamble;
  prompt += "```python \n";
  prompt += source;
  if (!source.empty() && source.back() != '\n') prompt += '\n';
  prompt += "assert " + entry_name + "(" + input_expr + ") == ???\n";
  prompt += "```";
  return prompt;
}

std::string build_feedback_prompt(bool supports_multi_turn) {
  if (!supports_multi_turn) {
    throw ProtocolViolation(
        "feedback prompts are only valid for multi-turn models");
  }
  return kFeedback;
}

}  // namespace mutabench
