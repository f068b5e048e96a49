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

#ifndef MUTABENCH_EXTRACT_HPP
#define MUTABENCH_EXTRACT_HPP

#include <optional>
#include <string>

namespace mutabench {

// Pulls the predicted output literal from a model response: takes the last
// [ANSWER]...[/ANSWER] block, the last assertion inside it, and the
// right-hand side of its top-level `==` (bracket- and string-aware),
// trimmed. nullopt = malformed (no tag pair, no assertion, or no top-level
// `==`).
std::optional<std::string> extract_answer(const std::string& response);

}  // namespace mutabench

#endif  // MUTABENCH_EXTRACT_HPP
