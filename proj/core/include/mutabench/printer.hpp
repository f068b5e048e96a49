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

#ifndef MUTABENCH_PRINTER_HPP
#define MUTABENCH_PRINTER_HPP

#include <string>

#include "mutabench/ast.hpp"

namespace mutabench::py {

// Emits canonical source for a module tree: 4-space indents, single spaces
// around binary operators, minimal parentheses derived from precedence.
// Emitted text re-parses to a structurally identical tree.
std::string emit(const NodePtr& tree);

// Emits a single expression.
std::string emit_expression(const NodePtr& expr);

}  // namespace mutabench::py

#endif  // MUTABENCH_PRINTER_HPP
