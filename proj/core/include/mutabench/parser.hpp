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

#ifndef MUTABENCH_PARSER_HPP
#define MUTABENCH_PARSER_HPP

#include <string>

#include "mutabench/ast.hpp"
#include "mutabench/lexer.hpp"

namespace mutabench::py {

// Parses a Python 3 module. Throws SyntaxError on malformed input.
NodePtr parse(const std::string& source);

// Parses a single expression (no trailing input allowed).
NodePtr parse_expression(const std::string& text);

}  // namespace mutabench::py

#endif  // MUTABENCH_PARSER_HPP
