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

#ifndef MUTABENCH_LEXER_HPP
#define MUTABENCH_LEXER_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mutabench::py {

struct SyntaxError : std::runtime_error {
  SyntaxError(int line, int col, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + message),
        line(line),
        col(col),
        message(message) {}
  int line;
  int col;
  std::string message;
};

enum class TokKind {
  EndOfFile,
  Newline,
  Indent,
  Dedent,
  Name,     // identifiers and keywords; keywords carry is_keyword
  Number,
  String,   // raw token text incl. prefix and quotes (non f-string)
  FString,  // raw token text of an f-string literal
  Op,       // operators and delimiters, text in `text`
};

struct Token {
  TokKind kind = TokKind::EndOfFile;
  std::string text;
  bool is_keyword = false;
  int line = 0;
  int col = 0;
};

bool is_python_keyword(const std::string& word);

// Tokenizes a whole module: handles indentation, implicit joining inside
// brackets, comments, line continuations, and all literal forms. Throws
// SyntaxError on malformed input (bad indent, unterminated string, stray
// characters).
std::vector<Token> tokenize(const std::string& source);

}  // namespace mutabench::py

#endif  // MUTABENCH_LEXER_HPP
