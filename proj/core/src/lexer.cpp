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

#include "mutabench/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace mutabench::py {

bool is_python_keyword(const std::string& word) {
  static const std::unordered_set<std::string> kw = {
      "False",  "None",   "True",    "and",   "as",     "assert", "async",
      "await",  "break",  "class",   "continue", "def", "del",    "elif",
      "else",   "except", "finally", "for",   "from",   "global", "if",
      "import", "in",     "is",      "lambda", "nonlocal", "not", "or",
      "pass",   "raise",  "return",  "try",   "while",  "with",   "yield"};
  return kw.count(word) > 0;
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

// Multi-char operators ordered longest first for greedy matching.
const std::array<const char*, 26> kMultiOps = {
    "**=", "//=", ">>=", "<<=", "...", "!=", ">=", "<=", "==", "->",
    "+=",  "-=",  "*=",  "/=",  "%=",  "@=", "&=", "|=", "^=", ":=",
    "**",  "//",  "<<",  ">>",  "&&",  "||"};

const char* kSingleOps = "+-*/%@&|^~<>()[]{},:.;=";

struct Scanner {
  const std::string& src;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Scanner(const std::string& s) : src(s) {}

  bool eof() const { return pos >= src.size(); }
  char peek(size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }
  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
};

bool is_string_prefix(const std::string& p) {
  if (p.size() > 2) return false;
  std::string lower;
  for (char c : p) lower += static_cast<char>(std::tolower(c));
  static const std::unordered_set<std::string> ok = {
      "r", "b", "u", "f", "rb", "br", "fr", "rf"};
  return ok.count(lower) > 0;
}

// Scans the body of a string literal starting at the opening quote. Returns
// the raw token text (caller already consumed the prefix).
std::string scan_string_body(Scanner& s, int start_line, int start_col) {
  std::string out;
  char quote = s.peek();
  bool triple = s.peek(1) == quote && s.peek(2) == quote;
  int nquotes = triple ? 3 : 1;
  for (int i = 0; i < nquotes; ++i) out += s.advance();
  while (true) {
    if (s.eof()) {
      throw SyntaxError(start_line, start_col, "unterminated string literal");
    }
    char c = s.peek();
    if (c == '\\') {
      out += s.advance();
      if (s.eof()) {
        throw SyntaxError(start_line, start_col, "unterminated string literal");
      }
      out += s.advance();
      continue;
    }
    if (c == '\n' && !triple) {
      throw SyntaxError(start_line, start_col,
                        "newline inside single-quoted string");
    }
    if (c == quote) {
      if (!triple) {
        out += s.advance();
        return out;
      }
      if (s.peek(1) == quote && s.peek(2) == quote) {
        out += s.advance();
        out += s.advance();
        out += s.advance();
        return out;
      }
    }
    out += s.advance();
  }
}

std::string scan_number(Scanner& s) {
  std::string out;
  auto digits = [&](auto pred) {
    while (!s.eof() && (pred(s.peek()) || s.peek() == '_')) out += s.advance();
  };
  if (s.peek() == '0' && (s.peek(1) == 'x' || s.peek(1) == 'X' ||
                          s.peek(1) == 'o' || s.peek(1) == 'O' ||
                          s.peek(1) == 'b' || s.peek(1) == 'B')) {
    out += s.advance();
    out += s.advance();
    digits([](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
    return out;
  }
  auto dec = [](char c) { return std::isdigit(static_cast<unsigned char>(c)); };
  digits(dec);
  if (s.peek() == '.' && std::isdigit(static_cast<unsigned char>(s.peek(1)))) {
    out += s.advance();
    digits(dec);
  } else if (s.peek() == '.' && !out.empty() && !is_ident_start(s.peek(1)) &&
             s.peek(1) != '.') {
    out += s.advance();  // trailing-dot float like "1."
    digits(dec);
  }
  if (s.peek() == 'e' || s.peek() == 'E') {
    size_t save = s.pos;
    int save_line = s.line, save_col = s.col;
    std::string exp;
    exp += s.advance();
    if (s.peek() == '+' || s.peek() == '-') exp += s.advance();
    if (std::isdigit(static_cast<unsigned char>(s.peek()))) {
      out += exp;
      digits(dec);
    } else {
      s.pos = save;
      s.line = save_line;
      s.col = save_col;
    }
  }
  if (s.peek() == 'j' || s.peek() == 'J') out += s.advance();
  return out;
}

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
  Scanner s(source);
  std::vector<Token> toks;
  std::vector<int> indents = {0};
  int bracket_depth = 0;
  bool at_line_start = true;
  bool line_had_tokens = false;

  auto push = [&](TokKind kind, std::string text, int tl, int tc,
                  bool kw = false) {
    toks.push_back(Token{kind, std::move(text), kw, tl, tc});
  };

  while (true) {
    if (at_line_start && bracket_depth == 0) {
      // Measure indentation; skip blank and comment-only lines.
      int width = 0;
      size_t probe = s.pos;
      while (probe < source.size() &&
             (source[probe] == ' ' || source[probe] == '\t')) {
        width = source[probe] == '\t' ? (width / 8 + 1) * 8 : width + 1;
        ++probe;
      }
      if (probe >= source.size()) {
        s.pos = probe;
        break;
      }
      if (source[probe] == '\n' || source[probe] == '#' ||
          source[probe] == '\r') {
        while (s.pos < source.size() && s.peek() != '\n') s.advance();
        if (!s.eof()) s.advance();
        continue;
      }
      while (s.pos < probe) s.advance();
      if (width > indents.back()) {
        indents.push_back(width);
        push(TokKind::Indent, "", s.line, 1);
      } else {
        while (width < indents.back()) {
          indents.pop_back();
          push(TokKind::Dedent, "", s.line, 1);
        }
        if (width != indents.back()) {
          throw SyntaxError(s.line, s.col, "unindent does not match any outer "
                                           "indentation level");
        }
      }
      at_line_start = false;
      line_had_tokens = false;
    }

    if (s.eof()) break;
    char c = s.peek();
    int tl = s.line, tc = s.col;

    if (c == '\n') {
      s.advance();
      if (bracket_depth > 0) continue;
      if (line_had_tokens) push(TokKind::Newline, "\n", tl, tc);
      at_line_start = true;
      continue;
    }
    if (c == '\r') {
      s.advance();
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\f') {
      s.advance();
      continue;
    }
    if (c == '#') {
      while (!s.eof() && s.peek() != '\n') s.advance();
      continue;
    }
    if (c == '\\' && s.peek(1) == '\n') {
      s.advance();
      s.advance();
      continue;
    }

    if (is_ident_start(c)) {
      std::string word;
      while (!s.eof() && is_ident_char(s.peek())) word += s.advance();
      if ((s.peek() == '"' || s.peek() == '\'') && is_string_prefix(word)) {
        bool is_f = word.find('f') != std::string::npos ||
                    word.find('F') != std::string::npos;
        std::string body = scan_string_body(s, tl, tc);
        push(is_f ? TokKind::FString : TokKind::String, word + body, tl, tc);
      } else {
        push(TokKind::Name, word, tl, tc, is_python_keyword(word));
      }
      line_had_tokens = true;
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(s.peek(1))))) {
      push(TokKind::Number, scan_number(s), tl, tc);
      line_had_tokens = true;
      continue;
    }

    if (c == '"' || c == '\'') {
      push(TokKind::String, scan_string_body(s, tl, tc), tl, tc);
      line_had_tokens = true;
      continue;
    }

    bool matched = false;
    for (const char* op : kMultiOps) {
      size_t n = std::string(op).size();
      if (source.compare(s.pos, n, op) == 0) {
        if (std::string(op) == "&&" || std::string(op) == "||") break;
        for (size_t i = 0; i < n; ++i) s.advance();
        push(TokKind::Op, op, tl, tc);
        matched = true;
        break;
      }
    }
    if (matched) {
      line_had_tokens = true;
      continue;
    }

    if (std::string(kSingleOps).find(c) != std::string::npos) {
      if (c == '(' || c == '[' || c == '{') ++bracket_depth;
      if (c == ')' || c == ']' || c == '}') {
        if (bracket_depth == 0) {
          throw SyntaxError(tl, tc, std::string("unmatched '") + c + "'");
        }
        --bracket_depth;
      }
      s.advance();
      push(TokKind::Op, std::string(1, c), tl, tc);
      line_had_tokens = true;
      continue;
    }

    throw SyntaxError(tl, tc, std::string("invalid character '") + c + "'");
  }

  if (line_had_tokens && !at_line_start) {
    push(TokKind::Newline, "\n", s.line, s.col);
  }
  while (indents.size() > 1) {
    indents.pop_back();
    push(TokKind::Dedent, "", s.line, 1);
  }
  push(TokKind::EndOfFile, "", s.line, s.col);
  return toks;
}

}  // namespace mutabench::py
