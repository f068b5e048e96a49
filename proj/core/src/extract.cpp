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

#include "mutabench/extract.hpp"

#include <cctype>

namespace mutabench {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Position just past the matching quote of the string starting at i, where
// text[i] is ' or " (a possible prefix has already been consumed).
size_t skip_string(const std::string& s, size_t i) {
  char q = s[i];
  bool triple = i + 2 < s.size() && s[i + 1] == q && s[i + 2] == q;
  size_t j = i + (triple ? 3 : 1);
  while (j < s.size()) {
    if (s[j] == '\\') {
      j += 2;
      continue;
    }
    if (s[j] == q) {
      if (!triple) return j + 1;
      if (j + 2 < s.size() && s[j + 1] == q && s[j + 2] == q) return j + 3;
    }
    if (!triple && s[j] == '\n') return j;  // unterminated line string
    ++j;
  }
  return s.size();
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<std::string> extract_answer(const std::string& response) {
  static const std::string open_tag = "[ANSWER]";
  static const std::string close_tag = "[/ANSWER]";

  // Last opening tag followed by a closing tag.
  size_t open = std::string::npos;
  size_t close = std::string::npos;
  size_t from = 0;
  while (true) {
    size_t o = response.find(open_tag, from);
    if (o == std::string::npos) break;
    size_t c = response.find(close_tag, o + open_tag.size());
    if (c == std::string::npos) break;
    open = o;
    close = c;
    from = o + open_tag.size();
  }
  if (open == std::string::npos) return std::nullopt;
  std::string block =
      response.substr(open + open_tag.size(), close - open - open_tag.size());

  // Last `assert` keyword in the block.
  size_t assert_pos = std::string::npos;
  from = 0;
  while (true) {
    size_t a = block.find("assert", from);
    if (a == std::string::npos) break;
    bool left_ok = a == 0 || !is_word_char(block[a - 1]);
    bool right_ok =
        a + 6 >= block.size() || !is_word_char(block[a + 6]);
    if (left_ok && right_ok) assert_pos = a;
    from = a + 6;
  }
  if (assert_pos == std::string::npos) return std::nullopt;

  // First top-level `==` after the assert keyword.
  int depth = 0;
  size_t i = assert_pos + 6;
  size_t eq = std::string::npos;
  while (i < block.size()) {
    char c = block[i];
    if (c == '\'' || c == '"') {
      i = skip_string(block, i);
      continue;
    }
    if (c == '(' || c == '[' || c == '{') {
      ++depth;
    } else if (c == ')' || c == ']' || c == '}') {
      --depth;
    } else if (depth == 0 && c == '#') {
      while (i < block.size() && block[i] != '\n') ++i;
      continue;
    } else if (depth == 0 && c == '=' && i + 1 < block.size() &&
               block[i + 1] == '=') {
      eq = i;
      break;
    } else if (depth == 0 && c == '\n') {
      break;  // the assertion statement ends at an unbracketed newline
    }
    ++i;
  }
  if (eq == std::string::npos) return std::nullopt;

  // RHS runs to the end of the statement.
  i = eq + 2;
  size_t end = i;
  depth = 0;
  while (end < block.size()) {
    char c = block[end];
    if (c == '\'' || c == '"') {
      end = skip_string(block, end);
      continue;
    }
    if (c == '(' || c == '[' || c == '{') {
      ++depth;
    } else if (c == ')' || c == ']' || c == '}') {
      --depth;
    } else if (depth == 0 && (c == '\n' || c == '#' || c == ';')) {
      break;
    } else if (depth == 0 && c == ',' && block.compare(end, 1, ",") == 0) {
      // assert's optional message: `assert x == y, "msg"`
      break;
    }
    ++end;
  }
  std::string rhs = trim(block.substr(i, end - i));
  if (rhs.empty()) return std::nullopt;
  return rhs;
}

}  // namespace mutabench
