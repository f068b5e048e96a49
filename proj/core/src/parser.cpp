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

#include "mutabench/parser.hpp"

#include <cassert>
#include <memory>
#include <utility>
#include <vector>

namespace mutabench::py {
namespace {

using K = NodeKind;

NodePtr node(K kind, std::string value = {}, std::vector<NodePtr> ch = {},
             std::string aux = {}) {
  return make_node(kind, std::move(value), std::move(ch), std::move(aux));
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr parse_module() {
    std::vector<NodePtr> stmts;
    while (!at(TokKind::EndOfFile)) {
      parse_statement(stmts);
    }
    return node(K::Module, "", std::move(stmts));
  }

  NodePtr parse_single_expression() {
    NodePtr e = testlist(true);
    skip_newlines();
    if (!at(TokKind::EndOfFile)) {
      err("unexpected trailing input after expression");
    }
    return e;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  // ---- token helpers ----
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t off = 1) const {
    size_t i = pos_ + off;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(TokKind k) const { return cur().kind == k; }
  bool at_op(const char* text) const {
    return cur().kind == TokKind::Op && cur().text == text;
  }
  bool at_kw(const char* word) const {
    return cur().kind == TokKind::Name && cur().is_keyword &&
           cur().text == word;
  }
  bool at_name(const char* word) const {
    return cur().kind == TokKind::Name && !cur().is_keyword &&
           cur().text == word;
  }
  Token take() { return toks_[pos_++]; }
  void expect_op(const char* text) {
    if (!at_op(text)) err(std::string("expected '") + text + "'");
    ++pos_;
  }
  void expect_kw(const char* word) {
    if (!at_kw(word)) err(std::string("expected '") + word + "'");
    ++pos_;
  }
  std::string expect_name() {
    if (cur().kind != TokKind::Name || cur().is_keyword) {
      err("expected identifier");
    }
    return take().text;
  }
  void expect_newline() {
    if (at(TokKind::Newline)) {
      ++pos_;
      return;
    }
    if (at(TokKind::EndOfFile) || at(TokKind::Dedent)) return;
    err("expected end of line");
  }
  void skip_newlines() {
    while (at(TokKind::Newline)) ++pos_;
  }
  [[noreturn]] void err(const std::string& msg) const {
    throw SyntaxError(cur().line, cur().col, msg);
  }

  // ---- statements ----
  void parse_statement(std::vector<NodePtr>& out) {
    if (at(TokKind::Newline)) {
      ++pos_;
      return;
    }
    if (at_op("@") || at_kw("def") || at_kw("class") || at_kw("if") ||
        at_kw("while") || at_kw("for") || at_kw("try") || at_kw("with") ||
        at_kw("async") || is_match_statement()) {
      out.push_back(compound_statement());
      return;
    }
    simple_statement_line(out);
  }

  void simple_statement_line(std::vector<NodePtr>& out) {
    out.push_back(small_statement());
    while (at_op(";")) {
      ++pos_;
      if (at(TokKind::Newline) || at(TokKind::EndOfFile)) break;
      out.push_back(small_statement());
    }
    expect_newline();
  }

  NodePtr small_statement() {
    int line = cur().line;
    NodePtr s;
    if (at_kw("pass")) {
      ++pos_;
      s = node(K::Pass);
    } else if (at_kw("break")) {
      ++pos_;
      s = node(K::Break);
    } else if (at_kw("continue")) {
      ++pos_;
      s = node(K::Continue);
    } else if (at_kw("return")) {
      ++pos_;
      NodePtr v = ends_expression() ? empty_node() : testlist(true);
      s = node(K::Return, "", {v});
    } else if (at_kw("raise")) {
      ++pos_;
      NodePtr exc = empty_node(), cause = empty_node();
      if (!ends_expression()) {
        exc = expression();
        if (at_kw("from")) {
          ++pos_;
          cause = expression();
        }
      }
      s = node(K::Raise, "", {exc, cause});
    } else if (at_kw("global") || at_kw("nonlocal")) {
      bool g = cur().text == "global";
      ++pos_;
      std::vector<NodePtr> names;
      names.push_back(node(K::Name, expect_name()));
      while (at_op(",")) {
        ++pos_;
        names.push_back(node(K::Name, expect_name()));
      }
      s = node(g ? K::Global : K::Nonlocal, "", std::move(names));
    } else if (at_kw("import")) {
      ++pos_;
      std::vector<NodePtr> aliases;
      aliases.push_back(import_alias(true));
      while (at_op(",")) {
        ++pos_;
        aliases.push_back(import_alias(true));
      }
      s = node(K::Import, "", std::move(aliases));
    } else if (at_kw("from")) {
      s = from_import();
    } else if (at_kw("del")) {
      ++pos_;
      std::vector<NodePtr> targets;
      targets.push_back(expression());
      while (at_op(",")) {
        ++pos_;
        if (ends_expression()) break;
        targets.push_back(expression());
      }
      s = node(K::Delete, "", std::move(targets));
    } else if (at_kw("assert")) {
      ++pos_;
      NodePtr test = expression();
      NodePtr msg = empty_node();
      if (at_op(",")) {
        ++pos_;
        msg = expression();
      }
      s = node(K::Assert, "", {test, msg});
    } else if (at_kw("yield")) {
      s = node(K::ExprStmt, "", {yield_expression()});
    } else {
      s = expr_or_assign();
    }
    auto mut = std::const_pointer_cast<Node>(s);
    mut->line = line;
    return s;
  }

  NodePtr import_alias(bool dotted) {
    std::string name = expect_name();
    if (dotted) {
      while (at_op(".")) {
        ++pos_;
        name += "." + expect_name();
      }
    }
    std::string asname;
    if (at_kw("as")) {
      ++pos_;
      asname = expect_name();
    }
    return node(K::Alias, name, {}, asname);
  }

  NodePtr from_import() {
    expect_kw("from");
    int level = 0;
    while (at_op(".") || at_op("...")) {
      level += at_op(".") ? 1 : 3;
      ++pos_;
    }
    std::string module;
    if (!at_kw("import")) {
      module = expect_name();
      while (at_op(".")) {
        ++pos_;
        module += "." + expect_name();
      }
    }
    expect_kw("import");
    std::vector<NodePtr> aliases;
    if (at_op("*")) {
      ++pos_;
      aliases.push_back(node(K::Alias, "*"));
    } else if (at_op("(")) {
      ++pos_;
      aliases.push_back(import_alias(false));
      while (at_op(",")) {
        ++pos_;
        if (at_op(")")) break;
        aliases.push_back(import_alias(false));
      }
      expect_op(")");
    } else {
      aliases.push_back(import_alias(false));
      while (at_op(",")) {
        ++pos_;
        aliases.push_back(import_alias(false));
      }
    }
    return node(K::ImportFrom, module, std::move(aliases),
                level ? std::to_string(level) : "");
  }

  NodePtr expr_or_assign() {
    NodePtr first = testlist(true);
    if (at_op(":")) {  // annotated assignment
      ++pos_;
      NodePtr ann = expression();
      NodePtr val = empty_node();
      if (at_op("=")) {
        ++pos_;
        val = at_kw("yield") ? yield_expression() : testlist(true);
      }
      return node(K::AnnAssign, "", {first, ann, val});
    }
    if (cur().kind == TokKind::Op && cur().text.size() >= 2 &&
        cur().text.back() == '=' && cur().text != "==" && cur().text != "<=" &&
        cur().text != ">=" && cur().text != "!=" && cur().text != ":=") {
      std::string op = take().text;
      op.pop_back();  // strip '='
      NodePtr val = at_kw("yield") ? yield_expression() : testlist(true);
      return node(K::AugAssign, op, {first, val});
    }
    if (at_op("=")) {
      std::vector<NodePtr> parts = {first};
      while (at_op("=")) {
        ++pos_;
        parts.push_back(at_kw("yield") ? yield_expression() : testlist(true));
      }
      return node(K::Assign, "", std::move(parts));
    }
    return node(K::ExprStmt, "", {first});
  }

  bool ends_expression() const {
    return at(TokKind::Newline) || at(TokKind::EndOfFile) ||
           at(TokKind::Dedent) || at_op(";") || at_op(")") || at_op("]") ||
           at_op("}") || at_op(":") || at_op("=");
  }

  // Soft-keyword detection for `match`: the logical line must end with ':'
  // and the next token must be able to start an expression.
  bool is_match_statement() const {
    if (!at_name("match")) return false;
    const Token& nxt = peek();
    bool expr_start =
        nxt.kind == TokKind::Name || nxt.kind == TokKind::Number ||
        nxt.kind == TokKind::String || nxt.kind == TokKind::FString ||
        (nxt.kind == TokKind::Op &&
         (nxt.text == "(" || nxt.text == "[" || nxt.text == "{" ||
          nxt.text == "-" || nxt.text == "*"));
    if (!expr_start) return false;
    if (nxt.kind == TokKind::Name && nxt.is_keyword &&
        nxt.text != "not" && nxt.text != "lambda" && nxt.text != "await" &&
        nxt.text != "None" && nxt.text != "True" && nxt.text != "False") {
      return false;
    }
    for (size_t i = pos_ + 1; i < toks_.size(); ++i) {
      if (toks_[i].kind == TokKind::Newline ||
          toks_[i].kind == TokKind::EndOfFile) {
        return i > pos_ + 1 && toks_[i - 1].kind == TokKind::Op &&
               toks_[i - 1].text == ":";
      }
    }
    return false;
  }

  NodePtr compound_statement() {
    int line = cur().line;
    NodePtr s;
    if (at_op("@")) {
      s = decorated();
    } else if (at_kw("def")) {
      s = function_def(empty_decorators(), false);
    } else if (at_kw("class")) {
      s = class_def(empty_decorators());
    } else if (at_kw("async")) {
      ++pos_;
      if (at_kw("def")) {
        s = function_def(empty_decorators(), true);
      } else if (at_kw("for")) {
        s = for_statement(true);
      } else if (at_kw("with")) {
        s = with_statement(true);
      } else {
        err("expected 'def', 'for' or 'with' after 'async'");
      }
    } else if (at_kw("if")) {
      s = if_statement();
    } else if (at_kw("while")) {
      s = while_statement();
    } else if (at_kw("for")) {
      s = for_statement(false);
    } else if (at_kw("try")) {
      s = try_statement();
    } else if (at_kw("with")) {
      s = with_statement(false);
    } else if (is_match_statement()) {
      s = match_statement();
    } else {
      err("expected statement");
    }
    auto mut = std::const_pointer_cast<Node>(s);
    mut->line = line;
    return s;
  }

  NodePtr empty_decorators() { return node(K::Block); }

  NodePtr decorated() {
    std::vector<NodePtr> decs;
    while (at_op("@")) {
      ++pos_;
      decs.push_back(expression());
      expect_newline();
      skip_newlines();
    }
    NodePtr dec_block = node(K::Block, "", std::move(decs));
    if (at_kw("def")) return function_def(dec_block, false);
    if (at_kw("async")) {
      ++pos_;
      return function_def(dec_block, true);
    }
    if (at_kw("class")) return class_def(dec_block);
    err("expected function or class after decorators");
  }

  NodePtr function_def(NodePtr decorators, bool is_async) {
    expect_kw("def");
    std::string name = expect_name();
    expect_op("(");
    NodePtr params = param_list(true, ")");
    expect_op(")");
    NodePtr returns = empty_node();
    if (at_op("->")) {
      ++pos_;
      returns = expression();
    }
    NodePtr body = suite();
    return node(is_async ? K::AsyncFunctionDef : K::FunctionDef, name,
                {std::move(decorators), params, returns, body});
  }

  NodePtr class_def(NodePtr decorators) {
    expect_kw("class");
    std::string name = expect_name();
    std::vector<NodePtr> bases;
    if (at_op("(")) {
      ++pos_;
      while (!at_op(")")) {
        bases.push_back(call_argument());
        if (!at_op(",")) break;
        ++pos_;
      }
      expect_op(")");
    }
    NodePtr body = suite();
    return node(K::ClassDef, name,
                {std::move(decorators), node(K::Block, "", std::move(bases)),
                 body});
  }

  // annotations=false for lambda parameter lists.
  NodePtr param_list(bool annotations, const char* terminator) {
    std::vector<NodePtr> params;
    while (!at_op(terminator)) {
      if (at_op("/")) {
        ++pos_;
        params.push_back(node(K::SlashMarker));
      } else if (at_op("*")) {
        ++pos_;
        if (cur().kind == TokKind::Name && !cur().is_keyword) {
          std::string n = expect_name();
          NodePtr ann = empty_node();
          if (annotations && at_op(":")) {
            ++pos_;
            ann = expression();
          }
          params.push_back(node(K::StarParam, n, {ann}));
        } else {
          params.push_back(node(K::StarMarker));
        }
      } else if (at_op("**")) {
        ++pos_;
        std::string n = expect_name();
        NodePtr ann = empty_node();
        if (annotations && at_op(":")) {
          ++pos_;
          ann = expression();
        }
        params.push_back(node(K::DoubleStarParam, n, {ann}));
      } else {
        std::string n = expect_name();
        NodePtr ann = empty_node(), def = empty_node();
        if (annotations && at_op(":")) {
          ++pos_;
          ann = expression();
        }
        if (at_op("=")) {
          ++pos_;
          def = expression();
        }
        params.push_back(node(K::Param, n, {ann, def}));
      }
      if (!at_op(",")) break;
      ++pos_;
    }
    return node(K::ParamList, "", std::move(params));
  }

  NodePtr suite() {
    expect_op(":");
    if (at(TokKind::Newline)) {
      ++pos_;
      if (!at(TokKind::Indent)) err("expected an indented block");
      ++pos_;
      std::vector<NodePtr> stmts;
      while (!at(TokKind::Dedent) && !at(TokKind::EndOfFile)) {
        parse_statement(stmts);
      }
      if (at(TokKind::Dedent)) ++pos_;
      if (stmts.empty()) err("expected an indented block");
      return node(K::Block, "", std::move(stmts));
    }
    std::vector<NodePtr> stmts;
    simple_statement_line(stmts);
    return node(K::Block, "", std::move(stmts));
  }

  NodePtr if_statement() {
    expect_kw("if");
    NodePtr cond = namedexpr();
    NodePtr body = suite();
    NodePtr orelse = empty_node();
    if (at_kw("elif")) {
      // Re-enter as a nested If inside the else block.
      toks_[pos_].text = "if";
      orelse = node(K::Block, "", {if_statement()});
    } else if (at_kw("else")) {
      ++pos_;
      orelse = suite();
    }
    return node(K::If, "", {cond, body, orelse});
  }

  NodePtr while_statement() {
    expect_kw("while");
    NodePtr cond = namedexpr();
    NodePtr body = suite();
    NodePtr orelse = empty_node();
    if (at_kw("else")) {
      ++pos_;
      orelse = suite();
    }
    return node(K::While, "", {cond, body, orelse});
  }

  NodePtr for_statement(bool is_async) {
    expect_kw("for");
    NodePtr target = target_list("in");
    expect_kw("in");
    NodePtr iter = testlist(false);
    NodePtr body = suite();
    NodePtr orelse = empty_node();
    if (at_kw("else")) {
      ++pos_;
      orelse = suite();
    }
    return node(is_async ? K::AsyncFor : K::For, "",
                {target, iter, body, orelse});
  }

  NodePtr try_statement() {
    expect_kw("try");
    NodePtr body = suite();
    std::vector<NodePtr> handlers;
    while (at_kw("except")) {
      ++pos_;
      std::string star;
      if (at_op("*")) {
        ++pos_;
        star = "*";
      }
      NodePtr type = empty_node();
      std::string name;
      if (!at_op(":")) {
        type = expression();
        if (at_kw("as")) {
          ++pos_;
          name = expect_name();
        }
      }
      NodePtr hbody = suite();
      handlers.push_back(node(K::ExceptHandler, name, {type, hbody}, star));
    }
    NodePtr orelse = empty_node();
    if (at_kw("else")) {
      ++pos_;
      orelse = suite();
    }
    NodePtr fin = empty_node();
    if (at_kw("finally")) {
      ++pos_;
      fin = suite();
    }
    if (handlers.empty() && fin->kind == K::Empty) {
      err("expected 'except' or 'finally' after 'try' body");
    }
    return node(K::Try, "",
                {body, node(K::Block, "", std::move(handlers)), orelse, fin});
  }

  NodePtr with_item() {
    NodePtr ctx = expression();
    NodePtr target = empty_node();
    if (at_kw("as")) {
      ++pos_;
      target = primary_target();
    }
    return node(K::WithItem, "", {ctx, target});
  }

  NodePtr with_statement(bool is_async) {
    expect_kw("with");
    std::vector<NodePtr> items;
    // Parenthesized with-item group: try it, back off on failure.
    if (at_op("(")) {
      size_t save = pos_;
      bool ok = true;
      try {
        ++pos_;
        std::vector<NodePtr> grouped;
        grouped.push_back(with_item());
        while (at_op(",")) {
          ++pos_;
          if (at_op(")")) break;
          grouped.push_back(with_item());
        }
        if (at_op(")") && peek().kind == TokKind::Op && peek().text == ":") {
          ++pos_;
          items = std::move(grouped);
        } else {
          ok = false;
        }
      } catch (const SyntaxError&) {
        ok = false;
      }
      if (!ok) {
        pos_ = save;
        items.clear();
      }
    }
    if (items.empty()) {
      items.push_back(with_item());
      while (at_op(",")) {
        ++pos_;
        items.push_back(with_item());
      }
    }
    NodePtr body = suite();
    items.push_back(body);
    return node(is_async ? K::AsyncWith : K::With, "", std::move(items));
  }

  NodePtr match_statement() {
    ++pos_;  // 'match'
    NodePtr subject = testlist(true);
    expect_op(":");
    expect_newline();
    if (!at(TokKind::Indent)) err("expected an indented block");
    ++pos_;
    std::vector<NodePtr> cases;
    while (at_name("case")) {
      ++pos_;
      NodePtr pat = match_pattern();
      NodePtr guard = empty_node();
      if (at_kw("if")) {
        ++pos_;
        guard = namedexpr();
      }
      NodePtr body = suite();
      cases.push_back(node(K::MatchCase, "", {pat, guard, body}));
    }
    if (at(TokKind::Dedent)) ++pos_;
    if (cases.empty()) err("expected at least one 'case' block");
    std::vector<NodePtr> ch = {subject};
    for (auto& c : cases) ch.push_back(std::move(c));
    return node(K::Match, "", std::move(ch));
  }

  // Patterns are parsed with the expression grammar plus `as` capture; this
  // keeps match statements printable and round-trip stable without a full
  // pattern grammar.
  NodePtr match_pattern() {
    NodePtr p = or_test();
    if (at_op(",")) {
      std::vector<NodePtr> elts = {p};
      while (at_op(",")) {
        ++pos_;
        if (at_op(":") || at_kw("if")) break;
        elts.push_back(or_test());
      }
      p = node(K::TupleExpr, "", std::move(elts));
    }
    if (at_kw("as")) {
      ++pos_;
      p = node(K::WithItem, "", {p, node(K::Name, expect_name())});
    }
    return p;
  }

  NodePtr target_list(const char* stop_kw) {
    std::vector<NodePtr> elts;
    elts.push_back(target_atom());
    bool trailing_comma = false;
    while (at_op(",")) {
      ++pos_;
      if (at_kw(stop_kw) || at_op("=") || ends_expression()) {
        trailing_comma = true;
        break;
      }
      elts.push_back(target_atom());
    }
    if (elts.size() == 1 && !trailing_comma) return elts[0];
    return node(K::TupleExpr, "", std::move(elts));
  }

  NodePtr target_atom() {
    if (at_op("*")) {
      ++pos_;
      return node(K::Starred, "", {target_atom()});
    }
    if (at_op("(") || at_op("[")) {
      bool list = at_op("[");
      ++pos_;
      std::vector<NodePtr> elts;
      const char* closer = list ? "]" : ")";
      while (!at_op(closer)) {
        elts.push_back(target_atom());
        if (!at_op(",")) break;
        ++pos_;
      }
      expect_op(closer);
      if (!list && elts.size() == 1) return elts[0];
      return node(list ? K::ListExpr : K::TupleExpr, "", std::move(elts));
    }
    return primary_target();
  }

  // name, attribute or subscript target.
  NodePtr primary_target() {
    NodePtr base = postfix_expression();
    return base;
  }

  // ---- expressions ----

  NodePtr yield_expression() {
    expect_kw("yield");
    if (at_kw("from")) {
      ++pos_;
      return node(K::YieldFrom, "", {expression()});
    }
    if (ends_expression() || at_op(",")) {
      return node(K::Yield, "", {empty_node()});
    }
    return node(K::Yield, "", {testlist(true)});
  }

  // testlist: expr (',' expr)* [','] — a bare tuple when >1 element or a
  // trailing comma is present. allow_star admits starred elements.
  NodePtr testlist(bool allow_star) {
    NodePtr first = allow_star ? star_or_expr() : namedexpr();
    if (!at_op(",")) return first;
    std::vector<NodePtr> elts = {first};
    while (at_op(",")) {
      ++pos_;
      if (ends_expression() || at_kw("in")) break;
      elts.push_back(allow_star ? star_or_expr() : namedexpr());
    }
    return node(K::TupleExpr, "", std::move(elts));
  }

  NodePtr star_or_expr() {
    if (at_op("*")) {
      ++pos_;
      return node(K::Starred, "", {or_test()});
    }
    return namedexpr();
  }

  NodePtr namedexpr() {
    if (cur().kind == TokKind::Name && !cur().is_keyword &&
        peek().kind == TokKind::Op && peek().text == ":=") {
      NodePtr target = node(K::Name, take().text);
      ++pos_;  // ':='
      return node(K::NamedExpr, "", {target, expression()});
    }
    return expression();
  }

  NodePtr expression() {
    if (at_kw("lambda")) {
      ++pos_;
      NodePtr params = param_list(false, ":");
      expect_op(":");
      NodePtr body = expression();
      return node(K::Lambda, "", {params, body});
    }
    NodePtr body = or_test();
    if (at_kw("if")) {
      ++pos_;
      NodePtr cond = or_test();
      expect_kw("else");
      NodePtr orelse = expression();
      return node(K::IfExp, "", {body, cond, orelse});
    }
    return body;
  }

  NodePtr or_test() {
    NodePtr lhs = and_test();
    while (at_kw("or")) {
      ++pos_;
      lhs = node(K::BoolOp, "or", {lhs, and_test()});
    }
    return lhs;
  }

  NodePtr and_test() {
    NodePtr lhs = not_test();
    while (at_kw("and")) {
      ++pos_;
      lhs = node(K::BoolOp, "and", {lhs, not_test()});
    }
    return lhs;
  }

  NodePtr not_test() {
    if (at_kw("not")) {
      ++pos_;
      return node(K::UnaryOp, "not", {not_test()});
    }
    return comparison();
  }

  NodePtr comparison() {
    NodePtr first = bitor_expr();
    std::vector<NodePtr> ch = {first};
    while (true) {
      std::string op;
      if (at_op("<") || at_op(">") || at_op("==") || at_op("!=") ||
          at_op("<=") || at_op(">=")) {
        op = take().text;
      } else if (at_kw("in")) {
        ++pos_;
        op = "in";
      } else if (at_kw("not") && peek().kind == TokKind::Name &&
                 peek().is_keyword && peek().text == "in") {
        pos_ += 2;
        op = "not in";
      } else if (at_kw("is")) {
        ++pos_;
        if (at_kw("not")) {
          ++pos_;
          op = "is not";
        } else {
          op = "is";
        }
      } else {
        break;
      }
      ch.push_back(node(K::CmpOp, op, {bitor_expr()}));
    }
    if (ch.size() == 1) return first;
    return node(K::Compare, "", std::move(ch));
  }

  NodePtr bitor_expr() {
    NodePtr lhs = bitxor_expr();
    while (at_op("|")) {
      ++pos_;
      lhs = node(K::BinOp, "|", {lhs, bitxor_expr()});
    }
    return lhs;
  }

  NodePtr bitxor_expr() {
    NodePtr lhs = bitand_expr();
    while (at_op("^")) {
      ++pos_;
      lhs = node(K::BinOp, "^", {lhs, bitand_expr()});
    }
    return lhs;
  }

  NodePtr bitand_expr() {
    NodePtr lhs = shift_expr();
    while (at_op("&")) {
      ++pos_;
      lhs = node(K::BinOp, "&", {lhs, shift_expr()});
    }
    return lhs;
  }

  NodePtr shift_expr() {
    NodePtr lhs = arith_expr();
    while (at_op("<<") || at_op(">>")) {
      std::string op = take().text;
      lhs = node(K::BinOp, op, {lhs, arith_expr()});
    }
    return lhs;
  }

  NodePtr arith_expr() {
    NodePtr lhs = term();
    while (at_op("+") || at_op("-")) {
      std::string op = take().text;
      lhs = node(K::BinOp, op, {lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (at_op("*") || at_op("/") || at_op("//") || at_op("%") ||
           at_op("@")) {
      std::string op = take().text;
      lhs = node(K::BinOp, op, {lhs, factor()});
    }
    return lhs;
  }

  NodePtr factor() {
    if (at_op("+") || at_op("-") || at_op("~")) {
      std::string op = take().text;
      return node(K::UnaryOp, op, {factor()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = awaited_postfix();
    if (at_op("**")) {
      ++pos_;
      return node(K::BinOp, "**", {base, factor()});
    }
    return base;
  }

  NodePtr awaited_postfix() {
    if (at_kw("await")) {
      ++pos_;
      return node(K::Await, "", {awaited_postfix()});
    }
    return postfix_expression();
  }

  NodePtr postfix_expression() {
    NodePtr e = atom();
    while (true) {
      if (at_op("(")) {
        ++pos_;
        std::vector<NodePtr> args = {e};
        bool first_arg = true;
        while (!at_op(")")) {
          NodePtr a = call_argument();
          // Generator expression as sole unparenthesized argument.
          if (first_arg && at_kw("for") && a->kind != K::Keyword &&
              a->kind != K::Starred && a->kind != K::DoubleStarred) {
            a = comprehension_tail(K::GeneratorExp, {a});
            args.push_back(a);
            break;
          }
          args.push_back(a);
          first_arg = false;
          if (!at_op(",")) break;
          ++pos_;
        }
        expect_op(")");
        e = node(K::Call, "", std::move(args));
      } else if (at_op("[")) {
        ++pos_;
        NodePtr idx = subscript_list();
        expect_op("]");
        e = node(K::Subscript, "", {e, idx});
      } else if (at_op(".")) {
        ++pos_;
        e = node(K::Attribute, expect_name(), {e});
      } else {
        break;
      }
    }
    return e;
  }

  NodePtr call_argument() {
    if (at_op("*")) {
      ++pos_;
      return node(K::Starred, "", {expression()});
    }
    if (at_op("**")) {
      ++pos_;
      return node(K::DoubleStarred, "", {expression()});
    }
    if (cur().kind == TokKind::Name && !cur().is_keyword &&
        peek().kind == TokKind::Op && peek().text == "=") {
      std::string name = take().text;
      ++pos_;  // '='
      return node(K::Keyword, name, {expression()});
    }
    return namedexpr();
  }

  NodePtr subscript_item() {
    NodePtr lower = empty_node();
    if (!at_op(":")) {
      NodePtr e = star_or_expr();
      if (!at_op(":")) return e;
      lower = e;
    }
    expect_op(":");
    NodePtr upper = empty_node(), step = empty_node();
    if (!at_op(":") && !at_op("]") && !at_op(",")) upper = expression();
    if (at_op(":")) {
      ++pos_;
      if (!at_op("]") && !at_op(",")) step = expression();
    }
    return node(K::Slice, "", {lower, upper, step});
  }

  NodePtr subscript_list() {
    NodePtr first = subscript_item();
    if (!at_op(",")) return first;
    std::vector<NodePtr> elts = {first};
    while (at_op(",")) {
      ++pos_;
      if (at_op("]")) break;
      elts.push_back(subscript_item());
    }
    return node(K::TupleExpr, "", std::move(elts));
  }

  // Builds a comprehension node of `kind` whose leading children are given;
  // the cursor sits on 'for' (or 'async').
  NodePtr comprehension_tail(K kind, std::vector<NodePtr> lead) {
    std::vector<NodePtr> ch = std::move(lead);
    while (at_kw("for") || (at_kw("async") && peek().is_keyword &&
                            peek().text == "for")) {
      std::string mode;
      if (at_kw("async")) {
        ++pos_;
        mode = "async";
      }
      expect_kw("for");
      NodePtr target = target_list("in");
      expect_kw("in");
      NodePtr iter = or_test();
      std::vector<NodePtr> comp = {target, iter};
      while (at_kw("if")) {
        ++pos_;
        comp.push_back(or_test_no_cond());
      }
      ch.push_back(node(K::CompFor, mode, std::move(comp)));
    }
    return node(kind, "", std::move(ch));
  }

  // Comprehension conditions must not swallow a following `else`, so no
  // ternary here.
  NodePtr or_test_no_cond() { return or_test(); }

  NodePtr atom() {
    const Token& t = cur();
    switch (t.kind) {
      case TokKind::Name: {
        if (t.is_keyword) {
          if (t.text == "True" || t.text == "False" || t.text == "None") {
            return node(K::ConstLit, take().text);
          }
          if (t.text == "lambda") return expression();
          if (t.text == "not") return not_test();
          err("unexpected keyword '" + t.text + "'");
        }
        return node(K::Name, take().text);
      }
      case TokKind::Number:
        return node(K::NumberLit, take().text);
      case TokKind::String:
      case TokKind::FString:
        return string_group();
      case TokKind::Op:
        break;
      default:
        err("unexpected token");
    }
    if (at_op("...")) {
      ++pos_;
      return node(K::ConstLit, "...");
    }
    if (at_op("(")) {
      ++pos_;
      if (at_op(")")) {
        ++pos_;
        return node(K::TupleExpr);
      }
      if (at_kw("yield")) {
        NodePtr y = yield_expression();
        expect_op(")");
        return y;
      }
      NodePtr first = star_or_expr();
      if (at_kw("for") || (at_kw("async") && peek().text == "for")) {
        NodePtr g = comprehension_tail(K::GeneratorExp, {first});
        expect_op(")");
        return g;
      }
      if (at_op(",")) {
        std::vector<NodePtr> elts = {first};
        while (at_op(",")) {
          ++pos_;
          if (at_op(")")) break;
          elts.push_back(star_or_expr());
        }
        expect_op(")");
        return node(K::TupleExpr, "", std::move(elts));
      }
      expect_op(")");
      return first;
    }
    if (at_op("[")) {
      ++pos_;
      if (at_op("]")) {
        ++pos_;
        return node(K::ListExpr);
      }
      NodePtr first = star_or_expr();
      if (at_kw("for") || (at_kw("async") && peek().text == "for")) {
        NodePtr c = comprehension_tail(K::ListComp, {first});
        expect_op("]");
        return c;
      }
      std::vector<NodePtr> elts = {first};
      while (at_op(",")) {
        ++pos_;
        if (at_op("]")) break;
        elts.push_back(star_or_expr());
      }
      expect_op("]");
      return node(K::ListExpr, "", std::move(elts));
    }
    if (at_op("{")) {
      ++pos_;
      if (at_op("}")) {
        ++pos_;
        return node(K::DictExpr);
      }
      if (at_op("**")) {
        ++pos_;
        std::vector<NodePtr> items;
        items.push_back(node(K::DictUnpack, "", {or_test()}));
        while (at_op(",")) {
          ++pos_;
          if (at_op("}")) break;
          items.push_back(dict_item());
        }
        expect_op("}");
        return node(K::DictExpr, "", std::move(items));
      }
      NodePtr first = star_or_expr();
      if (at_op(":")) {
        ++pos_;
        NodePtr value = expression();
        if (at_kw("for") || (at_kw("async") && peek().text == "for")) {
          NodePtr c = comprehension_tail(K::DictComp, {first, value});
          expect_op("}");
          return c;
        }
        std::vector<NodePtr> items;
        items.push_back(node(K::DictItem, "", {first, value}));
        while (at_op(",")) {
          ++pos_;
          if (at_op("}")) break;
          items.push_back(dict_item());
        }
        expect_op("}");
        return node(K::DictExpr, "", std::move(items));
      }
      if (at_kw("for") || (at_kw("async") && peek().text == "for")) {
        NodePtr c = comprehension_tail(K::SetComp, {first});
        expect_op("}");
        return c;
      }
      std::vector<NodePtr> elts = {first};
      while (at_op(",")) {
        ++pos_;
        if (at_op("}")) break;
        elts.push_back(star_or_expr());
      }
      expect_op("}");
      return node(K::SetExpr, "", std::move(elts));
    }
    err("unexpected token '" + t.text + "'");
  }

  NodePtr dict_item() {
    if (at_op("**")) {
      ++pos_;
      return node(K::DictUnpack, "", {or_test()});
    }
    NodePtr key = expression();
    expect_op(":");
    return node(K::DictItem, "", {key, expression()});
  }

  NodePtr string_group() {
    std::vector<NodePtr> parts;
    while (at(TokKind::String) || at(TokKind::FString)) {
      if (at(TokKind::String)) {
        parts.push_back(node(K::StringLit, take().text));
      } else {
        parts.push_back(parse_fstring(take()));
      }
    }
    if (parts.size() == 1) return parts[0];
    return node(K::StringConcat, "", std::move(parts));
  }

  NodePtr parse_fstring(const Token& tok);
};

// ---- f-string interior parsing ----
//
// The token text carries prefix + quotes. Interpolation fields are re-parsed
// with a fresh expression parser; format specs may themselves contain fields.
NodePtr Parser::parse_fstring(const Token& tok) {
  const std::string& raw = tok.text;
  size_t i = 0;
  std::string prefix;
  while (i < raw.size() && raw[i] != '"' && raw[i] != '\'') prefix += raw[i++];
  char quote = raw[i];
  int nquotes = (i + 2 < raw.size() && raw[i + 1] == quote &&
                 raw[i + 2] == quote)
                    ? 3
                    : 1;
  std::string quotes(static_cast<size_t>(nquotes), quote);
  size_t body_begin = i + nquotes;
  size_t body_end = raw.size() - nquotes;

  std::vector<NodePtr> parts;
  std::string text;
  auto flush_text = [&] {
    if (!text.empty()) {
      parts.push_back(node(K::FStringText, text));
      text.clear();
    }
  };

  size_t p = body_begin;
  while (p < body_end) {
    char c = raw[p];
    if (c == '{' && p + 1 < body_end && raw[p + 1] == '{') {
      text += "{{";
      p += 2;
      continue;
    }
    if (c == '}' && p + 1 < body_end && raw[p + 1] == '}') {
      text += "}}";
      p += 2;
      continue;
    }
    if (c == '}') {
      throw SyntaxError(tok.line, tok.col, "single '}' in f-string");
    }
    if (c != '{') {
      text += c;
      ++p;
      continue;
    }
    flush_text();
    ++p;  // consume '{'
    // Scan the field: expression [=] [!conv] [:spec] '}'. Nested brackets
    // and strings inside the expression are skipped over.
    size_t expr_start = p;
    int depth = 0;
    size_t expr_end = std::string::npos;
    char conversion = '\0';
    bool self_doc = false;
    size_t spec_start = std::string::npos;
    while (p < body_end) {
      char d = raw[p];
      if (d == '\'' || d == '"') {
        char q = d;
        ++p;
        while (p < body_end && raw[p] != q) {
          if (raw[p] == '\\') ++p;
          ++p;
        }
        ++p;
        continue;
      }
      if (d == '(' || d == '[' || d == '{') ++depth;
      if (d == ')' || d == ']' || d == '}') {
        if (depth == 0 && d == '}') break;
        --depth;
      }
      if (depth == 0 && d == '=' && p + 1 < body_end && raw[p + 1] != '=' &&
          (p == expr_start || (raw[p - 1] != '=' && raw[p - 1] != '!' &&
                               raw[p - 1] != '<' && raw[p - 1] != '>'))) {
        // Either self-documenting '=' or start of spec/conv follows.
        char nxt = raw[p + 1];
        if (nxt == '}' || nxt == ':' || nxt == '!') {
          expr_end = p;
          self_doc = true;
          ++p;
          continue;
        }
      }
      if (depth == 0 && d == '!' && p + 1 < body_end && raw[p + 1] != '=') {
        if (expr_end == std::string::npos) expr_end = p;
        conversion = raw[p + 1];
        p += 2;
        continue;
      }
      if (depth == 0 && d == ':') {
        if (expr_end == std::string::npos) expr_end = p;
        spec_start = p + 1;
        // Spec runs to the matching '}' at depth 0.
        int sdepth = 0;
        ++p;
        while (p < body_end) {
          char e = raw[p];
          if (e == '{') ++sdepth;
          if (e == '}') {
            if (sdepth == 0) break;
            --sdepth;
          }
          ++p;
        }
        break;
      }
      ++p;
    }
    if (p >= body_end) {
      throw SyntaxError(tok.line, tok.col, "unterminated f-string field");
    }
    if (expr_end == std::string::npos) expr_end = p;
    std::string expr_text = raw.substr(expr_start, expr_end - expr_start);
    NodePtr expr;
    try {
      Parser sub(tokenize(expr_text));
      expr = sub.parse_single_expression();
    } catch (const SyntaxError&) {
      throw SyntaxError(tok.line, tok.col,
                        "invalid expression in f-string field");
    }
    NodePtr spec = empty_node();
    if (spec_start != std::string::npos) {
      std::string spec_text = raw.substr(spec_start, p - spec_start);
      // Represent the spec itself as a mini f-string body.
      Token spec_tok = tok;
      spec_tok.text = "f'" + spec_text + "'";
      spec = parse_fstring(spec_tok);
    }
    std::string conv = conversion ? std::string(1, conversion) : "";
    parts.push_back(node(K::FStringField, conv, {expr, spec},
                         self_doc ? "=" : ""));
    ++p;  // consume '}'
  }
  flush_text();
  return node(K::FString, quotes, std::move(parts), prefix);
}

}  // namespace

NodePtr parse(const std::string& source) {
  Parser p(tokenize(source));
  return p.parse_module();
}

NodePtr parse_expression(const std::string& text) {
  Parser p(tokenize(text));
  return p.parse_single_expression();
}

}  // namespace mutabench::py
