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

#include "mutabench/printer.hpp"

#include <sstream>
#include <stdexcept>

namespace mutabench::py {
namespace {

using K = NodeKind;

int binop_prec(const std::string& op) {
  if (op == "|") return 6;
  if (op == "^") return 7;
  if (op == "&") return 8;
  if (op == "<<" || op == ">>") return 9;
  if (op == "+" || op == "-") return 10;
  if (op == "*" || op == "/" || op == "//" || op == "%" || op == "@")
    return 11;
  if (op == "**") return 13;
  throw std::logic_error("unknown binary operator " + op);
}

int prec_of(const NodePtr& e) {
  switch (e->kind) {
    case K::NamedExpr:
    case K::Yield:
    case K::YieldFrom:
      return 0;
    case K::Lambda:
    case K::IfExp:
      return 1;
    case K::BoolOp:
      return e->value == "or" ? 2 : 3;
    case K::UnaryOp:
      return e->value == "not" ? 4 : 12;
    case K::Compare:
      return 5;
    case K::BinOp:
      return binop_prec(e->value);
    case K::Await:
      return 14;
    default:
      return 15;
  }
}

class Printer {
 public:
  std::string module(const NodePtr& tree) {
    for (const auto& s : tree->children) stmt(s, 0);
    return out_.str();
  }

  std::string expression(const NodePtr& e) {
    expr(e, 1);
    return out_.str();
  }

 private:
  std::ostringstream out_;

  void indent(int level) {
    for (int i = 0; i < level; ++i) out_ << "    ";
  }

  void block(const NodePtr& b, int level) {
    for (const auto& s : b->children) stmt(s, level);
  }

  void stmt(const NodePtr& s, int level) {
    switch (s->kind) {
      case K::FunctionDef:
      case K::AsyncFunctionDef: {
        for (const auto& d : s->children[0]->children) {
          indent(level);
          out_ << "@";
          expr(d, 1);
          out_ << "\n";
        }
        indent(level);
        if (s->kind == K::AsyncFunctionDef) out_ << "async ";
        out_ << "def " << s->value << "(";
        params(s->children[1]);
        out_ << ")";
        if (s->children[2]->kind != K::Empty) {
          out_ << " -> ";
          expr(s->children[2], 1);
        }
        out_ << ":\n";
        block(s->children[3], level + 1);
        return;
      }
      case K::ClassDef: {
        for (const auto& d : s->children[0]->children) {
          indent(level);
          out_ << "@";
          expr(d, 1);
          out_ << "\n";
        }
        indent(level);
        out_ << "class " << s->value;
        if (!s->children[1]->children.empty()) {
          out_ << "(";
          bool first = true;
          for (const auto& b : s->children[1]->children) {
            if (!first) out_ << ", ";
            first = false;
            call_arg(b);
          }
          out_ << ")";
        }
        out_ << ":\n";
        block(s->children[2], level + 1);
        return;
      }
      case K::Return: {
        indent(level);
        out_ << "return";
        if (s->children[0]->kind != K::Empty) {
          out_ << " ";
          expr(s->children[0], 1);
        }
        out_ << "\n";
        return;
      }
      case K::Delete: {
        indent(level);
        out_ << "del ";
        exprs(s->children);
        out_ << "\n";
        return;
      }
      case K::Assign: {
        indent(level);
        for (size_t i = 0; i + 1 < s->children.size(); ++i) {
          expr(s->children[i], 1);
          out_ << " = ";
        }
        rhs(s->children.back());
        out_ << "\n";
        return;
      }
      case K::AugAssign: {
        indent(level);
        expr(s->children[0], 1);
        out_ << " " << s->value << "= ";
        rhs(s->children[1]);
        out_ << "\n";
        return;
      }
      case K::AnnAssign: {
        indent(level);
        expr(s->children[0], 1);
        out_ << ": ";
        expr(s->children[1], 1);
        if (s->children[2]->kind != K::Empty) {
          out_ << " = ";
          rhs(s->children[2]);
        }
        out_ << "\n";
        return;
      }
      case K::For:
      case K::AsyncFor: {
        indent(level);
        if (s->kind == K::AsyncFor) out_ << "async ";
        out_ << "for ";
        expr(s->children[0], 1);
        out_ << " in ";
        expr(s->children[1], 1);
        out_ << ":\n";
        block(s->children[2], level + 1);
        else_clause(s->children[3], level);
        return;
      }
      case K::While: {
        indent(level);
        out_ << "while ";
        expr(s->children[0], 1);
        out_ << ":\n";
        block(s->children[1], level + 1);
        else_clause(s->children[2], level);
        return;
      }
      case K::If: {
        if_chain(s, level, /*as_elif=*/false);
        return;
      }
      case K::With:
      case K::AsyncWith: {
        indent(level);
        if (s->kind == K::AsyncWith) out_ << "async ";
        out_ << "with ";
        for (size_t i = 0; i + 1 < s->children.size(); ++i) {
          if (i) out_ << ", ";
          const auto& item = s->children[i];
          expr(item->children[0], 1);
          if (item->children[1]->kind != K::Empty) {
            out_ << " as ";
            expr(item->children[1], 1);
          }
        }
        out_ << ":\n";
        block(s->children.back(), level + 1);
        return;
      }
      case K::Raise: {
        indent(level);
        out_ << "raise";
        if (s->children[0]->kind != K::Empty) {
          out_ << " ";
          expr(s->children[0], 1);
          if (s->children[1]->kind != K::Empty) {
            out_ << " from ";
            expr(s->children[1], 1);
          }
        }
        out_ << "\n";
        return;
      }
      case K::Try: {
        indent(level);
        out_ << "try:\n";
        block(s->children[0], level + 1);
        for (const auto& h : s->children[1]->children) {
          indent(level);
          out_ << "except";
          if (h->aux == "*") out_ << "*";
          if (h->children[0]->kind != K::Empty) {
            out_ << " ";
            expr(h->children[0], 1);
            if (!h->value.empty()) out_ << " as " << h->value;
          }
          out_ << ":\n";
          block(h->children[1], level + 1);
        }
        if (s->children[2]->kind != K::Empty) {
          indent(level);
          out_ << "else:\n";
          block(s->children[2], level + 1);
        }
        if (s->children[3]->kind != K::Empty) {
          indent(level);
          out_ << "finally:\n";
          block(s->children[3], level + 1);
        }
        return;
      }
      case K::Assert: {
        indent(level);
        out_ << "assert ";
        expr(s->children[0], 1);
        if (s->children[1]->kind != K::Empty) {
          out_ << ", ";
          expr(s->children[1], 1);
        }
        out_ << "\n";
        return;
      }
      case K::Import: {
        indent(level);
        out_ << "import ";
        aliases(s->children);
        out_ << "\n";
        return;
      }
      case K::ImportFrom: {
        indent(level);
        out_ << "from ";
        int level_dots = s->aux.empty() ? 0 : std::stoi(s->aux);
        for (int i = 0; i < level_dots; ++i) out_ << ".";
        out_ << s->value << " import ";
        aliases(s->children);
        out_ << "\n";
        return;
      }
      case K::Global:
      case K::Nonlocal: {
        indent(level);
        out_ << (s->kind == K::Global ? "global " : "nonlocal ");
        for (size_t i = 0; i < s->children.size(); ++i) {
          if (i) out_ << ", ";
          out_ << s->children[i]->value;
        }
        out_ << "\n";
        return;
      }
      case K::ExprStmt: {
        indent(level);
        const auto& e = s->children[0];
        if (e->kind == K::Yield || e->kind == K::YieldFrom) {
          yield_expr(e);
        } else {
          expr(e, 1);
        }
        out_ << "\n";
        return;
      }
      case K::Pass:
        indent(level);
        out_ << "pass\n";
        return;
      case K::Break:
        indent(level);
        out_ << "break\n";
        return;
      case K::Continue:
        indent(level);
        out_ << "continue\n";
        return;
      case K::Match: {
        indent(level);
        out_ << "match ";
        expr(s->children[0], 1);
        out_ << ":\n";
        for (size_t i = 1; i < s->children.size(); ++i) {
          const auto& c = s->children[i];
          indent(level + 1);
          out_ << "case ";
          pattern(c->children[0]);
          if (c->children[1]->kind != K::Empty) {
            out_ << " if ";
            expr(c->children[1], 1);
          }
          out_ << ":\n";
          block(c->children[2], level + 2);
        }
        return;
      }
      default:
        throw std::logic_error(std::string("cannot print statement kind ") +
                               kind_name(s->kind));
    }
  }

  void if_chain(const NodePtr& s, int level, bool as_elif) {
    indent(level);
    out_ << (as_elif ? "elif " : "if ");
    expr(s->children[0], 1);
    out_ << ":\n";
    block(s->children[1], level + 1);
    const auto& orelse = s->children[2];
    if (orelse->kind == K::Empty) return;
    if (orelse->children.size() == 1 && orelse->children[0]->kind == K::If) {
      if_chain(orelse->children[0], level, /*as_elif=*/true);
      return;
    }
    indent(level);
    out_ << "else:\n";
    block(orelse, level + 1);
  }

  void else_clause(const NodePtr& orelse, int level) {
    if (orelse->kind == K::Empty) return;
    indent(level);
    out_ << "else:\n";
    block(orelse, level + 1);
  }

  void aliases(const std::vector<NodePtr>& as) {
    for (size_t i = 0; i < as.size(); ++i) {
      if (i) out_ << ", ";
      out_ << as[i]->value;
      if (!as[i]->aux.empty()) out_ << " as " << as[i]->aux;
    }
  }

  void exprs(const std::vector<NodePtr>& es) {
    for (size_t i = 0; i < es.size(); ++i) {
      if (i) out_ << ", ";
      expr(es[i], 1);
    }
  }

  // Assignment right-hand sides may be bare yields.
  void rhs(const NodePtr& e) {
    if (e->kind == K::Yield || e->kind == K::YieldFrom) {
      yield_expr(e);
    } else {
      expr(e, 1);
    }
  }

  void yield_expr(const NodePtr& e) {
    if (e->kind == K::YieldFrom) {
      out_ << "yield from ";
      expr(e->children[0], 1);
      return;
    }
    out_ << "yield";
    if (e->children[0]->kind != K::Empty) {
      out_ << " ";
      expr(e->children[0], 1);
    }
  }

  void params(const NodePtr& plist) {
    bool first = true;
    for (const auto& p : plist->children) {
      if (!first) out_ << ", ";
      first = false;
      switch (p->kind) {
        case K::SlashMarker:
          out_ << "/";
          break;
        case K::StarMarker:
          out_ << "*";
          break;
        case K::StarParam:
          out_ << "*" << p->value;
          annotation(p->children[0]);
          break;
        case K::DoubleStarParam:
          out_ << "**" << p->value;
          annotation(p->children[0]);
          break;
        case K::Param: {
          out_ << p->value;
          bool annotated = p->children[0]->kind != K::Empty;
          annotation(p->children[0]);
          if (p->children[1]->kind != K::Empty) {
            out_ << (annotated ? " = " : "=");
            expr(p->children[1], 1);
          }
          break;
        }
        default:
          throw std::logic_error("bad parameter node");
      }
    }
  }

  void annotation(const NodePtr& ann) {
    if (ann->kind == K::Empty) return;
    out_ << ": ";
    expr(ann, 1);
  }

  void pattern(const NodePtr& p) {
    if (p->kind == K::WithItem) {
      expr(p->children[0], 1);
      out_ << " as " << p->children[1]->value;
      return;
    }
    expr(p, 1);
  }

  void call_arg(const NodePtr& a) {
    switch (a->kind) {
      case K::Keyword:
        out_ << a->value << "=";
        expr(a->children[0], 1);
        return;
      case K::Starred:
        out_ << "*";
        expr(a->children[0], 12);
        return;
      case K::DoubleStarred:
        out_ << "**";
        expr(a->children[0], 12);
        return;
      default:
        expr(a, 1);
        return;
    }
  }

  void comp_clauses(const NodePtr& e, size_t first_clause) {
    for (size_t i = first_clause; i < e->children.size(); ++i) {
      const auto& cf = e->children[i];
      out_ << (cf->value == "async" ? " async for " : " for ");
      expr(cf->children[0], 1);
      out_ << " in ";
      expr(cf->children[1], 2);
      for (size_t j = 2; j < cf->children.size(); ++j) {
        out_ << " if ";
        expr(cf->children[j], 2);
      }
    }
  }

  void expr(const NodePtr& e, int min_prec) {
    int p = prec_of(e);
    bool paren = p < min_prec;
    if (paren) out_ << "(";
    expr_inner(e);
    if (paren) out_ << ")";
  }

  void expr_inner(const NodePtr& e) {
    switch (e->kind) {
      case K::Name:
      case K::NumberLit:
      case K::StringLit:
      case K::ConstLit:
        out_ << e->value;
        return;
      case K::FString:
        fstring(e, /*with_quotes=*/true);
        return;
      case K::StringConcat: {
        for (size_t i = 0; i < e->children.size(); ++i) {
          if (i) out_ << " ";
          expr_inner(e->children[i]);
        }
        return;
      }
      case K::TupleExpr: {
        out_ << "(";
        for (size_t i = 0; i < e->children.size(); ++i) {
          if (i) out_ << ", ";
          star_item(e->children[i]);
        }
        if (e->children.size() == 1) out_ << ",";
        out_ << ")";
        return;
      }
      case K::ListExpr: {
        out_ << "[";
        for (size_t i = 0; i < e->children.size(); ++i) {
          if (i) out_ << ", ";
          star_item(e->children[i]);
        }
        out_ << "]";
        return;
      }
      case K::SetExpr: {
        out_ << "{";
        for (size_t i = 0; i < e->children.size(); ++i) {
          if (i) out_ << ", ";
          star_item(e->children[i]);
        }
        out_ << "}";
        return;
      }
      case K::DictExpr: {
        out_ << "{";
        for (size_t i = 0; i < e->children.size(); ++i) {
          if (i) out_ << ", ";
          const auto& item = e->children[i];
          if (item->kind == K::DictUnpack) {
            out_ << "**";
            expr(item->children[0], 6);
          } else {
            expr(item->children[0], 1);
            out_ << ": ";
            expr(item->children[1], 1);
          }
        }
        out_ << "}";
        return;
      }
      case K::Starred:
        out_ << "*";
        expr(e->children[0], 12);
        return;
      case K::DoubleStarred:
        out_ << "**";
        expr(e->children[0], 12);
        return;
      case K::UnaryOp: {
        if (e->value == "not") {
          out_ << "not ";
          // Non-atomic operands keep explicit parentheses.
          if (prec_of(e->children[0]) >= 15) {
            expr(e->children[0], 15);
          } else {
            out_ << "(";
            expr(e->children[0], 1);
            out_ << ")";
          }
          return;
        }
        out_ << e->value;
        expr(e->children[0], 12);
        return;
      }
      case K::BinOp: {
        int p = binop_prec(e->value);
        if (e->value == "**") {
          expr(e->children[0], p + 1);
          out_ << " ** ";
          expr(e->children[1], p);
        } else {
          expr(e->children[0], p);
          out_ << " " << e->value << " ";
          expr(e->children[1], p + 1);
        }
        return;
      }
      case K::BoolOp: {
        int p = prec_of(e);
        expr(e->children[0], p);
        out_ << " " << e->value << " ";
        expr(e->children[1], p + 1);
        return;
      }
      case K::Compare: {
        expr(e->children[0], 6);
        for (size_t i = 1; i < e->children.size(); ++i) {
          out_ << " " << e->children[i]->value << " ";
          expr(e->children[i]->children[0], 6);
        }
        return;
      }
      case K::Lambda: {
        out_ << "lambda";
        if (!e->children[0]->children.empty()) {
          out_ << " ";
          params(e->children[0]);
        }
        out_ << ": ";
        expr(e->children[1], 1);
        return;
      }
      case K::IfExp: {
        expr(e->children[0], 2);
        out_ << " if ";
        expr(e->children[1], 2);
        out_ << " else ";
        expr(e->children[2], 1);
        return;
      }
      case K::NamedExpr: {
        expr(e->children[0], 15);
        out_ << " := ";
        expr(e->children[1], 1);
        return;
      }
      case K::Call: {
        expr(e->children[0], 15);
        out_ << "(";
        if (e->children.size() == 2 &&
            e->children[1]->kind == K::GeneratorExp) {
          genexp_body(e->children[1]);
        } else {
          for (size_t i = 1; i < e->children.size(); ++i) {
            if (i > 1) out_ << ", ";
            call_arg(e->children[i]);
          }
        }
        out_ << ")";
        return;
      }
      case K::Attribute: {
        if (e->children[0]->kind == K::NumberLit) {
          out_ << "(" << e->children[0]->value << ")";
        } else {
          expr(e->children[0], 15);
        }
        out_ << "." << e->value;
        return;
      }
      case K::Subscript: {
        expr(e->children[0], 15);
        out_ << "[";
        subscript(e->children[1]);
        out_ << "]";
        return;
      }
      case K::Slice:
        slice(e);
        return;
      case K::ListComp: {
        out_ << "[";
        expr(e->children[0], 2);
        comp_clauses(e, 1);
        out_ << "]";
        return;
      }
      case K::SetComp: {
        out_ << "{";
        expr(e->children[0], 2);
        comp_clauses(e, 1);
        out_ << "}";
        return;
      }
      case K::GeneratorExp: {
        out_ << "(";
        genexp_body(e);
        out_ << ")";
        return;
      }
      case K::DictComp: {
        out_ << "{";
        expr(e->children[0], 2);
        out_ << ": ";
        expr(e->children[1], 2);
        comp_clauses(e, 2);
        out_ << "}";
        return;
      }
      case K::Yield:
      case K::YieldFrom:
        yield_expr(e);
        return;
      case K::Await:
        out_ << "await ";
        expr(e->children[0], 14);
        return;
      default:
        throw std::logic_error(std::string("cannot print expression kind ") +
                               kind_name(e->kind));
    }
  }

  // Tuple/list/set elements may be starred.
  void star_item(const NodePtr& e) {
    if (e->kind == K::Starred) {
      out_ << "*";
      expr(e->children[0], 12);
    } else {
      expr(e, 1);
    }
  }

  void subscript(const NodePtr& idx) {
    if (idx->kind == K::Slice) {
      slice(idx);
      return;
    }
    if (idx->kind == K::TupleExpr && !idx->children.empty()) {
      for (size_t i = 0; i < idx->children.size(); ++i) {
        if (i) out_ << ", ";
        const auto& el = idx->children[i];
        if (el->kind == K::Slice) {
          slice(el);
        } else {
          star_item(el);
        }
      }
      if (idx->children.size() == 1) out_ << ",";
      return;
    }
    expr(idx, 1);
  }

  void slice(const NodePtr& s) {
    if (s->children[0]->kind != K::Empty) expr(s->children[0], 1);
    out_ << ":";
    if (s->children[1]->kind != K::Empty) expr(s->children[1], 1);
    if (s->children[2]->kind != K::Empty) {
      out_ << ":";
      expr(s->children[2], 1);
    }
  }

  void genexp_body(const NodePtr& g) {
    expr(g->children[0], 2);
    comp_clauses(g, 1);
  }

  void fstring(const NodePtr& e, bool with_quotes) {
    if (with_quotes) {
      out_ << (e->aux.empty() ? "f" : e->aux) << e->value;
    }
    for (const auto& part : e->children) {
      if (part->kind == K::FStringText) {
        out_ << part->value;
        continue;
      }
      out_ << "{";
      expr(part->children[0], 1);
      if (part->aux == "=") out_ << "=";
      if (!part->value.empty()) out_ << "!" << part->value;
      if (part->children[1]->kind != K::Empty) {
        out_ << ":";
        fstring(part->children[1], /*with_quotes=*/false);
      }
      out_ << "}";
    }
    if (with_quotes) out_ << e->value;
  }
};

}  // namespace

std::string emit(const NodePtr& tree) {
  Printer pr;
  return pr.module(tree);
}

std::string emit_expression(const NodePtr& expr) {
  Printer pr;
  return pr.expression(expr);
}

}  // namespace mutabench::py
