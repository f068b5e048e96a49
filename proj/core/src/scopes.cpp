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

#include "mutabench/scopes.hpp"

#include <unordered_set>

namespace mutabench::py {

bool is_python_builtin(const std::string& name) {
  static const std::unordered_set<std::string> builtins = {
      "abs", "aiter", "all", "anext", "any", "ascii", "bin", "bool",
      "breakpoint", "bytearray", "bytes", "callable", "chr", "classmethod",
      "compile", "complex", "copyright", "credits", "delattr", "dict", "dir",
      "divmod", "enumerate", "eval", "exec", "exit", "filter", "float",
      "format", "frozenset", "getattr", "globals", "hasattr", "hash", "help",
      "hex", "id", "input", "int", "isinstance", "issubclass", "iter", "len",
      "license", "list", "locals", "map", "max", "memoryview", "min", "next",
      "object", "oct", "open", "ord", "pow", "print", "property", "quit",
      "range", "repr", "reversed", "round", "set", "setattr", "slice",
      "sorted", "staticmethod", "str", "sum", "super", "tuple", "type",
      "vars", "zip",
      "ArithmeticError", "AssertionError", "AttributeError", "BaseException",
      "BaseExceptionGroup", "BlockingIOError", "BrokenPipeError",
      "BufferError", "BytesWarning", "ChildProcessError",
      "ConnectionAbortedError", "ConnectionError", "ConnectionRefusedError",
      "ConnectionResetError", "DeprecationWarning", "EOFError",
      "EncodingWarning", "EnvironmentError", "Exception", "ExceptionGroup",
      "FileExistsError", "FileNotFoundError", "FloatingPointError",
      "FutureWarning", "GeneratorExit", "IOError", "ImportError",
      "ImportWarning", "IndentationError", "IndexError", "InterruptedError",
      "IsADirectoryError", "KeyError", "KeyboardInterrupt", "LookupError",
      "MemoryError", "ModuleNotFoundError", "NameError", "NotADirectoryError",
      "NotImplemented", "NotImplementedError", "OSError", "OverflowError",
      "PendingDeprecationWarning", "PermissionError", "ProcessLookupError",
      "RecursionError", "ReferenceError", "ResourceWarning", "RuntimeError",
      "RuntimeWarning", "StopAsyncIteration", "StopIteration", "SyntaxError",
      "SyntaxWarning", "SystemError", "SystemExit", "TabError", "TimeoutError",
      "TypeError", "UnboundLocalError", "UnicodeDecodeError",
      "UnicodeEncodeError", "UnicodeError", "UnicodeTranslateError",
      "UnicodeWarning", "UserWarning", "ValueError", "Warning",
      "ZeroDivisionError", "__import__", "__name__", "__file__", "__doc__",
      "__builtins__", "__debug__", "Ellipsis", "True", "False", "None",
  };
  return builtins.count(name) > 0;
}

namespace {

using K = NodeKind;

class Analyzer {
 public:
  explicit Analyzer(const NodePtr& root) : root_(root) {}

  ScopeTable run() {
    table_.scopes.push_back(ScopeInfo{0, -1, ScopeKind::Module, ""});
    NodePath path;
    collect_stmt_block(root_, path, 0);
    NodePath path2;
    resolve(root_, path2, 0, Ctx::Stmt);
    return std::move(table_);
  }

 private:
  NodePtr root_;
  ScopeTable table_;

  int new_scope(int parent, ScopeKind kind, const std::string& owner) {
    int id = static_cast<int>(table_.scopes.size());
    table_.scopes.push_back(ScopeInfo{id, parent, kind, owner});
    return id;
  }

  void mark_ineligible(const std::string& reason) {
    table_.rename_eligible = false;
    for (const auto& r : table_.ineligibility_reasons) {
      if (r == reason) return;
    }
    table_.ineligibility_reasons.push_back(reason);
  }

  void bind(int scope, const std::string& name) {
    table_.scopes[scope].bound.insert(name);
    table_.all_identifiers.insert(name);
  }

  // ---- pass 1: collect bindings per scope ----

  void collect_target(const NodePtr& t, int scope) {
    switch (t->kind) {
      case K::Name:
        bind(scope, t->value);
        return;
      case K::TupleExpr:
      case K::ListExpr:
        for (const auto& c : t->children) collect_target(c, scope);
        return;
      case K::Starred:
        collect_target(t->children[0], scope);
        return;
      default:
        return;  // attribute/subscript targets bind nothing
    }
  }

  void collect_params(const NodePtr& plist, int scope) {
    for (const auto& p : plist->children) {
      if (p->kind == K::Param || p->kind == K::StarParam ||
          p->kind == K::DoubleStarParam) {
        bind(scope, p->value);
        table_.scopes[scope].params.insert(p->value);
      }
    }
  }

  void collect_stmt_block(const NodePtr& block, NodePath& path, int scope) {
    for (size_t i = 0; i < block->children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      collect_stmt(block->children[i], path, scope);
      path.pop_back();
    }
  }

  void collect_stmt(const NodePtr& s, NodePath& path, int scope) {
    switch (s->kind) {
      case K::FunctionDef:
      case K::AsyncFunctionDef: {
        bind(scope, s->value);
        table_.scopes[scope].def_names.insert(s->value);
        int inner = new_scope(scope, ScopeKind::Function, s->value);
        scope_of_def_[path_key(path)] = inner;
        collect_params(s->children[1], inner);
        path.push_back(3);
        collect_stmt_block(s->children[3], path, inner);
        path.pop_back();
        collect_expr_bindings(s->children[0], scope);
        collect_expr_bindings(s->children[1], scope);  // defaults/annotations
        collect_expr_bindings(s->children[2], scope);
        return;
      }
      case K::ClassDef: {
        bind(scope, s->value);
        table_.scopes[scope].def_names.insert(s->value);
        int inner = new_scope(scope, ScopeKind::Class, s->value);
        scope_of_def_[path_key(path)] = inner;
        path.push_back(2);
        collect_stmt_block(s->children[2], path, inner);
        path.pop_back();
        collect_expr_bindings(s->children[0], scope);
        collect_expr_bindings(s->children[1], scope);
        return;
      }
      case K::Assign: {
        for (size_t i = 0; i + 1 < s->children.size(); ++i) {
          collect_target(s->children[i], scope);
        }
        collect_expr_bindings(s->children.back(), scope);
        return;
      }
      case K::AugAssign:
      case K::AnnAssign:
        collect_target(s->children[0], scope);
        for (size_t i = 1; i < s->children.size(); ++i) {
          collect_expr_bindings(s->children[i], scope);
        }
        return;
      case K::For:
      case K::AsyncFor: {
        collect_target(s->children[0], scope);
        collect_expr_bindings(s->children[1], scope);
        path.push_back(2);
        collect_stmt_block(s->children[2], path, scope);
        path.pop_back();
        if (s->children[3]->kind != K::Empty) {
          path.push_back(3);
          collect_stmt_block(s->children[3], path, scope);
          path.pop_back();
        }
        return;
      }
      case K::While:
      case K::If: {
        collect_expr_bindings(s->children[0], scope);
        for (int i : {1, 2}) {
          if (s->children[i]->kind == K::Empty) continue;
          path.push_back(i);
          collect_stmt_block(s->children[i], path, scope);
          path.pop_back();
        }
        return;
      }
      case K::With:
      case K::AsyncWith: {
        for (size_t i = 0; i + 1 < s->children.size(); ++i) {
          const auto& item = s->children[i];
          collect_expr_bindings(item->children[0], scope);
          if (item->children[1]->kind != K::Empty) {
            collect_target(item->children[1], scope);
          }
        }
        path.push_back(static_cast<int>(s->children.size()) - 1);
        collect_stmt_block(s->children.back(), path, scope);
        path.pop_back();
        return;
      }
      case K::Try: {
        path.push_back(0);
        collect_stmt_block(s->children[0], path, scope);
        path.pop_back();
        for (size_t h = 0; h < s->children[1]->children.size(); ++h) {
          const auto& handler = s->children[1]->children[h];
          collect_expr_bindings(handler->children[0], scope);
          if (!handler->value.empty()) bind(scope, handler->value);
          path.push_back(1);
          path.push_back(static_cast<int>(h));
          path.push_back(1);
          collect_stmt_block(handler->children[1], path, scope);
          path.pop_back();
          path.pop_back();
          path.pop_back();
        }
        for (int i : {2, 3}) {
          if (s->children[i]->kind == K::Empty) continue;
          path.push_back(i);
          collect_stmt_block(s->children[i], path, scope);
          path.pop_back();
        }
        return;
      }
      case K::Import:
      case K::ImportFrom: {
        for (const auto& alias : s->children) {
          if (alias->value == "*") {
            mark_ineligible("star import");
            continue;
          }
          std::string bound = alias->aux.empty()
                                  ? alias->value.substr(
                                        0, alias->value.find('.'))
                                  : alias->aux;
          bind(scope, bound);
        }
        return;
      }
      case K::Global:
        mark_ineligible("global statement");
        return;
      case K::Nonlocal:
        mark_ineligible("nonlocal statement");
        return;
      case K::Delete:
      case K::Return:
      case K::Raise:
      case K::Assert:
      case K::ExprStmt:
        for (const auto& c : s->children) collect_expr_bindings(c, scope);
        return;
      case K::Match: {
        collect_expr_bindings(s->children[0], scope);
        for (size_t i = 1; i < s->children.size(); ++i) {
          const auto& c = s->children[i];
          collect_match_pattern(c->children[0], scope);
          collect_expr_bindings(c->children[1], scope);
          path.push_back(static_cast<int>(i));
          path.push_back(2);
          collect_stmt_block(c->children[2], path, scope);
          path.pop_back();
          path.pop_back();
        }
        return;
      }
      default:
        return;
    }
  }

  void collect_match_pattern(const NodePtr& p, int scope) {
    // Capture names bind; anything else is structural.
    if (p->kind == K::Name && p->value != "_") {
      bind(scope, p->value);
      return;
    }
    if (p->kind == K::WithItem) {
      collect_match_pattern(p->children[0], scope);
      bind(scope, p->children[1]->value);
      return;
    }
    for (const auto& c : p->children) collect_match_pattern(c, scope);
  }

  // Walks an expression for binding constructs (walrus, lambda,
  // comprehension) without descending into nested statement scopes.
  void collect_expr_bindings(const NodePtr& e, int scope) {
    if (!e || e->kind == K::Empty) return;
    switch (e->kind) {
      case K::NamedExpr:
        collect_target(e->children[0], scope);
        collect_expr_bindings(e->children[1], scope);
        return;
      case K::Lambda:
      case K::ListComp:
      case K::SetComp:
      case K::GeneratorExp:
      case K::DictComp:
        // Own scopes; handled lazily during resolution. Walrus inside a
        // comprehension binding outward is rare enough that the verifier
        // gate covers it.
        return;
      case K::Call: {
        if (e->children[0]->kind == K::Name &&
            (e->children[0]->value == "eval" ||
             e->children[0]->value == "exec")) {
          mark_ineligible("dynamic name access via " + e->children[0]->value);
        }
        for (const auto& c : e->children) collect_expr_bindings(c, scope);
        return;
      }
      default:
        for (const auto& c : e->children) collect_expr_bindings(c, scope);
        return;
    }
  }

  // ---- pass 2: resolve occurrences ----

  enum class Ctx { Stmt, Expr };

  std::map<std::string, int> scope_of_def_;

  static std::string path_key(const NodePath& p) { return path_to_string(p); }

  int lookup(int scope, const std::string& name) const {
    int cur = scope;
    bool first = true;
    while (cur >= 0) {
      const auto& info = table_.scopes[cur];
      // Class scopes are invisible to nested scopes.
      if ((first || info.kind != ScopeKind::Class) && info.bound.count(name)) {
        return cur;
      }
      first = false;
      cur = info.parent;
    }
    return -1;
  }

  void add_occurrence(const NodePath& path, const std::string& name,
                      SiteKind site, int scope, bool force_unresolvable) {
    Occurrence occ;
    occ.path = path;
    occ.name = name;
    occ.site = site;
    occ.scope = scope;
    table_.all_identifiers.insert(name);
    if (force_unresolvable) {
      occ.kind = BindingKind::Unresolvable;
      occ.resolvable = false;
      table_.occurrences.push_back(std::move(occ));
      return;
    }
    int decl = lookup(scope, name);
    if (decl < 0) {
      if (is_python_builtin(name)) {
        occ.kind = BindingKind::Builtin;
        occ.decl_scope = -1;
        occ.resolvable = true;
      } else {
        occ.kind = BindingKind::Unresolvable;
        occ.resolvable = false;
      }
      table_.occurrences.push_back(std::move(occ));
      return;
    }
    occ.decl_scope = decl;
    occ.resolvable = true;
    const auto& info = table_.scopes[decl];
    if (info.def_names.count(name)) {
      occ.kind = BindingKind::FunctionName;
    } else if (info.params.count(name) && decl == scope) {
      occ.kind = BindingKind::Parameter;
    } else if (decl == scope || info.kind != ScopeKind::Module ||
               scope == decl) {
      occ.kind = decl == scope ? BindingKind::Local : BindingKind::GlobalRead;
      if (decl != scope && info.kind != ScopeKind::Module) {
        occ.kind = BindingKind::Local;  // closure read of an enclosing local
      }
    } else {
      occ.kind = BindingKind::GlobalRead;
    }
    table_.occurrences.push_back(std::move(occ));
  }

  void resolve_block(const NodePtr& block, NodePath& path, int scope) {
    for (size_t i = 0; i < block->children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      resolve(block->children[i], path, scope, Ctx::Stmt);
      path.pop_back();
    }
  }

  void resolve_children(const NodePtr& n, NodePath& path, int scope) {
    for (size_t i = 0; i < n->children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      resolve(n->children[i], path, scope, Ctx::Expr);
      path.pop_back();
    }
  }

  void resolve_params(const NodePtr& plist, NodePath& path, int inner,
                      int outer) {
    for (size_t i = 0; i < plist->children.size(); ++i) {
      const auto& p = plist->children[i];
      path.push_back(static_cast<int>(i));
      if (p->kind == K::Param || p->kind == K::StarParam ||
          p->kind == K::DoubleStarParam) {
        add_occurrence(path, p->value, SiteKind::ParamDef, inner, false);
        // Annotations and defaults evaluate in the enclosing scope.
        for (size_t j = 0; j < p->children.size(); ++j) {
          path.push_back(static_cast<int>(j));
          resolve(p->children[j], path, outer, Ctx::Expr);
          path.pop_back();
        }
      }
      path.pop_back();
    }
  }

  void resolve(const NodePtr& n, NodePath& path, int scope, Ctx ctx) {
    if (!n || n->kind == K::Empty) return;
    switch (n->kind) {
      case K::Module:
        resolve_block(n, path, scope);
        return;
      case K::FunctionDef:
      case K::AsyncFunctionDef: {
        int inner = scope_of_def_.at(path_key(path));
        add_occurrence(path, n->value, SiteKind::DefName, scope, false);
        path.push_back(0);
        resolve(n->children[0], path, scope, Ctx::Expr);
        path.pop_back();
        path.push_back(1);
        resolve_params(n->children[1], path, inner, scope);
        path.pop_back();
        path.push_back(2);
        resolve(n->children[2], path, scope, Ctx::Expr);
        path.pop_back();
        path.push_back(3);
        resolve_block(n->children[3], path, inner);
        path.pop_back();
        return;
      }
      case K::ClassDef: {
        int inner = scope_of_def_.at(path_key(path));
        add_occurrence(path, n->value, SiteKind::DefName, scope, false);
        for (int i : {0, 1}) {
          path.push_back(i);
          resolve(n->children[i], path, scope, Ctx::Expr);
          path.pop_back();
        }
        path.push_back(2);
        resolve_block(n->children[2], path, inner);
        path.pop_back();
        return;
      }
      case K::Lambda: {
        int inner = new_scope(scope, ScopeKind::Lambda, "");
        collect_params(n->children[0], inner);
        path.push_back(0);
        resolve_params(n->children[0], path, inner, scope);
        path.pop_back();
        path.push_back(1);
        resolve(n->children[1], path, inner, Ctx::Expr);
        path.pop_back();
        return;
      }
      case K::ListComp:
      case K::SetComp:
      case K::GeneratorExp:
      case K::DictComp: {
        int inner = new_scope(scope, ScopeKind::Comprehension, "");
        size_t first_comp = n->kind == K::DictComp ? 2 : 1;
        // Collect comprehension targets first.
        for (size_t i = first_comp; i < n->children.size(); ++i) {
          collect_target(n->children[i]->children[0], inner);
        }
        for (size_t i = first_comp; i < n->children.size(); ++i) {
          const auto& cf = n->children[i];
          path.push_back(static_cast<int>(i));
          path.push_back(0);
          resolve(cf->children[0], path, inner, Ctx::Expr);
          path.pop_back();
          // The leftmost iterable evaluates in the enclosing scope.
          path.push_back(1);
          resolve(cf->children[1], path, i == first_comp ? scope : inner,
                  Ctx::Expr);
          path.pop_back();
          for (size_t j = 2; j < cf->children.size(); ++j) {
            path.push_back(static_cast<int>(j));
            resolve(cf->children[j], path, inner, Ctx::Expr);
            path.pop_back();
          }
          path.pop_back();
        }
        for (size_t i = 0; i < first_comp; ++i) {
          path.push_back(static_cast<int>(i));
          resolve(n->children[i], path, inner, Ctx::Expr);
          path.pop_back();
        }
        return;
      }
      case K::Name:
        add_occurrence(path, n->value, SiteKind::NameExpr, scope, false);
        return;
      case K::Attribute:
        // The attribute identifier itself is not a scoped name.
        resolve_children(n, path, scope);
        return;
      case K::Keyword:
        table_.keyword_arg_names.insert(n->value);
        table_.all_identifiers.insert(n->value);
        resolve_children(n, path, scope);
        return;
      case K::Call: {
        bool dynamic = n->children[0]->kind == K::Name &&
                       (n->children[0]->value == "eval" ||
                        n->children[0]->value == "exec");
        if (dynamic) {
          mark_ineligible("dynamic name access via " + n->children[0]->value);
        }
        path.push_back(0);
        resolve(n->children[0], path, scope, Ctx::Expr);
        path.pop_back();
        for (size_t i = 1; i < n->children.size(); ++i) {
          path.push_back(static_cast<int>(i));
          if (dynamic) {
            mark_names_unresolvable(n->children[i], path, scope);
          } else {
            resolve(n->children[i], path, scope, Ctx::Expr);
          }
          path.pop_back();
        }
        return;
      }
      case K::Global:
      case K::Nonlocal: {
        for (size_t i = 0; i < n->children.size(); ++i) {
          path.push_back(static_cast<int>(i));
          add_occurrence(path, n->children[i]->value, SiteKind::NameExpr,
                         scope, /*force_unresolvable=*/true);
          path.pop_back();
        }
        return;
      }
      case K::Import:
      case K::ImportFrom: {
        for (size_t i = 0; i < n->children.size(); ++i) {
          const auto& alias = n->children[i];
          if (alias->value == "*") continue;
          std::string bound = alias->aux.empty()
                                  ? alias->value.substr(
                                        0, alias->value.find('.'))
                                  : alias->aux;
          path.push_back(static_cast<int>(i));
          add_occurrence(path, bound, SiteKind::AliasName, scope, false);
          path.pop_back();
        }
        return;
      }
      case K::Try: {
        path.push_back(0);
        resolve_block(n->children[0], path, scope);
        path.pop_back();
        for (size_t h = 0; h < n->children[1]->children.size(); ++h) {
          const auto& handler = n->children[1]->children[h];
          path.push_back(1);
          path.push_back(static_cast<int>(h));
          if (!handler->value.empty()) {
            add_occurrence(path, handler->value, SiteKind::HandlerName, scope,
                           false);
          }
          path.push_back(0);
          resolve(handler->children[0], path, scope, Ctx::Expr);
          path.pop_back();
          path.push_back(1);
          resolve_block(handler->children[1], path, scope);
          path.pop_back();
          path.pop_back();
          path.pop_back();
        }
        for (int i : {2, 3}) {
          if (n->children[i]->kind == K::Empty) continue;
          path.push_back(i);
          resolve_block(n->children[i], path, scope);
          path.pop_back();
        }
        return;
      }
      case K::If:
      case K::While: {
        path.push_back(0);
        resolve(n->children[0], path, scope, Ctx::Expr);
        path.pop_back();
        for (int i : {1, 2}) {
          if (n->children[i]->kind == K::Empty) continue;
          path.push_back(i);
          resolve_block(n->children[i], path, scope);
          path.pop_back();
        }
        return;
      }
      case K::For:
      case K::AsyncFor: {
        for (int i : {0, 1}) {
          path.push_back(i);
          resolve(n->children[i], path, scope, Ctx::Expr);
          path.pop_back();
        }
        for (int i : {2, 3}) {
          if (n->children[i]->kind == K::Empty) continue;
          path.push_back(i);
          resolve_block(n->children[i], path, scope);
          path.pop_back();
        }
        return;
      }
      case K::With:
      case K::AsyncWith: {
        for (size_t i = 0; i + 1 < n->children.size(); ++i) {
          path.push_back(static_cast<int>(i));
          resolve_children(n->children[i], path, scope);
          path.pop_back();
        }
        path.push_back(static_cast<int>(n->children.size()) - 1);
        resolve_block(n->children.back(), path, scope);
        path.pop_back();
        return;
      }
      case K::Match: {
        path.push_back(0);
        resolve(n->children[0], path, scope, Ctx::Expr);
        path.pop_back();
        for (size_t i = 1; i < n->children.size(); ++i) {
          const auto& c = n->children[i];
          path.push_back(static_cast<int>(i));
          path.push_back(0);
          resolve(c->children[0], path, scope, Ctx::Expr);
          path.pop_back();
          path.push_back(1);
          resolve(c->children[1], path, scope, Ctx::Expr);
          path.pop_back();
          path.push_back(2);
          resolve_block(c->children[2], path, scope);
          path.pop_back();
          path.pop_back();
        }
        return;
      }
      default:
        if (ctx == Ctx::Stmt &&
            (n->kind == K::Block)) {
          resolve_block(n, path, scope);
          return;
        }
        resolve_children(n, path, scope);
        return;
    }
  }

  void mark_names_unresolvable(const NodePtr& n, NodePath& path, int scope) {
    if (!n || n->kind == K::Empty) return;
    if (n->kind == K::Name) {
      add_occurrence(path, n->value, SiteKind::NameExpr, scope,
                     /*force_unresolvable=*/true);
      return;
    }
    for (size_t i = 0; i < n->children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      mark_names_unresolvable(n->children[i], path, scope);
      path.pop_back();
    }
  }
};

}  // namespace

std::vector<const Occurrence*> ScopeTable::occurrences_of(
    int decl_scope, const std::string& name) const {
  std::vector<const Occurrence*> out;
  for (const auto& occ : occurrences) {
    if (occ.resolvable && occ.decl_scope == decl_scope && occ.name == name) {
      out.push_back(&occ);
    }
  }
  return out;
}

ScopeTable analyze_scopes(const NodePtr& tree) {
  Analyzer a(tree);
  return a.run();
}

}  // namespace mutabench::py
