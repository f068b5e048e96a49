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

#ifndef MUTABENCH_AST_HPP
#define MUTABENCH_AST_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mutabench::py {

// One generic node shape for the whole tree. `value` carries identifiers,
// literal token text and operator spellings; `aux` carries secondary payload
// (alias target, import level, f-string conversion, ...). Fixed child slots
// use an Empty sentinel so sibling indices stay stable.
enum class NodeKind {
  Empty,

  // Statements
  Module,
  FunctionDef,       // value=name; [decorators, params, returns, body]
  AsyncFunctionDef,  // same layout
  ClassDef,          // value=name; [decorators, bases(ArgList), body]
  Return,            // [expr|Empty]
  Delete,            // [targets...]
  Assign,            // [target..., value] (value is last child)
  AugAssign,         // value=op w/o '='; [target, value]
  AnnAssign,         // [target, annotation, value|Empty]
  For,               // [target, iter, body, orelse(Block|Empty)]
  AsyncFor,
  While,             // [cond, body, orelse]
  If,                // [cond, body, orelse]
  With,              // [WithItem..., body]
  AsyncWith,
  WithItem,          // [ctx, target|Empty]
  Raise,             // [exc|Empty, cause|Empty]
  Try,               // [body, Handlers(block of ExceptHandler), orelse, final]
  ExceptHandler,     // value=bound name or ""; aux="*" for except*; [type|Empty, body]
  Assert,            // [test, msg|Empty]
  Import,            // [Alias...]
  ImportFrom,        // value=module (may be ""); aux=relative-level digits; [Alias...]
  Alias,             // value=name; aux=asname or ""
  Global,            // [Name...]
  Nonlocal,          // [Name...]
  ExprStmt,          // [expr]
  Pass,
  Break,
  Continue,
  Block,             // suite of statements
  Match,             // [subject, MatchCase...]
  MatchCase,         // [pattern, guard|Empty, body]

  // Expressions
  Name,          // value=identifier
  NumberLit,     // value=token text
  StringLit,     // value=raw token text incl. prefix and quotes
  FString,       // [FStringText | FStringField ...]; value=quote style, aux=prefix
  FStringText,   // value=raw text run
  FStringField,  // value=conversion ("", "r","s","a"); aux="=" when self-documenting;
                 // [expr, format_spec(FString|Empty)]
  ConstLit,      // value in {True, False, None, ...}
  TupleExpr,     // [elts...]
  ListExpr,
  SetExpr,
  DictExpr,      // [DictItem | DictUnpack ...]
  DictItem,      // [key, value]
  DictUnpack,    // [expr]
  Starred,       // [expr]
  DoubleStarred, // [expr] (call argument **kwargs)
  UnaryOp,       // value in {+, -, ~, not}; [operand]
  BinOp,         // value op; [lhs, rhs]
  BoolOp,        // value in {and, or}; [lhs, rhs]
  Compare,       // [e0, CmpOp...]
  CmpOp,         // value=op; [operand]
  Lambda,        // [params, body]
  IfExp,         // [body, cond, orelse]
  NamedExpr,     // [target, value]
  Call,          // [func, args...]; args are exprs, Starred, Keyword, DoubleStarred
  Keyword,       // value=name; [expr]
  Attribute,     // value=attr name; [obj]
  Subscript,     // [obj, index]
  Slice,         // [lower|Empty, upper|Empty, step|Empty]
  ListComp,      // [elt, CompFor...]
  SetComp,
  GeneratorExp,
  DictComp,      // [key, value, CompFor...]
  CompFor,       // value="async" when async; [target, iter, conditions...]
  Yield,         // [expr|Empty]
  YieldFrom,     // [expr]
  Await,         // [expr]
  StringConcat,  // adjacent literal concatenation; [StringLit|FString ...]

  // Parameter list
  ParamList,       // [params and markers in order]
  Param,           // value=name; [annotation|Empty, default|Empty]
  SlashMarker,     // positional-only divider
  StarMarker,      // bare * divider
  StarParam,       // value=name; [annotation|Empty]
  DoubleStarParam, // value=name; [annotation|Empty]
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Empty;
  std::string value;
  std::string aux;
  std::vector<NodePtr> children;
  int line = 0;  // 1-based source line of the introducing token, 0 if synthetic
};

NodePtr make_node(NodeKind kind, std::string value = {},
                  std::vector<NodePtr> children = {}, std::string aux = {});
NodePtr empty_node();

const char* kind_name(NodeKind k);

// Structural equality: kind, value, aux and children, ignoring source lines.
bool tree_equal(const NodePtr& a, const NodePtr& b);

// Child-index path from the root. node_at returns nullptr when the path does
// not address a node.
using NodePath = std::vector<int>;
NodePtr node_at(const NodePtr& root, const NodePath& path);

// Path-copying replacement: returns a new root sharing every subtree outside
// the path.
NodePtr replace_at(const NodePtr& root, const NodePath& path, NodePtr repl);

// Pre-order walk over the tree; the callback receives each node and its path.
void walk(const NodePtr& root,
          const std::function<void(const NodePtr&, const NodePath&)>& fn);

std::string path_to_string(const NodePath& path);
NodePath path_from_string(const std::string& text);

}  // namespace mutabench::py

#endif  // MUTABENCH_AST_HPP
