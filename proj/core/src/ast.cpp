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

#include "mutabench/ast.hpp"

#include <sstream>
#include <stdexcept>

namespace mutabench::py {

NodePtr make_node(NodeKind kind, std::string value,
                  std::vector<NodePtr> children, std::string aux) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = std::move(value);
  n->aux = std::move(aux);
  n->children = std::move(children);
  return n;
}

NodePtr empty_node() {
  static const NodePtr empty = make_node(NodeKind::Empty);
  return empty;
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Empty: return "Empty";
    case NodeKind::Module: return "Module";
    case NodeKind::FunctionDef: return "FunctionDef";
    case NodeKind::AsyncFunctionDef: return "AsyncFunctionDef";
    case NodeKind::ClassDef: return "ClassDef";
    case NodeKind::Return: return "Return";
    case NodeKind::Delete: return "Delete";
    case NodeKind::Assign: return "Assign";
    case NodeKind::AugAssign: return "AugAssign";
    case NodeKind::AnnAssign: return "AnnAssign";
    case NodeKind::For: return "For";
    case NodeKind::AsyncFor: return "AsyncFor";
    case NodeKind::While: return "While";
    case NodeKind::If: return "If";
    case NodeKind::With: return "With";
    case NodeKind::AsyncWith: return "AsyncWith";
    case NodeKind::WithItem: return "WithItem";
    case NodeKind::Raise: return "Raise";
    case NodeKind::Try: return "Try";
    case NodeKind::ExceptHandler: return "ExceptHandler";
    case NodeKind::Assert: return "Assert";
    case NodeKind::Import: return "Import";
    case NodeKind::ImportFrom: return "ImportFrom";
    case NodeKind::Alias: return "Alias";
    case NodeKind::Global: return "Global";
    case NodeKind::Nonlocal: return "Nonlocal";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::Pass: return "Pass";
    case NodeKind::Break: return "Break";
    case NodeKind::Continue: return "Continue";
    case NodeKind::Block: return "Block";
    case NodeKind::Match: return "Match";
    case NodeKind::MatchCase: return "MatchCase";
    case NodeKind::Name: return "Name";
    case NodeKind::NumberLit: return "NumberLit";
    case NodeKind::StringLit: return "StringLit";
    case NodeKind::FString: return "FString";
    case NodeKind::FStringText: return "FStringText";
    case NodeKind::FStringField: return "FStringField";
    case NodeKind::ConstLit: return "ConstLit";
    case NodeKind::TupleExpr: return "TupleExpr";
    case NodeKind::ListExpr: return "ListExpr";
    case NodeKind::SetExpr: return "SetExpr";
    case NodeKind::DictExpr: return "DictExpr";
    case NodeKind::DictItem: return "DictItem";
    case NodeKind::DictUnpack: return "DictUnpack";
    case NodeKind::Starred: return "Starred";
    case NodeKind::DoubleStarred: return "DoubleStarred";
    case NodeKind::UnaryOp: return "UnaryOp";
    case NodeKind::BinOp: return "BinOp";
    case NodeKind::BoolOp: return "BoolOp";
    case NodeKind::Compare: return "Compare";
    case NodeKind::CmpOp: return "CmpOp";
    case NodeKind::Lambda: return "Lambda";
    case NodeKind::IfExp: return "IfExp";
    case NodeKind::NamedExpr: return "NamedExpr";
    case NodeKind::Call: return "Call";
    case NodeKind::Keyword: return "Keyword";
    case NodeKind::Attribute: return "Attribute";
    case NodeKind::Subscript: return "Subscript";
    case NodeKind::Slice: return "Slice";
    case NodeKind::ListComp: return "ListComp";
    case NodeKind::SetComp: return "SetComp";
    case NodeKind::GeneratorExp: return "GeneratorExp";
    case NodeKind::DictComp: return "DictComp";
    case NodeKind::CompFor: return "CompFor";
    case NodeKind::Yield: return "Yield";
    case NodeKind::YieldFrom: return "YieldFrom";
    case NodeKind::Await: return "Await";
    case NodeKind::StringConcat: return "StringConcat";
    case NodeKind::ParamList: return "ParamList";
    case NodeKind::Param: return "Param";
    case NodeKind::SlashMarker: return "SlashMarker";
    case NodeKind::StarMarker: return "StarMarker";
    case NodeKind::StarParam: return "StarParam";
    case NodeKind::DoubleStarParam: return "DoubleStarParam";
  }
  return "?";
}

bool tree_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->value != b->value || a->aux != b->aux ||
      a->children.size() != b->children.size()) {
    return false;
  }
  for (size_t i = 0; i < a->children.size(); ++i) {
    if (!tree_equal(a->children[i], b->children[i])) return false;
  }
  return true;
}

NodePtr node_at(const NodePtr& root, const NodePath& path) {
  NodePtr cur = root;
  for (int idx : path) {
    if (!cur || idx < 0 || static_cast<size_t>(idx) >= cur->children.size()) {
      return nullptr;
    }
    cur = cur->children[idx];
  }
  return cur;
}

NodePtr replace_at(const NodePtr& root, const NodePath& path, NodePtr repl) {
  if (path.empty()) return repl;
  if (!root || path[0] < 0 ||
      static_cast<size_t>(path[0]) >= root->children.size()) {
    throw std::out_of_range("replace_at: path does not address a node");
  }
  auto copy = std::make_shared<Node>(*root);
  NodePath rest(path.begin() + 1, path.end());
  copy->children[path[0]] =
      replace_at(root->children[path[0]], rest, std::move(repl));
  return copy;
}

namespace {
void walk_impl(const NodePtr& node, NodePath& path,
               const std::function<void(const NodePtr&, const NodePath&)>& fn) {
  fn(node, path);
  for (size_t i = 0; i < node->children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    walk_impl(node->children[i], path, fn);
    path.pop_back();
  }
}
}  // namespace

void walk(const NodePtr& root,
          const std::function<void(const NodePtr&, const NodePath&)>& fn) {
  if (!root) return;
  NodePath path;
  walk_impl(root, path, fn);
}

std::string path_to_string(const NodePath& path) {
  std::ostringstream out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out << '.';
    out << path[i];
  }
  return out.str();
}

NodePath path_from_string(const std::string& text) {
  NodePath path;
  if (text.empty()) return path;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t dot = text.find('.', pos);
    if (dot == std::string::npos) dot = text.size();
    path.push_back(std::stoi(text.substr(pos, dot - pos)));
    pos = dot + 1;
    if (dot == text.size()) break;
  }
  return path;
}

}  // namespace mutabench::py
