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

#ifndef MUTABENCH_SCOPES_HPP
#define MUTABENCH_SCOPES_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mutabench/ast.hpp"

namespace mutabench::py {

enum class BindingKind {
  Local,
  Parameter,
  FunctionName,  // def and class names
  GlobalRead,    // resolves to an enclosing (module) scope binding
  Builtin,
  Unresolvable,
};

enum class ScopeKind { Module, Function, Class, Lambda, Comprehension };

// Where an identifier occurrence lives in the tree. Name nodes cover loads
// and stores; the remaining kinds are definition sites whose identifier is
// stored in the node's value field rather than a child Name.
enum class SiteKind { NameExpr, ParamDef, DefName, HandlerName, AliasName };

struct Occurrence {
  NodePath path;
  std::string name;
  SiteKind site = SiteKind::NameExpr;
  int scope = 0;       // scope the occurrence appears in
  int decl_scope = -1; // scope holding the binding, -1 if none
  BindingKind kind = BindingKind::Unresolvable;
  bool resolvable = false;
};

struct ScopeInfo {
  int id = 0;
  int parent = -1;
  ScopeKind kind = ScopeKind::Module;
  std::string owner_name;           // function/class name, "" otherwise
  std::set<std::string> bound;      // names bound in this scope
  std::set<std::string> params;     // subset of bound that are parameters
  std::set<std::string> def_names;  // subset bound by def/class statements
};

struct ScopeTable {
  std::vector<ScopeInfo> scopes;
  std::vector<Occurrence> occurrences;

  // Program-wide rename eligibility (dynamic name access defeats static
  // renaming guarantees).
  bool rename_eligible = true;
  std::vector<std::string> ineligibility_reasons;

  // Every identifier spelled anywhere in the module, plus keyword-argument
  // names; used for fresh-name collision avoidance and keyword-call checks.
  std::set<std::string> all_identifiers;
  std::set<std::string> keyword_arg_names;

  const ScopeInfo& scope(int id) const { return scopes.at(id); }

  // All occurrences resolving to the binding (decl_scope, name).
  std::vector<const Occurrence*> occurrences_of(int decl_scope,
                                                const std::string& name) const;
};

bool is_python_builtin(const std::string& name);

ScopeTable analyze_scopes(const NodePtr& tree);

}  // namespace mutabench::py

#endif  // MUTABENCH_SCOPES_HPP
