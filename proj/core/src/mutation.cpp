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

#include "mutabench/mutation.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

#include "mutabench/lexer.hpp"
#include "mutabench/parser.hpp"
#include "mutabench/printer.hpp"

namespace mutabench {

namespace {
using K = py::NodeKind;
using py::NodePath;
using py::NodePtr;

NodePtr node(K kind, std::string value = {}, std::vector<NodePtr> ch = {},
             std::string aux = {}) {
  return py::make_node(kind, std::move(value), std::move(ch), std::move(aux));
}

NodePtr name(const std::string& id) { return node(K::Name, id); }
NodePtr number(const std::string& text) { return node(K::NumberLit, text); }

// Replaces the `index`-th statement of the block at `block_path` with the
// given statement sequence.
NodePtr splice_block(const NodePtr& root, const NodePath& block_path,
                     int index, const std::vector<NodePtr>& replacement) {
  NodePtr block = py::node_at(root, block_path);
  auto copy = std::make_shared<py::Node>(*block);
  copy->children.erase(copy->children.begin() + index);
  copy->children.insert(copy->children.begin() + index, replacement.begin(),
                        replacement.end());
  return py::replace_at(root, block_path, copy);
}

bool is_mirrorable_compare(const NodePtr& n) {
  if (n->kind != K::Compare || n->children.size() != 2) return false;
  const std::string& op = n->children[1]->value;
  return op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
         op == ">=";
}

std::string mirrored_op(const std::string& op) {
  if (op == "<") return ">";
  if (op == ">") return "<";
  if (op == "<=") return ">=";
  if (op == ">=") return "<=";
  return op;  // == and != are symmetric
}

bool is_swappable_if(const NodePtr& n) {
  if (n->kind != K::If) return false;
  const NodePtr& orelse = n->children[2];
  if (orelse->kind != K::Block || orelse->children.empty()) return false;
  // A lone nested If in the else block is an elif continuation.
  if (orelse->children.size() == 1 && orelse->children[0]->kind == K::If) {
    return false;
  }
  return true;
}

// Scans a loop body for `continue`/`break` bound to this loop (nested loops
// own their statements) and `return` anywhere outside nested functions.
struct LoopBodyScan {
  bool has_continue = false;
  bool has_break = false;
  bool has_return = false;
};

void scan_loop_body(const NodePtr& n, LoopBodyScan* out, bool in_nested_loop) {
  switch (n->kind) {
    case K::Continue:
      if (!in_nested_loop) out->has_continue = true;
      return;
    case K::Break:
      if (!in_nested_loop) out->has_break = true;
      return;
    case K::Return:
      out->has_return = true;
      return;
    case K::FunctionDef:
    case K::AsyncFunctionDef:
    case K::Lambda:
    case K::ClassDef:
      return;
    case K::For:
    case K::AsyncFor:
    case K::While:
      for (const auto& c : n->children) scan_loop_body(c, out, true);
      return;
    default:
      for (const auto& c : n->children) scan_loop_body(c, out, in_nested_loop);
      return;
  }
}

bool is_name_tuple_target(const NodePtr& t) {
  if (t->kind == K::Name) return true;
  if (t->kind == K::TupleExpr || t->kind == K::ListExpr) {
    if (t->children.empty()) return false;
    return std::all_of(t->children.begin(), t->children.end(),
                       [](const NodePtr& c) { return c->kind == K::Name; });
  }
  return false;
}

bool is_convertible_for(const NodePtr& n) {
  if (n->kind != K::For) return false;
  if (n->children[3]->kind != K::Empty) return false;  // for-else
  if (!is_name_tuple_target(n->children[0])) return false;
  LoopBodyScan scan;
  scan_loop_body(n->children[2], &scan, false);
  return !scan.has_continue;
}

// Conservative side-effect-freedom for unroll conditions: names, number
// constants, len(name) and arithmetic over those.
bool is_pure_condition_operand(const NodePtr& e) {
  switch (e->kind) {
    case K::Name:
    case K::NumberLit:
      return true;
    case K::ConstLit:
      return e->value == "True" || e->value == "False";
    case K::UnaryOp:
      return (e->value == "-" || e->value == "+") &&
             is_pure_condition_operand(e->children[0]);
    case K::BinOp: {
      const std::string& op = e->value;
      if (op != "+" && op != "-" && op != "*" && op != "//" && op != "%") {
        return false;
      }
      return is_pure_condition_operand(e->children[0]) &&
             is_pure_condition_operand(e->children[1]);
    }
    case K::Call:
      return e->children.size() == 2 && e->children[0]->kind == K::Name &&
             e->children[0]->value == "len" &&
             e->children[1]->kind == K::Name;
    default:
      return false;
  }
}

bool is_unrollable_while(const NodePtr& n) {
  if (n->kind != K::While) return false;
  if (n->children[2]->kind != K::Empty) return false;  // while-else
  const NodePtr& cond = n->children[0];
  if (cond->kind != K::Compare || cond->children.size() != 2 ||
      cond->children[1]->value != "<") {
    return false;
  }
  if (!is_pure_condition_operand(cond->children[0]) ||
      !is_pure_condition_operand(cond->children[1]->children[0])) {
    return false;
  }
  LoopBodyScan scan;
  scan_loop_body(n->children[1], &scan, false);
  return !scan.has_break && !scan.has_continue && !scan.has_return;
}

// A for loop whose while conversion will itself be unrollable.
bool is_chain_unrollable_for(const NodePtr& n) {
  if (!is_convertible_for(n)) return false;
  LoopBodyScan scan;
  scan_loop_body(n->children[2], &scan, false);
  return !scan.has_break && !scan.has_return;
}

// Rename sites: bindings ordered by first occurrence in pre-order.
std::vector<MutationSite> rename_sites(const py::ScopeTable& scopes) {
  std::vector<MutationSite> sites;
  if (!scopes.rename_eligible) return sites;

  struct BindingState {
    bool eligible = true;
    bool seen = false;
    NodePath def_path;
    bool has_def_path = false;
  };
  std::map<std::pair<int, std::string>, BindingState> bindings;
  std::vector<std::pair<int, std::string>> order;

  for (const auto& occ : scopes.occurrences) {
    if (!occ.resolvable) {
      // Unresolvable occurrences poison every same-named visible binding.
      for (auto& [key, st] : bindings) {
        if (key.second == occ.name) st.eligible = false;
      }
      continue;
    }
    if (occ.kind == py::BindingKind::Builtin) continue;
    auto key = std::make_pair(occ.decl_scope, occ.name);
    auto& st = bindings[key];
    if (!st.seen) {
      st.seen = true;
      order.push_back(key);
    }
    if (occ.site != py::SiteKind::NameExpr && !st.has_def_path) {
      st.def_path = occ.path;
      st.has_def_path = true;
    }
    // Imports are module references, not renameable values.
    if (occ.site == py::SiteKind::AliasName) st.eligible = false;
    // A parameter passed by keyword anywhere must keep its name.
    if (occ.site == py::SiteKind::ParamDef &&
        scopes.keyword_arg_names.count(occ.name)) {
      st.eligible = false;
    }
  }
  for (const auto& key : order) {
    const auto& st = bindings[key];
    if (!st.eligible) continue;
    const auto& scope = scopes.scope(key.first);
    if (scope.kind == py::ScopeKind::Class) continue;
    // Dunder names keep their protocol meaning.
    if (key.second.rfind("__", 0) == 0) continue;
    MutationSite site;
    site.cls = MutationClass::RenameVariable;
    // Address the definition node when one exists, else the first
    // occurrence.
    if (st.has_def_path) {
      site.path = st.def_path;
    } else {
      for (const auto& occ : scopes.occurrences) {
        if (occ.resolvable && occ.decl_scope == key.first &&
            occ.name == key.second) {
          site.path = occ.path;
          break;
        }
      }
    }
    site.detail = std::to_string(key.first) + ":" + key.second;
    sites.push_back(std::move(site));
  }
  return sites;
}

std::pair<int, std::string> parse_rename_detail(const std::string& detail) {
  size_t colon = detail.find(':');
  if (colon == std::string::npos) {
    throw MutationError("malformed rename site detail: " + detail);
  }
  return {std::stoi(detail.substr(0, colon)), detail.substr(colon + 1)};
}

NodePtr set_value_at(const NodePtr& root, const NodePath& path,
                     const std::string& value) {
  NodePtr target = py::node_at(root, path);
  auto copy = std::make_shared<py::Node>(*target);
  copy->value = value;
  return py::replace_at(root, path, copy);
}

struct ForParts {
  NodePtr index_init;            // i = 0
  NodePtr seq_init;              // optional seq = list(expr)
  NodePtr while_stmt;
};

std::string pick_index_name(const std::set<std::string>& taken) {
  if (!taken.count("i")) return "i";
  for (int n = 2;; ++n) {
    std::string cand = "i" + std::to_string(n);
    if (!taken.count(cand)) return cand;
  }
}

std::string pick_seq_name(const std::set<std::string>& taken) {
  if (!taken.count("seq")) return "seq";
  for (int n = 2;; ++n) {
    std::string cand = "seq" + std::to_string(n);
    if (!taken.count(cand)) return cand;
  }
}

ForParts build_while_from_for(const NodePtr& for_node,
                              const std::set<std::string>& taken) {
  ForParts parts;
  const NodePtr& target = for_node->children[0];
  const NodePtr& iter = for_node->children[1];
  const NodePtr& body = for_node->children[2];

  std::string idx = pick_index_name(taken);
  NodePtr seq;
  if (iter->kind == K::Name) {
    seq = iter;
  } else {
    std::string seq_name = pick_seq_name(taken);
    seq = name(seq_name);
    parts.seq_init = node(
        K::Assign, "",
        {name(seq_name), node(K::Call, "", {name("list"), iter})});
  }
  parts.index_init = node(K::Assign, "", {name(idx), number("0")});

  NodePtr cond = node(
      K::Compare, "",
      {name(idx),
       node(K::CmpOp, "<", {node(K::Call, "", {name("len"), seq})})});
  std::vector<NodePtr> wbody;
  wbody.push_back(node(K::Assign, "",
                       {target, node(K::Subscript, "", {seq, name(idx)})}));
  for (const auto& s : body->children) wbody.push_back(s);
  wbody.push_back(node(K::AugAssign, "+", {name(idx), number("1")}));
  parts.while_stmt =
      node(K::While, "",
           {cond, node(K::Block, "", std::move(wbody)), py::empty_node()});
  return parts;
}

std::set<std::string> module_identifiers(const NodePtr& tree) {
  return py::analyze_scopes(tree).all_identifiers;
}

}  // namespace

std::string mutation_class_name(MutationClass cls) {
  switch (cls) {
    case MutationClass::RenameVariable: return "RenameVariable";
    case MutationClass::MirrorComparison: return "MirrorComparison";
    case MutationClass::SwapIfElse: return "SwapIfElse";
    case MutationClass::ForToWhile: return "ForToWhile";
    case MutationClass::UnrollLoop: return "UnrollLoop";
  }
  return "?";
}

std::optional<MutationClass> mutation_class_from_name(
    const std::string& name) {
  for (MutationClass cls : kAllMutationClasses) {
    if (mutation_class_name(cls) == name) return cls;
  }
  return std::nullopt;
}

std::string verify_status_name(VerifyStatus status) {
  switch (status) {
    case VerifyStatus::Pending: return "pending";
    case VerifyStatus::Equivalent: return "equivalent";
    case VerifyStatus::Rejected: return "rejected";
  }
  return "?";
}

std::optional<VerifyStatus> verify_status_from_name(const std::string& name) {
  if (name == "pending") return VerifyStatus::Pending;
  if (name == "equivalent") return VerifyStatus::Equivalent;
  if (name == "rejected") return VerifyStatus::Rejected;
  return std::nullopt;
}

std::vector<MutationSite> find_sites(const NodePtr& tree, MutationClass cls) {
  if (cls == MutationClass::RenameVariable) {
    return rename_sites(py::analyze_scopes(tree));
  }
  std::vector<MutationSite> sites;
  py::walk(tree, [&](const NodePtr& n, const NodePath& path) {
    bool hit = false;
    switch (cls) {
      case MutationClass::MirrorComparison:
        hit = is_mirrorable_compare(n);
        break;
      case MutationClass::SwapIfElse:
        hit = is_swappable_if(n);
        break;
      case MutationClass::ForToWhile:
        hit = is_convertible_for(n);
        break;
      case MutationClass::UnrollLoop:
        hit = is_unrollable_while(n);
        break;
      case MutationClass::RenameVariable:
        break;
    }
    if (hit) sites.push_back(MutationSite{cls, path, "", 0});
  });
  return sites;
}

py::NodePtr rename_variable(const NodePtr& tree, const py::ScopeTable& scopes,
                            const MutationSite& site, uint64_t rng_seed) {
  return rename_variable(tree, scopes, site, rng_seed, nullptr);
}

py::NodePtr rename_variable(const NodePtr& tree, const py::ScopeTable& scopes,
                            const MutationSite& site, uint64_t rng_seed,
                            std::string* fresh_name_out) {
  if (!scopes.rename_eligible) {
    std::string why = scopes.ineligibility_reasons.empty()
                          ? "dynamic name access"
                          : scopes.ineligibility_reasons.front();
    throw IneligibleProgram("program is rename-ineligible: " + why);
  }
  auto [decl_scope, old_name] = parse_rename_detail(site.detail);
  for (const auto& occ : scopes.occurrences) {
    if (!occ.resolvable && occ.name == old_name) {
      throw IneligibleBinding("binding '" + old_name +
                              "' has unresolvable occurrences");
    }
  }
  auto occs = scopes.occurrences_of(decl_scope, old_name);
  if (occs.empty()) {
    throw IneligibleBinding("no occurrences of binding '" + old_name + "'");
  }

  SplitMix64 rng(hash_combine(rng_seed, old_name));
  std::string fresh = fresh_identifier(&rng, scopes.all_identifiers);
  if (fresh_name_out) *fresh_name_out = fresh;

  NodePtr out = tree;
  for (const auto* occ : occs) {
    out = set_value_at(out, occ->path, fresh);
  }
  return out;
}

py::NodePtr mirror_comparison(const NodePtr& tree, const MutationSite& site) {
  NodePtr cmp = py::node_at(tree, site.path);
  if (!cmp || !is_mirrorable_compare(cmp)) {
    throw Inapplicable("site is not a two-operand mirrorable comparison");
  }
  const NodePtr& lhs = cmp->children[0];
  const NodePtr& op_node = cmp->children[1];
  const NodePtr& rhs = op_node->children[0];
  NodePtr mirrored =
      node(K::Compare, "",
           {rhs, node(K::CmpOp, mirrored_op(op_node->value), {lhs})});
  return py::replace_at(tree, site.path, mirrored);
}

py::NodePtr swap_if_else(const NodePtr& tree, const MutationSite& site) {
  NodePtr if_node = py::node_at(tree, site.path);
  if (!if_node || if_node->kind != K::If) {
    throw Inapplicable("site is not an if statement");
  }
  if (!is_swappable_if(if_node)) {
    throw Inapplicable(if_node->children[2]->kind == K::Empty
                           ? "if statement has no else branch"
                           : "elif chains are not swappable");
  }
  NodePtr negated = node(K::UnaryOp, "not", {if_node->children[0]});
  NodePtr swapped = node(
      K::If, "", {negated, if_node->children[2], if_node->children[1]});
  return py::replace_at(tree, site.path, swapped);
}

py::NodePtr for_to_while(const NodePtr& tree, const MutationSite& site) {
  NodePtr for_node = py::node_at(tree, site.path);
  if (!for_node || for_node->kind != K::For) {
    throw Inapplicable("site is not a for loop");
  }
  if (!is_convertible_for(for_node)) {
    throw Inapplicable("for loop is not convertible (continue, else clause "
                       "or complex target)");
  }
  if (site.path.empty()) throw Inapplicable("for loop has no parent block");

  ForParts parts = build_while_from_for(for_node, module_identifiers(tree));
  std::vector<NodePtr> repl;
  repl.push_back(parts.index_init);
  if (parts.seq_init) repl.insert(repl.begin(), parts.seq_init);
  repl.push_back(parts.while_stmt);

  NodePath block_path(site.path.begin(), site.path.end() - 1);
  return splice_block(tree, block_path, site.path.back(), repl);
}

py::NodePtr unroll_loop(const NodePtr& tree, const MutationSite& site,
                        int k) {
  if (k != 1 && k != 2) throw Inapplicable("unroll count must be 1 or 2");
  NodePtr while_node = py::node_at(tree, site.path);
  if (!while_node || while_node->kind != K::While) {
    throw Inapplicable("site is not a while loop");
  }
  if (!is_unrollable_while(while_node)) {
    throw Inapplicable("while loop is not unrollable (condition shape, "
                       "early exits or side effects)");
  }
  if (site.path.empty()) throw Inapplicable("while loop has no parent block");

  const NodePtr& cond = while_node->children[0];
  const NodePtr& lhs = cond->children[0];
  const NodePtr& rhs = cond->children[1]->children[0];
  const NodePtr& body = while_node->children[1];

  NodePtr reduced_cond = node(
      K::Compare, "",
      {lhs, node(K::CmpOp, "<",
                 {node(K::BinOp, "-", {rhs, number(std::to_string(k))})})});
  NodePtr reduced_while =
      node(K::While, "", {reduced_cond, body, py::empty_node()});

  // Guard is the loop condition with operands mirrored.
  NodePtr guard = node(K::Compare, "", {rhs, node(K::CmpOp, ">", {lhs})});

  std::vector<NodePtr> repl = {reduced_while};
  for (int copy = 0; copy < k; ++copy) {
    repl.push_back(node(K::If, "", {guard, body, py::empty_node()}));
  }
  NodePath block_path(site.path.begin(), site.path.end() - 1);
  return splice_block(tree, block_path, site.path.back(), repl);
}

std::string fresh_identifier(SplitMix64* rng,
                             const std::set<std::string>& taken) {
  static const std::string letters =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  static const std::string alnum =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  while (true) {
    std::string id;
    id += letters[rng->below(letters.size())];
    for (int i = 1; i < 8; ++i) id += alnum[rng->below(alnum.size())];
    if (taken.count(id) || py::is_python_keyword(id) ||
        py::is_python_builtin(id)) {
      continue;
    }
    return id;
  }
}

std::vector<MutationVariant> generate_variants(const Program& program,
                                               uint64_t rng_seed) {
  NodePtr tree = py::parse(program.source);
  py::ScopeTable scopes = py::analyze_scopes(tree);

  std::vector<MutationVariant> variants;
  for (MutationClass cls : kAllMutationClasses) {
    std::vector<MutationSite> sites = find_sites(tree, cls);
    bool chained = false;
    if (cls == MutationClass::RenameVariable) {
      // The entry function keeps its name: the test suite calls it.
      std::erase_if(sites, [&](const MutationSite& s) {
        auto [scope, bname] = parse_rename_detail(s.detail);
        return scope == 0 && bname == program.entry_name;
      });
    }
    if (cls == MutationClass::UnrollLoop && sites.empty()) {
      // No while loop: chain through for-to-while conversion.
      py::walk(tree, [&](const NodePtr& n, const NodePath& path) {
        if (is_chain_unrollable_for(n)) {
          sites.push_back(MutationSite{cls, path, "chain", 0});
        }
      });
      chained = true;
    }
    if (sites.empty()) continue;

    SplitMix64 rng(hash_combine(hash_combine(rng_seed, program.id),
                                mutation_class_name(cls)));
    // Up to two distinct sites, uniform without replacement.
    std::vector<size_t> picked;
    size_t want = std::min<size_t>(2, sites.size());
    while (picked.size() < want) {
      size_t idx = rng.below(sites.size());
      if (std::find(picked.begin(), picked.end(), idx) == picked.end()) {
        picked.push_back(idx);
      }
    }

    for (size_t idx : picked) {
      MutationSite site = sites[idx];
      MutationVariant variant;
      variant.parent_id = program.id;
      variant.cls = cls;
      variant.seed = rng_seed;
      try {
        NodePtr mutated;
        switch (cls) {
          case MutationClass::RenameVariable:
            mutated = rename_variable(tree, scopes, site, rng_seed);
            break;
          case MutationClass::MirrorComparison:
            mutated = mirror_comparison(tree, site);
            break;
          case MutationClass::SwapIfElse:
            mutated = swap_if_else(tree, site);
            break;
          case MutationClass::ForToWhile:
            mutated = for_to_while(tree, site);
            break;
          case MutationClass::UnrollLoop: {
            site.unroll_count = 1 + static_cast<int>(rng.below(2));
            NodePtr base = tree;
            MutationSite while_site = site;
            if (chained) {
              base = for_to_while(tree, site);
              // The conversion puts the while loop at a fixed offset after
              // the spliced statements; locate it at the same block.
              NodePath block_path(site.path.begin(), site.path.end() - 1);
              NodePtr block = py::node_at(base, block_path);
              while_site.path = block_path;
              for (size_t i = site.path.back();
                   i < block->children.size(); ++i) {
                if (block->children[i]->kind == K::While) {
                  while_site.path.push_back(static_cast<int>(i));
                  break;
                }
              }
            }
            mutated = unroll_loop(base, while_site, site.unroll_count);
            break;
          }
        }
        variant.site = site;
        variant.source = py::emit(mutated);
        variant.verified = VerifyStatus::Pending;
        variants.push_back(std::move(variant));
      } catch (const MutationError&) {
        // Applicability races (e.g. rename poisoned bindings) contribute
        // nothing.
      }
    }
  }
  return variants;
}

std::string variant_to_json(const MutationVariant& v) {
  nlohmann::json j = {
      {"parent_id", v.parent_id},
      {"class", mutation_class_name(v.cls)},
      {"seed", v.seed},
      {"site", py::path_to_string(v.site.path) +
                   (v.site.detail.empty() ? "" : "#" + v.site.detail)},
      {"k", v.site.unroll_count ? nlohmann::json(v.site.unroll_count)
                                : nlohmann::json(nullptr)},
      {"source", v.source},
      {"verified", verify_status_name(v.verified)}};
  return j.dump();
}

MutationVariant variant_from_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  MutationVariant v;
  v.parent_id = j.at("parent_id").get<std::string>();
  auto cls = mutation_class_from_name(j.at("class").get<std::string>());
  if (!cls) throw MutationError("unknown mutation class in variant record");
  v.cls = *cls;
  v.seed = j.value("seed", 0ULL);
  std::string site = j.at("site").get<std::string>();
  size_t hash_pos = site.find('#');
  v.site.cls = v.cls;
  v.site.path = py::path_from_string(site.substr(0, hash_pos));
  if (hash_pos != std::string::npos) v.site.detail = site.substr(hash_pos + 1);
  if (!j.at("k").is_null()) v.site.unroll_count = j.at("k").get<int>();
  v.source = j.at("source").get<std::string>();
  auto status = verify_status_from_name(j.at("verified").get<std::string>());
  if (!status) throw MutationError("unknown verify status in variant record");
  v.verified = *status;
  return v;
}

std::vector<MutationVariant> read_variants_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MutationError("cannot open " + path);
  std::vector<MutationVariant> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(variant_from_json(line));
  }
  return out;
}

void write_variants_jsonl(const std::string& path,
                          const std::vector<MutationVariant>& variants) {
  std::ofstream out(path);
  if (!out) throw MutationError("cannot open " + path + " for writing");
  for (const auto& v : variants) out << variant_to_json(v) << "\n";
}

}  // namespace mutabench
