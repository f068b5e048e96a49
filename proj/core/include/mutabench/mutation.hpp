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

#ifndef MUTABENCH_MUTATION_HPP
#define MUTABENCH_MUTATION_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutabench/ast.hpp"
#include "mutabench/program.hpp"
#include "mutabench/scopes.hpp"
#include "mutabench/util/rng.hpp"

namespace mutabench {

enum class MutationClass {
  RenameVariable,
  MirrorComparison,
  SwapIfElse,
  ForToWhile,
  UnrollLoop,
};

inline constexpr MutationClass kAllMutationClasses[] = {
    MutationClass::RenameVariable, MutationClass::MirrorComparison,
    MutationClass::SwapIfElse, MutationClass::ForToWhile,
    MutationClass::UnrollLoop};

std::string mutation_class_name(MutationClass cls);
std::optional<MutationClass> mutation_class_from_name(const std::string& name);

struct MutationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Inapplicable : MutationError {
  using MutationError::MutationError;
};
struct IneligibleProgram : MutationError {
  using MutationError::MutationError;
};
struct IneligibleBinding : MutationError {
  using MutationError::MutationError;
};

struct MutationSite {
  MutationClass cls;
  py::NodePath path;     // the rewritten node (binding definition for renames)
  std::string detail;    // renames: "<scope-id>:<name>"; other classes: ""
  int unroll_count = 0;  // UnrollLoop only, in {1, 2}
};

enum class VerifyStatus { Pending, Equivalent, Rejected };

std::string verify_status_name(VerifyStatus status);
std::optional<VerifyStatus> verify_status_from_name(const std::string& name);

struct MutationVariant {
  std::string parent_id;
  MutationClass cls;
  MutationSite site;
  uint64_t seed = 0;
  std::string source;
  VerifyStatus verified = VerifyStatus::Pending;
};

// Every applicable site for the operator, in pre-order traversal order.
// For RenameVariable each site is a rename-eligible binding, addressed by
// its definition node; an ineligible program yields no rename sites.
std::vector<MutationSite> find_sites(const py::NodePtr& tree,
                                     MutationClass cls);

// The five operators. Each returns a new tree; the input is never modified.
py::NodePtr rename_variable(const py::NodePtr& tree,
                            const py::ScopeTable& scopes,
                            const MutationSite& site, uint64_t rng_seed);
// Like rename_variable but reports the chosen fresh identifier.
py::NodePtr rename_variable(const py::NodePtr& tree,
                            const py::ScopeTable& scopes,
                            const MutationSite& site, uint64_t rng_seed,
                            std::string* fresh_name_out);
py::NodePtr mirror_comparison(const py::NodePtr& tree,
                              const MutationSite& site);
py::NodePtr swap_if_else(const py::NodePtr& tree, const MutationSite& site);
py::NodePtr for_to_while(const py::NodePtr& tree, const MutationSite& site);
py::NodePtr unroll_loop(const py::NodePtr& tree, const MutationSite& site,
                        int k);

// 8-character mixed-case alphanumeric identifier starting with a letter,
// avoiding the given taken set, keywords and builtins.
std::string fresh_identifier(SplitMix64* rng,
                             const std::set<std::string>& taken);

// Variant-generation policy: per class, up to two distinct applicable sites
// sampled uniformly without replacement. When UnrollLoop finds no while loop
// it chains through for_to_while; the composite still counts as one
// UnrollLoop mutation. Variants are returned pending verification.
std::vector<MutationVariant> generate_variants(const Program& program,
                                               uint64_t rng_seed);

// Variant record JSONL serialization.
std::string variant_to_json(const MutationVariant& variant);
MutationVariant variant_from_json(const std::string& line);
std::vector<MutationVariant> read_variants_jsonl(const std::string& path);
void write_variants_jsonl(const std::string& path,
                          const std::vector<MutationVariant>& variants);

}  // namespace mutabench

#endif  // MUTABENCH_MUTATION_HPP
