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

#ifndef MUTABENCH_MANIFEST_HPP
#define MUTABENCH_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mutabench/session.hpp"

namespace mutabench {

// Reproducibility record for a run: the same manifest against the same
// endpoints yields the same prompts and variant corpus.
struct RunManifest {
  std::string id;              // derived from content hash
  uint64_t seed = 0;
  std::string benchmark_path;
  std::string benchmark_sha256;
  std::vector<ModelProfile> profiles;
  double budget_s = 90.0;
  std::string created_utc;     // ISO 8601
  std::string tool_version;
};

// Fills id (content hash), benchmark hash, and timestamp.
RunManifest make_manifest(uint64_t seed, const std::string& benchmark_path,
                          const std::vector<ModelProfile>& profiles,
                          double budget_s);

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

}  // namespace mutabench

#endif  // MUTABENCH_MANIFEST_HPP
