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

#ifndef MUTABENCH_INGEST_HPP
#define MUTABENCH_INGEST_HPP

#include <string>
#include <vector>

#include "mutabench/program.hpp"

namespace mutabench {

struct ExclusionEntry {
  std::string id;     // record id, or "line:<n>" when no id was readable
  std::string reason;
};

struct IngestResult {
  std::vector<Program> programs;
  std::vector<ExclusionEntry> excluded;
};

// Normalizes a benchmark export (JSONL, one object per line) into Program
// records. Malformed, unparseable, invariant-violating, or nondeterministic
// entries are excluded with reasons instead of aborting the run.
//
// Accepted layouts per origin:
//  - LiveCodeBench: {"question_id"|"id", "code", "function_name",
//    "input", "output"} or {"...", "tests": [{"input", "expected"}]}
//  - CruxEval: {"id", "code", "input", "output"} with entry function `f`
//  - Custom: this artifact's normalized record
//    {"id", "source", "entry", "tests": [...], "origin"}
IngestResult ingest_file(const std::string& path, BenchmarkOrigin origin);
IngestResult ingest_lines(const std::vector<std::string>& lines,
                          BenchmarkOrigin origin);

std::string exclusions_to_json(const std::vector<ExclusionEntry>& excluded);

}  // namespace mutabench

#endif  // MUTABENCH_INGEST_HPP
