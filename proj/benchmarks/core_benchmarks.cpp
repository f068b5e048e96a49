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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "mutabench/mutation.hpp"
#include "mutabench/parser.hpp"
#include "mutabench/printer.hpp"
#include "mutabench/program.hpp"
#include "mutabench/scopes.hpp"

namespace {

using namespace mutabench;

const std::vector<Program>& corpus() {
  static std::vector<Program> programs = read_programs_jsonl(
      std::string(MUTABENCH_TEST_DATA_DIR) + "/desk_corpus.jsonl");
  return programs;
}

void BM_Parse(benchmark::State& state) {
  const auto& programs = corpus();
  for (auto _ : state) {
    for (const auto& p : programs) {
      benchmark::DoNotOptimize(py::parse(p.source));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(programs.size()));
}
BENCHMARK(BM_Parse);

void BM_Emit(benchmark::State& state) {
  std::vector<py::NodePtr> trees;
  for (const auto& p : corpus()) trees.push_back(py::parse(p.source));
  for (auto _ : state) {
    for (const auto& t : trees) {
      benchmark::DoNotOptimize(py::emit(t));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(trees.size()));
}
BENCHMARK(BM_Emit);

void BM_AnalyzeScopes(benchmark::State& state) {
  std::vector<py::NodePtr> trees;
  for (const auto& p : corpus()) trees.push_back(py::parse(p.source));
  for (auto _ : state) {
    for (const auto& t : trees) {
      benchmark::DoNotOptimize(py::analyze_scopes(t));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(trees.size()));
}
BENCHMARK(BM_AnalyzeScopes);

void BM_FindSites(benchmark::State& state) {
  std::vector<py::NodePtr> trees;
  for (const auto& p : corpus()) trees.push_back(py::parse(p.source));
  for (auto _ : state) {
    for (const auto& t : trees) {
      for (MutationClass cls : kAllMutationClasses) {
        benchmark::DoNotOptimize(find_sites(t, cls));
      }
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(trees.size()));
}
BENCHMARK(BM_FindSites);

void BM_GenerateVariants(benchmark::State& state) {
  const auto& programs = corpus();
  for (auto _ : state) {
    for (const auto& p : programs) {
      benchmark::DoNotOptimize(generate_variants(p, 42));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(programs.size()));
}
BENCHMARK(BM_GenerateVariants);

}  // namespace

BENCHMARK_MAIN();
