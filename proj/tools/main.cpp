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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mutabench/ingest.hpp"
#include "mutabench/manifest.hpp"
#include "mutabench/metrics.hpp"
#include "mutabench/mutation.hpp"
#include "mutabench/sandbox.hpp"
#include "mutabench/session.hpp"
#include "mutabench/version.hpp"

namespace fs = std::filesystem;
using namespace mutabench;

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
            c == '_' || c == '.')
               ? c
               : '_';
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to jobs worker threads.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  int count = std::min<size_t>(static_cast<size_t>(jobs), n);
  for (int w = 0; w < count; ++w) {
    workers.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

int verify_variants(std::vector<MutationVariant>* variants,
                    const std::vector<Program>& programs,
                    const std::string& python_bin, double timeout_s,
                    int jobs) {
  std::map<std::string, const Program*> by_id;
  for (const auto& p : programs) by_id[p.id] = &p;
  Sandbox sandbox(python_bin);
  std::atomic<int> rejected{0};
  parallel_for(variants->size(), jobs, [&](size_t i) {
    MutationVariant& v = (*variants)[i];
    if (v.verified != VerifyStatus::Pending) return;
    auto it = by_id.find(v.parent_id);
    if (it == by_id.end()) {
      v.verified = VerifyStatus::Rejected;
      ++rejected;
      return;
    }
    ExecutionResult r = sandbox.verify(v.source, it->second->entry_name,
                                       it->second->tests, timeout_s);
    v.verified = r.status == ExecStatus::Passed ? VerifyStatus::Equivalent
                                                : VerifyStatus::Rejected;
    if (v.verified == VerifyStatus::Rejected) ++rejected;
  });
  return rejected.load();
}

int cmd_ingest(const std::string& in_path, const std::string& origin_name_arg,
               const std::string& out_path, const std::string& excl_path) {
  auto origin = origin_from_name(origin_name_arg);
  if (!origin) {
    std::cerr << "unknown origin: " << origin_name_arg << "\n";
    return 1;
  }
  IngestResult result = ingest_file(in_path, *origin);
  write_programs_jsonl(out_path, result.programs);
  if (!excl_path.empty()) {
    std::ofstream out(excl_path);
    out << exclusions_to_json(result.excluded) << "\n";
  }
  std::cout << "ingested " << result.programs.size() << " programs, excluded "
            << result.excluded.size() << "\n";
  for (const auto& e : result.excluded) {
    std::cerr << "  excluded " << e.id << ": " << e.reason << "\n";
  }
  return 0;
}

int cmd_mutate(const std::string& benchmark, uint64_t seed,
               const std::string& out_path, const std::string& python_bin,
               double timeout_s, int jobs, bool skip_verify) {
  std::vector<Program> programs = read_programs_jsonl(benchmark);
  std::vector<MutationVariant> variants;
  for (const auto& p : programs) {
    try {
      auto vs = generate_variants(p, seed);
      variants.insert(variants.end(), vs.begin(), vs.end());
    } catch (const std::exception& e) {
      std::cerr << "  " << p.id << ": " << e.what() << "\n";
    }
  }
  int rejected = 0;
  if (!skip_verify) {
    rejected = verify_variants(&variants, programs, python_bin, timeout_s, jobs);
  }
  write_variants_jsonl(out_path, variants);
  std::cout << "generated " << variants.size() << " variants ("
            << (skip_verify ? "unverified"
                            : std::to_string(variants.size() - rejected) +
                                  " equivalent, " + std::to_string(rejected) +
                                  " rejected")
            << ")\n";
  return 0;
}

int cmd_verify(const std::string& benchmark, const std::string& variants_path,
               const std::string& out_path, const std::string& python_bin,
               double timeout_s, int jobs) {
  std::vector<Program> programs = read_programs_jsonl(benchmark);
  std::vector<MutationVariant> variants = read_variants_jsonl(variants_path);
  int rejected =
      verify_variants(&variants, programs, python_bin, timeout_s, jobs);
  write_variants_jsonl(out_path.empty() ? variants_path : out_path, variants);
  std::cout << "verified " << variants.size() << " variants, rejected "
            << rejected << "\n";
  return 0;
}

struct EvalPlanItem {
  SessionSubject subject;
  std::string file_stem;
};

int cmd_evaluate(const std::string& benchmark,
                 const std::string& variants_path, const std::string& endpoint,
                 const std::string& model_name, bool single_turn,
                 double budget_s, int max_iterations,
                 const std::string& python_bin, uint64_t seed, int jobs,
                 bool resume, const std::string& outdir) {
  std::vector<Program> programs = read_programs_jsonl(benchmark);
  std::vector<MutationVariant> variants;
  if (!variants_path.empty()) {
    variants = read_variants_jsonl(variants_path);
  }

  ModelProfile profile;
  profile.name = model_name;
  profile.endpoint = endpoint;
  profile.supports_multi_turn = !single_turn;
  profile.max_iterations = single_turn ? 1 : max_iterations;

  fs::create_directories(fs::path(outdir) / "sessions");
  RunManifest manifest = make_manifest(seed, benchmark, {profile}, budget_s);
  write_manifest((fs::path(outdir) / "manifest.json").string(), manifest);

  std::map<std::string, const Program*> by_id;
  for (const auto& p : programs) by_id[p.id] = &p;

  std::vector<EvalPlanItem> plan;
  for (const auto& p : programs) {
    if (p.tests.empty()) continue;
    EvalPlanItem item;
    item.subject = {p.id, "", "", p.source, p.entry_name,
                    p.tests[0].input_expr, p.tests[0].expected_output_expr};
    item.file_stem = sanitize(model_name) + "__" + sanitize(p.id) + "__orig";
    plan.push_back(std::move(item));
  }
  std::map<std::string, int> variant_counter;
  for (const auto& v : variants) {
    if (v.verified != VerifyStatus::Equivalent) continue;
    auto it = by_id.find(v.parent_id);
    if (it == by_id.end() || it->second->tests.empty()) continue;
    const Program& p = *it->second;
    std::string key = v.parent_id + "/" + mutation_class_name(v.cls) + "/" +
                      std::to_string(variant_counter[v.parent_id + "/" +
                                                     mutation_class_name(v.cls)]++);
    EvalPlanItem item;
    item.subject = {p.id,
                    mutation_class_name(v.cls),
                    key,
                    v.source,
                    p.entry_name,
                    p.tests[0].input_expr,
                    p.tests[0].expected_output_expr};
    item.file_stem = sanitize(model_name) + "__" + sanitize(key);
    plan.push_back(std::move(item));
  }

  Sandbox sandbox(python_bin);
  ChatClient client(endpoint);
  std::atomic<int> done{0}, skipped{0}, failed{0};
  std::mutex log_mu;
  parallel_for(plan.size(), jobs, [&](size_t i) {
    const EvalPlanItem& item = plan[i];
    fs::path path = fs::path(outdir) / "sessions" / (item.file_stem + ".json");
    if (resume && fs::exists(path)) {
      ++skipped;
      return;
    }
    Session s = run_session(item.subject, profile, client, sandbox, budget_s,
                            path.string());
    if (s.failed) ++failed;
    ++done;
    std::lock_guard<std::mutex> lock(log_mu);
    std::cout << item.file_stem << ": "
              << termination_name(s.outcome.termination) << " ("
              << s.outcome.iterations_used << " iterations)\n";
  });
  std::cout << "sessions: " << done << " run, " << skipped << " skipped, "
            << failed << " failed\n";
  return 0;
}

std::vector<Session> load_sessions(const std::string& path) {
  std::vector<Session> sessions;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f);
      std::stringstream ss;
      ss << in.rdbuf();
      std::string text = ss.str();
      if (text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      sessions.push_back(session_from_json(text));
    }
  } else {
    sessions = read_sessions_jsonl(path);
  }
  return sessions;
}

int cmd_report(const std::string& sessions_path,
               const std::string& annotations_path,
               const std::string& out_prefix,
               const std::vector<std::string>& single_turn_names) {
  std::vector<Session> sessions = load_sessions(sessions_path);
  OutcomeMatrix matrix = OutcomeMatrix::from_sessions(sessions);
  std::vector<AnnotationRecord> annotations;
  if (!annotations_path.empty()) {
    annotations = read_annotations_csv(annotations_path);
  }
  std::set<std::string> single_turn(single_turn_names.begin(),
                                    single_turn_names.end());
  MetricsReport report = build_report(matrix, annotations, single_turn);
  {
    std::ofstream out(out_prefix + ".json");
    out << report_to_json(report) << "\n";
  }
  std::string text = report_to_text(report);
  {
    std::ofstream out(out_prefix + ".txt");
    out << text;
  }
  std::cout << text;
  return 0;
}

int cmd_annotate_import(const std::string& in_path,
                        const std::string& out_path) {
  // Validates the CSV and rewrites it normalized (header + trimmed rows).
  std::vector<AnnotationRecord> records = read_annotations_csv(in_path);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  out << "model,program_id,label,annotator\n";
  for (const auto& r : records) {
    out << r.model << "," << r.program_id << ","
        << annotation_label_name(r.label) << "," << r.annotator << "\n";
  }
  std::cout << "imported " << records.size() << " annotations\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantics-preserving mutation benchmark pipeline"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  uint64_t seed = 0;
  double budget_s = 90.0;
  int max_iterations = 5;
  std::string python_bin;
  std::string endpoint;
  std::string model;
  int jobs = 1;
  bool resume = false;

  // ingest
  std::string in_path, origin = "custom", out_path, excl_path;
  auto* ingest = app.add_subcommand("ingest", "Normalize a benchmark export");
  ingest->add_option("--in", in_path, "Benchmark export (JSONL)")->required();
  ingest->add_option("--origin", origin,
                     "livecodebench | cruxeval | custom");
  ingest->add_option("--out", out_path, "Normalized JSONL")->required();
  ingest->add_option("--exclusions", excl_path, "Exclusion report (JSON)");

  // mutate
  std::string benchmark, variants_out, variants_in;
  double test_timeout = 10.0;
  bool skip_verify = false;
  auto* mutate =
      app.add_subcommand("mutate", "Generate and verify mutation variants");
  mutate->add_option("--benchmark", benchmark, "Normalized benchmark JSONL")
      ->required();
  mutate->add_option("--seed", seed, "Mutation RNG seed");
  mutate->add_option("--out", variants_out, "Variant corpus JSONL")->required();
  mutate->add_option("--python-bin", python_bin, "Python interpreter");
  mutate->add_option("--test-timeout-s", test_timeout, "Per-test timeout");
  mutate->add_option("--jobs", jobs, "Parallel verifier processes");
  mutate->add_flag("--skip-verify", skip_verify,
                   "Emit pending variants without running the verifier");

  // verify
  std::string verify_out;
  auto* verify =
      app.add_subcommand("verify", "Verify pending variants against tests");
  verify->add_option("--benchmark", benchmark, "Normalized benchmark JSONL")
      ->required();
  verify->add_option("--variants", variants_in, "Variant corpus JSONL")
      ->required();
  verify->add_option("--out", verify_out, "Output path (default: in place)");
  verify->add_option("--python-bin", python_bin, "Python interpreter");
  verify->add_option("--test-timeout-s", test_timeout, "Per-test timeout");
  verify->add_option("--jobs", jobs, "Parallel verifier processes");

  // evaluate
  std::string outdir = "runs";
  bool single_turn = false;
  auto* evaluate =
      app.add_subcommand("evaluate", "Run model sessions over a corpus");
  evaluate->add_option("--benchmark", benchmark, "Normalized benchmark JSONL")
      ->required();
  evaluate->add_option("--variants", variants_in,
                       "Verified variant corpus JSONL");
  evaluate->add_option("--endpoint", endpoint, "Chat-completions base URL")
      ->required();
  evaluate->add_option("--model", model, "Model name")->required();
  evaluate->add_flag("--single-turn", single_turn,
                     "Model cannot accept feedback turns");
  evaluate->add_option("--budget-s", budget_s, "Per-session time budget");
  evaluate->add_option("--max-iterations", max_iterations,
                       "Iteration cap for multi-turn models");
  evaluate->add_option("--python-bin", python_bin, "Python interpreter");
  evaluate->add_option("--seed", seed, "Manifest seed");
  evaluate->add_option("--jobs", jobs, "Concurrent sessions");
  evaluate->add_flag("--resume", resume, "Skip already-completed sessions");
  evaluate->add_option("--outdir", outdir, "Run directory");

  // report
  std::string sessions_path, annotations_path, out_prefix = "report";
  std::vector<std::string> single_turn_names;
  auto* report = app.add_subcommand("report", "Compute metrics tables");
  report
      ->add_option("--sessions", sessions_path,
                   "Sessions JSONL file or run directory")
      ->required();
  report->add_option("--annotations", annotations_path,
                     "Annotation labels CSV");
  report->add_option("--out-prefix", out_prefix, "Output file prefix");
  report->add_option("--single-turn-model", single_turn_names,
                     "Model names rendered with '--' multi-iteration cells");

  // annotate-import
  std::string ann_in, ann_out;
  auto* annotate =
      app.add_subcommand("annotate-import", "Validate and normalize labels");
  annotate->add_option("--in", ann_in, "Annotation CSV")->required();
  annotate->add_option("--out", ann_out, "Normalized CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(in_path, origin, out_path, excl_path);
    if (*mutate) {
      return cmd_mutate(benchmark, seed, variants_out, python_bin,
                        test_timeout, jobs, skip_verify);
    }
    if (*verify) {
      return cmd_verify(benchmark, variants_in, verify_out, python_bin,
                        test_timeout, jobs);
    }
    if (*evaluate) {
      return cmd_evaluate(benchmark, variants_in, endpoint, model, single_turn,
                          budget_s, max_iterations, python_bin, seed, jobs,
                          resume, outdir);
    }
    if (*report) {
      return cmd_report(sessions_path, annotations_path, out_prefix,
                        single_turn_names);
    }
    if (*annotate) return cmd_annotate_import(ann_in, ann_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
