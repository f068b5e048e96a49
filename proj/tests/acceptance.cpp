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
//
// Release gate. Each criterion prints exactly one [PASS]/[FAIL]/[SKIP] line;
// any failure makes the process exit non-zero.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "mutabench/extract.hpp"
#include "mutabench/ingest.hpp"
#include "mutabench/lexer.hpp"
#include "mutabench/metrics.hpp"
#include "mutabench/mutation.hpp"
#include "mutabench/parser.hpp"
#include "mutabench/printer.hpp"
#include "mutabench/program.hpp"
#include "mutabench/prompts.hpp"
#include "mutabench/sandbox.hpp"
#include "mutabench/scopes.hpp"
#include "mutabench/session.hpp"
#include "mutabench/util/rng.hpp"

using namespace mutabench;
using namespace mutabench::py;

namespace {

int g_failures = 0;

void report(const std::string& criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion;
  if (!detail.empty()) std::cout << " -- " << detail;
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

void report_skip(const std::string& criterion, const std::string& reason) {
  std::cout << "[SKIP] " << criterion << " -- " << reason << std::endl;
}

struct Check {
  bool ok = true;
  std::ostringstream why;
  void fail(const std::string& msg) {
    if (ok) {
      why << msg;
    } else {
      why << "; " << msg;
    }
    ok = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename Fn>
void parallel_for(size_t n, int jobs, Fn fn) {
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& w : workers) w.join();
}

const std::vector<Program>& corpus() {
  static std::vector<Program> programs = read_programs_jsonl(
      std::string(MUTABENCH_TEST_DATA_DIR) + "/desk_corpus.jsonl");
  return programs;
}

struct VariantSet {
  const Program* parent;
  std::vector<MutationVariant> variants;
};

const std::vector<VariantSet>& corpus_variants() {
  static std::vector<VariantSet> sets = [] {
    std::vector<VariantSet> out;
    for (const auto& p : corpus()) {
      out.push_back({&p, generate_variants(p, 42)});
    }
    return out;
  }();
  return sets;
}

// ---------------------------------------------------------------------------
// Golden mutations: the reference function and its five transformations.

const char* kOriginal =
    "def f(nums):\n"
    "    sum = 0\n"
    "    for n in nums:\n"
    "        if n % 2 == 0:\n"
    "            sum += n\n"
    "        else:\n"
    "            sum += 0\n"
    "    return sum\n";

const char* kRenamed =
    "def f(nums):\n"
    "    FRESH = 0\n"
    "    for n in nums:\n"
    "        if n % 2 == 0:\n"
    "            FRESH += n\n"
    "        else:\n"
    "            FRESH += 0\n"
    "    return FRESH\n";

const char* kMirrored =
    "def f(nums):\n"
    "    sum = 0\n"
    "    for n in nums:\n"
    "        if 0 == n % 2:\n"
    "            sum += n\n"
    "        else:\n"
    "            sum += 0\n"
    "    return sum\n";

const char* kSwapped =
    "def f(nums):\n"
    "    sum = 0\n"
    "    for n in nums:\n"
    "        if not n % 2 == 0:\n"
    "            sum += 0\n"
    "        else:\n"
    "            sum += n\n"
    "    return sum\n";

const char* kWhileForm =
    "def f(nums):\n"
    "    sum = 0\n"
    "    i = 0\n"
    "    while i < len(nums):\n"
    "        n = nums[i]\n"
    "        if n % 2 == 0:\n"
    "            sum += n\n"
    "        else:\n"
    "            sum += 0\n"
    "        i += 1\n"
    "    return sum\n";

const char* kUnrolled =
    "def f(nums):\n"
    "    sum = 0\n"
    "    i = 0\n"
    "    while i < (len(nums) - 1):\n"
    "        n = nums[i]\n"
    "        if n % 2 == 0:\n"
    "            sum += n\n"
    "        else:\n"
    "            sum += 0\n"
    "        i += 1\n"
    "    if len(nums) > i:\n"
    "        n = nums[i]\n"
    "        if n % 2 == 0:\n"
    "            sum += n\n"
    "        else:\n"
    "            sum += 0\n"
    "        i += 1\n"
    "    return sum\n";

std::string replace_all(std::string text, const std::string& from,
                        const std::string& to) {
  size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

void check_golden_mutations() {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    auto tree = parse(kOriginal);
    auto scopes = analyze_scopes(tree);

    // Rename, up to the fresh identifier.
    MutationSite rename_site{};
    bool found = false;
    for (const auto& s : find_sites(tree, MutationClass::RenameVariable)) {
      if (s.detail.size() >= 4 &&
          s.detail.substr(s.detail.size() - 4) == ":sum") {
        rename_site = s;
        found = true;
      }
    }
    if (!found) c.fail("no rename site for 'sum'");
    if (found) {
      std::string fresh;
      auto mutated = rename_variable(tree, scopes, rename_site, 1, &fresh);
      std::string normalized = replace_all(emit(mutated), fresh, "FRESH");
      if (!tree_equal(parse(normalized), parse(kRenamed))) {
        c.fail("rename golden mismatch");
      }
    }

    auto check_one = [&](MutationClass cls, const char* golden,
                         const char* label) {
      auto sites = find_sites(tree, cls);
      if (sites.empty()) {
        c.fail(std::string(label) + ": no applicable site");
        return;
      }
      NodePtr mutated;
      switch (cls) {
        case MutationClass::MirrorComparison:
          mutated = mirror_comparison(tree, sites[0]);
          break;
        case MutationClass::SwapIfElse:
          mutated = swap_if_else(tree, sites[0]);
          break;
        case MutationClass::ForToWhile:
          mutated = for_to_while(tree, sites[0]);
          break;
        default:
          return;
      }
      if (!tree_equal(mutated, parse(golden))) {
        c.fail(std::string(label) + " golden mismatch");
      }
    };
    check_one(MutationClass::MirrorComparison, kMirrored, "mirror");
    check_one(MutationClass::SwapIfElse, kSwapped, "swap");
    check_one(MutationClass::ForToWhile, kWhileForm, "for-to-while");

    // Unroll chains through the while form with k = 1.
    auto while_tree = parse(kWhileForm);
    auto unroll_sites = find_sites(while_tree, MutationClass::UnrollLoop);
    if (unroll_sites.empty()) {
      c.fail("unroll: no applicable site");
    } else if (!tree_equal(unroll_loop(while_tree, unroll_sites[0], 1),
                           parse(kUnrolled))) {
      c.fail("unroll golden mismatch");
    }
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) c.fail("too slow");
  std::ostringstream detail;
  detail << c.why.str() << (c.ok ? "5 operators vs references, " : " ")
         << "runtime " << elapsed << " s";
  report("golden-mutations", c.ok, detail.str());
}

// ---------------------------------------------------------------------------
// Semantic gate.

void check_semantic_gate(const Sandbox& sandbox, int jobs) {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  size_t variant_count = 0;
  try {
    const auto& sets = corpus_variants();
    if (corpus().size() < 50) c.fail("corpus smaller than 50 programs");
    std::mutex mu;
    std::vector<std::pair<const Program*, const MutationVariant*>> work;
    for (const auto& vs : sets) {
      for (const auto& v : vs.variants) work.push_back({vs.parent, &v});
    }
    variant_count = work.size();
    parallel_for(work.size(), jobs, [&](size_t i) {
      const auto& [parent, variant] = work[i];
      try {
        auto r = sandbox.verify(variant->source, parent->entry_name,
                                parent->tests, 10.0);
        if (r.status != ExecStatus::Passed) {
          std::lock_guard<std::mutex> lock(mu);
          c.fail(parent->id + "/" + mutation_class_name(variant->cls) +
                 " not equivalent (" + exec_status_name(r.status) + ")");
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        c.fail(parent->id + ": " + e.what());
      }
    });

    // A deliberately broken mutant (off-by-one in the accumulator) must be
    // rejected by the same gate.
    const char* broken =
        "def f(nums):\n"
        "    total = 0\n"
        "    for n in nums:\n"
        "        if n % 2 == 0:\n"
        "            total += n + 1\n"
        "    return total\n";
    auto rejected = sandbox.verify(
        broken, "f", {{"[1, 2, 3, 4]", "6"}, {"[]", "0"}, {"[2]", "2"}}, 10.0);
    if (rejected.status != ExecStatus::Failed) {
      c.fail("off-by-one mutant was not rejected");
    }
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  double elapsed = seconds_since(t0);
  if (elapsed >= 300.0) c.fail("too slow");
  std::ostringstream detail;
  detail << c.why.str();
  if (c.ok) {
    detail << corpus().size() << " programs, " << variant_count
           << " variants equivalent, broken mutant rejected, ";
  }
  detail << "runtime " << elapsed << " s";
  report("semantic-gate", c.ok, detail.str());
}

// ---------------------------------------------------------------------------
// Differential oracle: 50 seeded random inputs per program; every verified
// variant must agree with its parent exactly.

std::string perturb_input(const std::string& input_expr, uint64_t seed) {
  auto tree = parse("_cap(" + input_expr + ")\n");
  SplitMix64 rng(seed);
  std::vector<std::pair<NodePath, NodePtr>> repls;
  walk(tree, [&](const NodePtr& n, const NodePath& path) {
    if (n->kind == NodeKind::NumberLit) {
      // Integers only; keep magnitudes small so every program terminates
      // quickly on perturbed inputs.
      if (n->value.find_first_of(".eExXoObBjJ_") == std::string::npos) {
        std::string nv = std::to_string(1 + rng.below(10));
        repls.emplace_back(path, make_node(NodeKind::NumberLit, nv));
      }
    } else if (n->kind == NodeKind::StringLit) {
      std::string v = n->value;
      if (v.size() >= 2 && (v.front() == '\'' || v.front() == '"') &&
          v.find('\\') == std::string::npos) {
        for (size_t i = 1; i + 1 < v.size(); ++i) {
          v[i] = static_cast<char>('a' + rng.below(26));
        }
        repls.emplace_back(path, make_node(NodeKind::StringLit, v));
      }
    }
  });
  NodePtr t = tree;
  for (const auto& [path, node] : repls) t = replace_at(t, path, node);
  std::string out = emit(t);
  size_t l = out.find('(');
  size_t r = out.rfind(')');
  return out.substr(l + 1, r - l - 1);
}

void check_differential_oracle(const Sandbox& sandbox, int jobs) {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::mutex mu;
  std::atomic<long> input_count{0};
  try {
    const auto& sets = corpus_variants();
    parallel_for(sets.size(), jobs, [&](size_t si) {
      const auto& vs = sets[si];
      const Program& p = *vs.parent;
      try {
        // 50 seeded perturbations of the program's own test inputs.
        std::vector<TestCase> probes;
        for (int i = 0; i < 50; ++i) {
          const std::string& base =
              p.tests[static_cast<size_t>(i) % p.tests.size()].input_expr;
          uint64_t seed = hash_combine(
              hash_combine(0xD1FFu, p.id), std::to_string(i));
          probes.push_back({perturb_input(base, seed), "0"});
        }
        // One batch run of the parent collects the reference outputs.
        auto ref = sandbox.verify(p.source, p.entry_name, probes, 5.0);
        std::vector<TestCase> oracle;
        for (size_t i = 0; i < ref.verdicts.size() && i < probes.size(); ++i) {
          // Inputs the parent itself cannot handle (raises) prove nothing.
          if (ref.verdicts[i].error.empty()) {
            oracle.push_back({probes[i].input_expr, ref.verdicts[i].actual});
          }
        }
        if (oracle.empty()) {
          std::lock_guard<std::mutex> lock(mu);
          c.fail(p.id + ": no usable oracle inputs");
          return;
        }
        input_count += static_cast<long>(oracle.size());
        for (const auto& v : vs.variants) {
          auto r = sandbox.verify(v.source, p.entry_name, oracle, 5.0);
          if (r.status != ExecStatus::Passed) {
            std::lock_guard<std::mutex> lock(mu);
            c.fail(p.id + "/" + mutation_class_name(v.cls) +
                   " disagrees with parent");
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        c.fail(p.id + ": " + e.what());
      }
    });
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  std::ostringstream detail;
  detail << c.why.str();
  if (c.ok) {
    detail << corpus().size() << " programs x 50 seeded inputs ("
           << input_count.load() << " usable), ";
  }
  detail << "runtime " << seconds_since(t0) << " s";
  report("differential-oracle", c.ok, detail.str());
}

// ---------------------------------------------------------------------------
// Property suite.

void check_property_suite() {
  Check c;
  try {
    int involutions = 0, bijections = 0, confinements = 0, site_checks = 0;
    for (const auto& vs : corpus_variants()) {
      const Program& p = *vs.parent;
      auto tree = parse(p.source);

      // Mirror involution on every applicable site.
      for (const auto& s :
           find_sites(tree, MutationClass::MirrorComparison)) {
        auto once = mirror_comparison(tree, s);
        if (!tree_equal(mirror_comparison(once, s), tree)) {
          c.fail(p.id + ": mirror involution broken at " +
                 path_to_string(s.path));
        }
        ++involutions;
      }

      // find_sites is stable under emit . parse.
      auto reparsed = parse(emit(tree));
      for (MutationClass cls : kAllMutationClasses) {
        auto a = find_sites(tree, cls);
        auto b = find_sites(reparsed, cls);
        bool same = a.size() == b.size();
        for (size_t i = 0; same && i < a.size(); ++i) {
          same = a[i].path == b[i].path && a[i].detail == b[i].detail &&
                 a[i].unroll_count == b[i].unroll_count;
        }
        if (!same) {
          c.fail(p.id + ": find_sites unstable for " +
                 mutation_class_name(cls));
        }
        ++site_checks;
      }

      for (const auto& v : vs.variants) {
        auto vtree = parse(v.source);
        if (v.cls == MutationClass::RenameVariable) {
          // Token bijection: equal streams except one name consistently
          // substituted, and normalizing it back recovers the parent.
          auto ptoks = tokenize(emit(tree));
          auto vtoks = tokenize(v.source);
          if (ptoks.size() != vtoks.size()) {
            c.fail(p.id + ": rename changed the token count");
            continue;
          }
          std::map<std::string, std::string> fwd, rev;
          bool good = true;
          std::string orig, fresh;
          for (size_t i = 0; i < ptoks.size() && good; ++i) {
            if (ptoks[i].kind != vtoks[i].kind) good = false;
            if (ptoks[i].kind == TokKind::Name) {
              auto [fit, fnew] = fwd.emplace(ptoks[i].text, vtoks[i].text);
              auto [rit, rnew] = rev.emplace(vtoks[i].text, ptoks[i].text);
              if (fit->second != vtoks[i].text ||
                  rit->second != ptoks[i].text) {
                good = false;
              }
              if (ptoks[i].text != vtoks[i].text) {
                orig = ptoks[i].text;
                fresh = vtoks[i].text;
              }
            } else if (ptoks[i].text != vtoks[i].text) {
              good = false;
            }
          }
          if (!good || fresh.empty()) {
            c.fail(p.id + ": rename token bijection broken");
            continue;
          }
          if (!tree_equal(parse(replace_all(v.source, fresh, orig)), tree)) {
            c.fail(p.id + ": rename normalization does not recover parent");
          }
          ++bijections;
        } else {
          // The diff is confined to the mutated node (expression rewrites)
          // or its enclosing block (statement splices).
          NodePath cp = v.site.path;
          if (v.cls == MutationClass::ForToWhile ||
              v.cls == MutationClass::UnrollLoop) {
            if (!cp.empty()) cp.pop_back();
          }
          bool confined =
              tree_equal(replace_at(tree, cp, node_at(vtree, cp)), vtree) &&
              tree_equal(replace_at(vtree, cp, node_at(tree, cp)), tree);
          if (!confined) {
            c.fail(p.id + "/" + mutation_class_name(v.cls) +
                   ": diff not confined to " + path_to_string(cp));
          }
          ++confinements;
        }
      }
    }
    if (involutions == 0 || bijections == 0 || confinements == 0) {
      c.fail("a property had no instances to check");
    }
    if (c.ok) {
      c.why << involutions << " involutions, " << bijections
            << " bijections, " << confinements << " confinements, "
            << site_checks << " site-stability checks";
    }
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  report("property-suite", c.ok, c.why.str());
}

// ---------------------------------------------------------------------------
// Protocol fixtures against a scripted mock endpoint.

class MockEndpoint {
 public:
  explicit MockEndpoint(std::vector<std::string> replies, double delay_s = 0.0)
      : replies_(std::move(replies)), delay_s_(delay_s) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      if (delay_s_ > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<int>(delay_s_ * 1000)));
      }
      std::string reply;
      {
        std::lock_guard<std::mutex> lock(mu_);
        requests_.push_back(req.body);
        reply = replies_[std::min(requests_.size() - 1, replies_.size() - 1)];
      }
      nlohmann::json body = {
          {"choices",
           {{{"message", {{"role", "assistant"}, {"content", reply}}}}}}};
      res.set_content(body.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }

  std::vector<std::string> user_turns(size_t i) {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<std::string> turns;
    if (i >= requests_.size()) return turns;
    nlohmann::json j = nlohmann::json::parse(requests_[i]);
    for (const auto& m : j["messages"]) {
      if (m["role"] == "user") turns.push_back(m["content"]);
    }
    return turns;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::vector<std::string> replies_;
  double delay_s_;
  std::mutex mu_;
  std::vector<std::string> requests_;
};

const char* kMinPossibleSum =
    "def minPossibleSum(n, target):\n"
    "    i = 1\n"
    "    arr = {1}\n"
    "    while len(arr) < n:\n"
    "        i += 1\n"
    "        if target - i not in arr:\n"
    "            arr.add(i)\n"
    "    return sum(arr)\n";

const std::string kReplyWrong =
    "The function builds the set {1, 2} and returns its sum.\n"
    "[ANSWER]assert minPossibleSum(1, 1) == 3[/ANSWER]";

const std::string kReplyRight =
    "The loop never runs because len({1}) < 1 is false.\n"
    "[ANSWER]assert minPossibleSum(1, 1) == 1[/ANSWER]";

SessionSubject fixture_subject() {
  SessionSubject s;
  s.id = "min-possible-sum";
  s.source = kMinPossibleSum;
  s.entry_name = "minPossibleSum";
  s.input_expr = "n=1, target=1";
  s.expected_output_expr = "1";
  return s;
}

void check_protocol_fixtures(const Sandbox& sandbox) {
  Check c;
  try {
    ModelProfile profile;
    profile.name = "mock";

    {  // Replayed dialogue: wrong, then right, with byte-exact requests.
      MockEndpoint mock({kReplyWrong, kReplyRight});
      ChatClient client(mock.url());
      Session s = run_session(fixture_subject(), profile, client, sandbox);
      if (!s.outcome.correct) c.fail("dialogue: not judged correct");
      if (s.outcome.iterations_used != 2) c.fail("dialogue: iterations != 2");
      auto first = mock.user_turns(0);
      auto second = mock.user_turns(1);
      std::string want_initial = build_initial_prompt(
          kMinPossibleSum, "minPossibleSum", "n=1, target=1");
      if (first.size() != 1 || first[0] != want_initial) {
        c.fail("dialogue: first request body mismatch");
      }
      if (second.size() != 2 || second[0] != want_initial ||
          second[1] != build_feedback_prompt(true)) {
        c.fail("dialogue: second request body mismatch");
      }
    }

    {  // Single-turn profile: exactly one exchange.
      MockEndpoint mock({kReplyWrong});
      ChatClient client(mock.url());
      ModelProfile single = profile;
      single.supports_multi_turn = false;
      Session s = run_session(fixture_subject(), single, client, sandbox);
      if (s.exchanges.size() != 1) c.fail("single-turn: exchanges != 1");
    }

    {  // Always wrong: terminates at the iteration cap.
      MockEndpoint mock({kReplyWrong});
      ChatClient client(mock.url());
      Session s = run_session(fixture_subject(), profile, client, sandbox);
      if (s.outcome.termination != Termination::IterationCap ||
          s.outcome.iterations_used != 5) {
        c.fail("always-wrong: did not stop at iteration_cap=5");
      }
    }

    {  // Slow endpoint against the real 90 s budget: time cap.
      MockEndpoint mock({kReplyWrong}, /*delay_s=*/50.0);
      ChatClient client(mock.url());
      Session s = run_session(fixture_subject(), profile, client, sandbox,
                              /*budget_s=*/90.0);
      if (s.outcome.termination != Termination::TimeCap) {
        c.fail("slow mock: did not terminate with time_cap");
      }
    }
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  report("protocol-fixtures", c.ok,
         c.ok ? "dialogue, single-turn, iteration cap, 90 s time cap"
              : c.why.str());
}

void check_extraction_fixtures() {
  Check c;
  auto first = extract_answer(kReplyWrong);
  if (!first || *first != "3") c.fail("first response: expected 3");
  auto second = extract_answer(kReplyRight);
  if (!second || *second != "1") c.fail("second response: expected 1");
  if (extract_answer("no tags, just prose").has_value()) {
    c.fail("tag-free response not treated as malformed");
  }
  report("extraction-fixtures", c.ok,
         c.ok ? "3, then 1, then malformed" : c.why.str());
}

// ---------------------------------------------------------------------------
// Metrics fixtures.

Session synth_session(const std::string& id, const std::string& cls,
                      const std::string& key, bool correct) {
  Session s;
  s.subject.id = id;
  s.subject.mutation_class = cls;
  s.subject.variant_key = key;
  s.model = "m";
  s.outcome.correct = correct;
  s.outcome.termination =
      correct ? Termination::Correct : Termination::IterationCap;
  return s;
}

void check_metrics_fixtures() {
  Check c;
  try {
    {  // 3 of 4 -> 75.0
      auto m = OutcomeMatrix::from_sessions(
          {synth_session("p1", "", "", true), synth_session("p2", "", "", true),
           synth_session("p3", "", "", true),
           synth_session("p4", "", "", false)});
      if (format_rate(correctness_rate(m, "m", "")) != "75.0") {
        c.fail("3-of-4 fixture != 75.0");
      }
    }
    {  // 2 recoveries of 10 -> 20.0
      std::vector<Session> sessions;
      for (int i = 0; i < 10; ++i) {
        std::string id = "p" + std::to_string(i);
        sessions.push_back(synth_session(id, "", "", i >= 4));
        sessions.push_back(
            synth_session(id, "SwapIfElse", id + "/si/0", i < 2));
      }
      auto m = OutcomeMatrix::from_sessions(sessions);
      if (format_rate(recovery_rate(m, "m", "SwapIfElse")) != "20.0") {
        c.fail("2-of-10 recovery fixture != 20.0");
      }
    }
    {  // union >= per-class max on 1000 randomized matrices
      std::mt19937 rng(7);
      const std::vector<std::string> classes = {
          "RenameVariable", "MirrorComparison", "SwapIfElse", "ForToWhile",
          "UnrollLoop"};
      for (int trial = 0; trial < 1000; ++trial) {
        OutcomeMatrix m;
        int n = 1 + static_cast<int>(rng() % 8);
        for (int p = 0; p < n; ++p) {
          ProgramOutcomes po;
          po.has_original = true;
          po.original_correct = rng() % 2 == 0;
          for (const auto& cls : classes) {
            int k = static_cast<int>(rng() % 3);
            for (int v = 0; v < k; ++v) po.variants[cls].push_back(rng() % 2);
          }
          m.data["m"]["p" + std::to_string(p)] = po;
        }
        double u = recovery_rate(m, "m", "all");
        for (const auto& cls : classes) {
          if (u < recovery_rate(m, "m", cls) - 1e-9) {
            c.fail("union < per-class recovery at trial " +
                   std::to_string(trial));
            trial = 1000;
            break;
          }
        }
      }
    }
    if (format_cell(76.6, 14.0) != "76.6 (+14.0)" ||
        format_cell(25.8, -44.3) != "25.8 (-44.3)" ||
        format_rate(76.65) != "76.7") {
      c.fail("cell formatting mismatch");
    }
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  report("metrics-fixtures", c.ok,
         c.ok ? "75.0, 20.0, 1000 union invariants, cell shape"
              : c.why.str());
}

// ---------------------------------------------------------------------------
// Benchmark export counts (requires local export files).

void check_counts() {
  const char* lcb = std::getenv("MUTABENCH_LCB_EXPORT");
  const char* crux = std::getenv("MUTABENCH_CRUX_EXPORT");
  if (!lcb || !*lcb || !crux || !*crux) {
    report_skip("counts",
                "set MUTABENCH_LCB_EXPORT and MUTABENCH_CRUX_EXPORT to the "
                "published export files to enable");
    return;
  }
  Check c;
  try {
    auto l = ingest_file(lcb, BenchmarkOrigin::LiveCodeBench);
    if (l.programs.size() + l.excluded.size() != 479) {
      c.fail("LiveCodeBench records != 479 (" +
             std::to_string(l.programs.size() + l.excluded.size()) + ")");
    }
    auto x = ingest_file(crux, BenchmarkOrigin::CruxEval);
    if (x.programs.size() + x.excluded.size() != 800) {
      c.fail("CruxEval records != 800 (" +
             std::to_string(x.programs.size() + x.excluded.size()) + ")");
    }
    if (c.ok) {
      c.why << "479 and 800 records; excluded " << l.excluded.size() << " and "
            << x.excluded.size();
    }
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  report("counts", c.ok, c.why.str());
}

// ---------------------------------------------------------------------------
// Optional live smoke run.

void check_live_smoke(const Sandbox& sandbox, int jobs) {
  const char* endpoint = std::getenv("MUTABENCH_LIVE_ENDPOINT");
  if (!endpoint || !*endpoint) {
    report_skip("live-smoke",
                "set MUTABENCH_LIVE_ENDPOINT (and MUTABENCH_LIVE_MODEL) to an "
                "OpenAI-compatible server to enable");
    return;
  }
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    const char* model_env = std::getenv("MUTABENCH_LIVE_MODEL");
    ModelProfile profile;
    profile.name = model_env && *model_env ? model_env : "default";
    profile.endpoint = endpoint;
    ChatClient client(endpoint);

    std::vector<SessionSubject> subjects;
    size_t programs = 0;
    for (const auto& vs : corpus_variants()) {
      if (programs == 10) break;
      ++programs;
      const Program& p = *vs.parent;
      SessionSubject original;
      original.id = p.id;
      original.source = emit(parse(p.source));
      original.entry_name = p.entry_name;
      original.input_expr = p.tests[0].input_expr;
      original.expected_output_expr = p.tests[0].expected_output_expr;
      subjects.push_back(original);
      for (size_t i = 0; i < vs.variants.size(); ++i) {
        SessionSubject v = original;
        v.mutation_class = mutation_class_name(vs.variants[i].cls);
        v.variant_key =
            p.id + "/" + v.mutation_class + "/" + std::to_string(i);
        v.source = vs.variants[i].source;
        subjects.push_back(v);
      }
    }

    std::mutex mu;
    std::vector<Session> sessions;
    parallel_for(subjects.size(), jobs, [&](size_t i) {
      Session s =
          run_session(subjects[i], profile, client, sandbox, /*budget_s=*/90.0);
      std::lock_guard<std::mutex> lock(mu);
      sessions.push_back(std::move(s));
    });
    int failed = 0;
    for (const auto& s : sessions) failed += s.failed ? 1 : 0;
    if (failed == static_cast<int>(sessions.size())) {
      c.fail("every session failed against the endpoint");
    }
    auto matrix = OutcomeMatrix::from_sessions(sessions);
    auto report_obj = build_report(matrix, {}, {});
    if (report_obj.models.empty()) c.fail("report is empty");
    if (c.ok) {
      c.why << sessions.size() << " sessions (" << failed
            << " failed), report emitted, runtime " << seconds_since(t0)
            << " s";
    }
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  report("live-smoke", c.ok, c.why.str());
}

}  // namespace

int main() {
  int jobs = static_cast<int>(
      std::max(2u, std::thread::hardware_concurrency()));
  std::unique_ptr<Sandbox> sandbox;
  try {
    sandbox = std::make_unique<Sandbox>();
  } catch (const SandboxUnavailable& e) {
    std::cout << "[FAIL] sandbox -- " << e.what() << std::endl;
    return 1;
  }

  check_golden_mutations();
  check_semantic_gate(*sandbox, jobs);
  check_differential_oracle(*sandbox, jobs);
  check_property_suite();
  check_protocol_fixtures(*sandbox);
  check_extraction_fixtures();
  check_metrics_fixtures();
  check_counts();
  check_live_smoke(*sandbox, jobs);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  return 0;
}
