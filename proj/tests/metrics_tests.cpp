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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "mutabench/metrics.hpp"

using namespace mutabench;

namespace {

Session make_session(const std::string& model, const std::string& id,
                     const std::string& cls, const std::string& key,
                     bool correct, bool failed = false) {
  Session s;
  s.subject.id = id;
  s.subject.mutation_class = cls;
  s.subject.variant_key = key;
  s.model = model;
  s.outcome.correct = correct;
  s.outcome.iterations_used = 1;
  s.outcome.termination =
      failed ? Termination::Failed
             : (correct ? Termination::Correct : Termination::IterationCap);
  s.failed = failed;
  return s;
}

AnnotationRecord ann(const std::string& model, const std::string& id,
                     AnnotationLabel label,
                     const std::string& annotator = "a1") {
  return AnnotationRecord{model, id, label, annotator};
}

}  // namespace

TEST_CASE("correctness_rate: 3 of 4 originals is 75.0") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "", "", true),
      make_session("m", "p2", "", "", true),
      make_session("m", "p3", "", "", true),
      make_session("m", "p4", "", "", false),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  CHECK(correctness_rate(m, "m", "") == doctest::Approx(75.0));
}

TEST_CASE("correctness_rate: any correct variant counts the program") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "RenameVariable", "p1/rv/0", false),
      make_session("m", "p1", "RenameVariable", "p1/rv/1", true),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  CHECK(correctness_rate(m, "m", "RenameVariable") == doctest::Approx(100.0));
}

TEST_CASE("correctness_rate: empty denominator throws") {
  auto m = OutcomeMatrix::from_sessions(
      {make_session("m", "p1", "", "", true)});
  CHECK_THROWS_AS(correctness_rate(m, "m", "SwapIfElse"), EmptyDenominator);
  CHECK_THROWS_AS(correctness_rate(m, "other-model", ""), EmptyDenominator);
}

TEST_CASE("recovery_rate: 2 recoveries over 10 programs is 20.0") {
  std::vector<Session> sessions;
  for (int i = 0; i < 10; ++i) {
    std::string id = "p" + std::to_string(i);
    // originals wrong on p0..p3, correct on the rest
    sessions.push_back(make_session("m", id, "", "", i >= 4));
    // variants recover p0 and p1 only
    sessions.push_back(
        make_session("m", id, "MirrorComparison", id + "/mc/0", i < 2));
  }
  auto m = OutcomeMatrix::from_sessions(sessions);
  CHECK(recovery_rate(m, "m", "MirrorComparison") == doctest::Approx(20.0));
  // p4..p9 were already correct, so they are not recoveries
  auto rec = recovered_programs(m, "m", "MirrorComparison");
  CHECK(rec == std::set<std::string>{"p0", "p1"});
}

TEST_CASE("recovery_rate: denominator is programs with an original outcome") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "", "", false),
      make_session("m", "p1", "SwapIfElse", "p1/si/0", true),
      // p2 has variants but no original session: not in the denominator
      make_session("m", "p2", "SwapIfElse", "p2/si/0", true),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  CHECK(recovery_rate(m, "m", "SwapIfElse") == doctest::Approx(100.0));
}

TEST_CASE("recovery_rate: \"all\" is the union across classes") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "", "", false),
      make_session("m", "p2", "", "", false),
      make_session("m", "p3", "", "", false),
      make_session("m", "p1", "RenameVariable", "p1/rv/0", true),
      make_session("m", "p2", "ForToWhile", "p2/fw/0", true),
      make_session("m", "p3", "ForToWhile", "p3/fw/0", false),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  CHECK(recovered_programs(m, "m", "all") ==
        std::set<std::string>{"p1", "p2"});
  CHECK(recovery_rate(m, "m", "all") > recovery_rate(m, "m", "ForToWhile"));
}

TEST_CASE("recovery invariant: union >= per-class max on random matrices") {
  std::mt19937 rng(12345);
  const std::vector<std::string> classes = {
      "RenameVariable", "MirrorComparison", "SwapIfElse", "ForToWhile",
      "UnrollLoop"};
  for (int trial = 0; trial < 1000; ++trial) {
    OutcomeMatrix m;
    int n_programs = 1 + static_cast<int>(rng() % 8);
    for (int p = 0; p < n_programs; ++p) {
      ProgramOutcomes po;
      po.has_original = true;
      po.original_correct = rng() % 2 == 0;
      for (const auto& c : classes) {
        int n = static_cast<int>(rng() % 3);
        for (int v = 0; v < n; ++v) {
          po.variants[c].push_back(rng() % 2 == 0);
        }
      }
      m.data["m"]["p" + std::to_string(p)] = po;
    }
    double union_rate = recovery_rate(m, "m", "all");
    for (const auto& c : classes) {
      CHECK(union_rate >= recovery_rate(m, "m", c) - 1e-9);
    }
  }
}

TEST_CASE("from_sessions: failed sessions are excluded and counted") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "", "", true),
      make_session("m", "p2", "", "", false, /*failed=*/true),
      make_session("m", "p2", "SwapIfElse", "p2/si/0", true, /*failed=*/true),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  CHECK(m.failed_sessions.at("m") == 2);
  CHECK(m.data.at("m").count("p2") == 0);
  CHECK(correctness_rate(m, "m", "") == doctest::Approx(100.0));
}

TEST_CASE("format_rate: one decimal, half-up") {
  CHECK(format_rate(76.649) == "76.6");
  CHECK(format_rate(76.65) == "76.7");
  CHECK(format_rate(0.25) == "0.3");
  CHECK(format_rate(14.0) == "14.0");
  CHECK(format_rate(100.0) == "100.0");
  CHECK(format_rate(0.0) == "0.0");
}

TEST_CASE("format_cell: signed delta in parentheses") {
  CHECK(format_cell(76.6, 14.0) == "76.6 (+14.0)");
  CHECK(format_cell(25.8, -44.3) == "25.8 (-44.3)");
  CHECK(format_cell(50.0, 0.0) == "50.0 (+0.0)");
}

TEST_CASE("annotation_breakdown: 50/20/30 shares") {
  std::vector<Session> sessions;
  std::vector<AnnotationRecord> annotations;
  for (int i = 0; i < 10; ++i) {
    std::string id = "p" + std::to_string(i);
    sessions.push_back(make_session("m", id, "", "", true));
    AnnotationLabel label = i < 5   ? AnnotationLabel::Sound1Iter
                            : i < 7 ? AnnotationLabel::SoundMultiIter
                                    : AnnotationLabel::FlawedGuess;
    annotations.push_back(ann("m", id, label));
  }
  auto m = OutcomeMatrix::from_sessions(sessions);
  auto b = annotation_breakdown(annotations, m, "m");
  CHECK(b.sound_1iter == doctest::Approx(50.0));
  CHECK(b.sound_multi_iter == doctest::Approx(20.0));
  CHECK(b.flawed_guess == doctest::Approx(30.0));
  CHECK(b.unlabeled.empty());
}

TEST_CASE("annotation_breakdown: unanimous soundness") {
  std::vector<Session> sessions = {make_session("m", "p1", "", "", true)};
  auto m = OutcomeMatrix::from_sessions(sessions);
  auto b = annotation_breakdown({ann("m", "p1", AnnotationLabel::Sound1Iter)},
                                m, "m");
  CHECK(b.sound_1iter == doctest::Approx(100.0));
  CHECK(b.flawed_guess == doctest::Approx(0.0));
  CHECK(b.sound_multi_iter == doctest::Approx(0.0));
}

TEST_CASE("annotation_breakdown: majority vote per program") {
  std::vector<Session> sessions = {make_session("m", "p1", "", "", true)};
  auto m = OutcomeMatrix::from_sessions(sessions);
  auto b = annotation_breakdown(
      {ann("m", "p1", AnnotationLabel::FlawedGuess, "a1"),
       ann("m", "p1", AnnotationLabel::FlawedGuess, "a2"),
       ann("m", "p1", AnnotationLabel::Sound1Iter, "a3")},
      m, "m");
  CHECK(b.flawed_guess == doctest::Approx(100.0));
}

TEST_CASE("annotation_breakdown: incorrect and unrelated sessions ignored") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "", "", true),
      make_session("m", "p2", "", "", false),
      make_session("m", "p1", "SwapIfElse", "p1/si/0", true),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  auto b = annotation_breakdown({ann("m", "p1", AnnotationLabel::Sound1Iter)},
                                m, "m");
  // Only p1's correct original is in scope; p2 was wrong and variants are
  // out of scope for the breakdown.
  CHECK(b.sound_1iter == doctest::Approx(100.0));
  CHECK(b.unlabeled.empty());
}

TEST_CASE("annotation_breakdown: unlabeled correct sessions are listed") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "", "", true),
      make_session("m", "p2", "", "", true),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  auto b = annotation_breakdown({ann("m", "p1", AnnotationLabel::Sound1Iter)},
                                m, "m");
  CHECK(b.unlabeled == std::vector<std::string>{"p2"});
}

TEST_CASE("read_annotations_csv") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "mutabench_annotations.csv";
  {
    std::ofstream out(path);
    out << "model,program_id,label,annotator\n"
        << "m,p1,sound_1iter,a1\n"
        << "m,p1,flawed_guess,a2\n"
        << "m,p2,sound_multi_iter,a1\n";
  }
  auto records = read_annotations_csv(path.string());
  REQUIRE(records.size() == 3);
  CHECK(records[0].model == "m");
  CHECK(records[0].program_id == "p1");
  CHECK(records[0].label == AnnotationLabel::Sound1Iter);
  CHECK(records[1].label == AnnotationLabel::FlawedGuess);
  CHECK(records[1].annotator == "a2");
  CHECK(records[2].label == AnnotationLabel::SoundMultiIter);
  fs::remove(path);
}

TEST_CASE("build_report: rates, deltas, and rendering") {
  std::vector<Session> sessions = {
      make_session("m", "p1", "", "", true),
      make_session("m", "p2", "", "", false),
      make_session("m", "p1", "RenameVariable", "p1/rv/0", false),
      make_session("m", "p2", "RenameVariable", "p2/rv/0", true),
      make_session("m", "p3", "", "", true, /*failed=*/true),
      make_session("s", "p1", "", "", true),
  };
  auto m = OutcomeMatrix::from_sessions(sessions);
  auto report = build_report(m, {ann("m", "p1", AnnotationLabel::Sound1Iter)},
                             /*single_turn_models=*/{"s"});
  REQUIRE(report.models.size() == 2);
  const ModelReport* mm = nullptr;
  const ModelReport* ms = nullptr;
  for (const auto& r : report.models) {
    if (r.model == "m") mm = &r;
    if (r.model == "s") ms = &r;
  }
  REQUIRE(mm != nullptr);
  REQUIRE(ms != nullptr);
  CHECK(mm->original_rate == doctest::Approx(50.0));
  CHECK(mm->class_rates.at("RenameVariable").first == doctest::Approx(50.0));
  CHECK(mm->class_rates.at("RenameVariable").second == doctest::Approx(0.0));
  CHECK(mm->recovery_rates.at("RenameVariable") == doctest::Approx(50.0));
  CHECK(mm->recovery_rates.at("all") == doctest::Approx(50.0));
  CHECK(mm->failed_sessions == 1);
  CHECK(ms->single_turn);

  std::string text = report_to_text(report);
  CHECK(text.find("50.0") != std::string::npos);
  CHECK(text.find("--") != std::string::npos);  // single-turn + missing cells
  CHECK(text.find("m") != std::string::npos);

  std::string json = report_to_json(report);
  CHECK(json.find("\"failed_sessions\"") != std::string::npos);
}
