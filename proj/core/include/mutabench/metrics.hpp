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

#ifndef MUTABENCH_METRICS_HPP
#define MUTABENCH_METRICS_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutabench/session.hpp"

namespace mutabench {

struct EmptyDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Session outcomes folded down to the booleans the tables need. Failed
// sessions are excluded here and surfaced as counts.
struct ProgramOutcomes {
  bool has_original = false;
  bool original_correct = false;
  // mutation class -> correctness of each evaluated variant
  std::map<std::string, std::vector<bool>> variants;
};

struct OutcomeMatrix {
  // model -> program id -> outcomes
  std::map<std::string, std::map<std::string, ProgramOutcomes>> data;
  std::map<std::string, int> failed_sessions;  // per model

  static OutcomeMatrix from_sessions(const std::vector<Session>& sessions);
};

// Percentage of distinct programs counted correct for the model. Empty
// class = originals; otherwise a program counts correct iff ANY of its
// class-m variants got a correct prediction. Throws EmptyDenominator.
double correctness_rate(const OutcomeMatrix& outcomes,
                        const std::string& model,
                        const std::string& mutation_class);

// Percentage of programs whose original prediction was wrong but some
// class-m variant was answered correctly. mutation_class = "all" unions
// every class. Denominator: programs with an original outcome.
double recovery_rate(const OutcomeMatrix& outcomes, const std::string& model,
                     const std::string& mutation_class);

// Per-program recovered sets, exposed for the union invariant.
std::set<std::string> recovered_programs(const OutcomeMatrix& outcomes,
                                         const std::string& model,
                                         const std::string& mutation_class);

enum class AnnotationLabel { Sound1Iter, SoundMultiIter, FlawedGuess };

std::string annotation_label_name(AnnotationLabel label);
std::optional<AnnotationLabel> annotation_label_from_name(
    const std::string& name);

struct AnnotationRecord {
  std::string model;
  std::string program_id;
  AnnotationLabel label = AnnotationLabel::FlawedGuess;
  std::string annotator;
};

// CSV with header: model,program_id,label,annotator
std::vector<AnnotationRecord> read_annotations_csv(const std::string& path);

struct AnnotationBreakdown {
  double flawed_guess = 0.0;
  double sound_multi_iter = 0.0;
  double sound_1iter = 0.0;
  std::vector<std::string> unlabeled;  // correct sessions without labels
};

// Shares over the model's correct original predictions; the majority label
// wins per program. Unlabeled correct sessions are listed, not fatal.
AnnotationBreakdown annotation_breakdown(
    const std::vector<AnnotationRecord>& annotations,
    const OutcomeMatrix& outcomes, const std::string& model);

// One decimal place, half-up: 76.649 -> "76.6", 0.25 -> "0.3".
std::string format_rate(double percentage);
// Table cell shape: "76.6 (+14.0)" / "25.8 (-44.3)".
std::string format_cell(double rate, double delta);

struct ModelReport {
  std::string model;
  double original_rate = 0.0;
  // class -> (rate, delta vs original)
  std::map<std::string, std::pair<double, double>> class_rates;
  std::map<std::string, double> recovery_rates;  // includes "all"
  int failed_sessions = 0;
  std::optional<AnnotationBreakdown> breakdown;
  bool single_turn = false;  // renders the multi-iteration row as "--"
};

struct MetricsReport {
  std::vector<ModelReport> models;
  std::vector<std::string> notes;  // e.g. empty-denominator classes
};

MetricsReport build_report(const OutcomeMatrix& outcomes,
                           const std::vector<AnnotationRecord>& annotations,
                           const std::set<std::string>& single_turn_models);

std::string report_to_json(const MetricsReport& report);
std::string report_to_text(const MetricsReport& report);

}  // namespace mutabench

#endif  // MUTABENCH_METRICS_HPP
