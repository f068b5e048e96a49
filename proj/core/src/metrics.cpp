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

#include "mutabench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mutabench/mutation.hpp"

namespace mutabench {

OutcomeMatrix OutcomeMatrix::from_sessions(
    const std::vector<Session>& sessions) {
  OutcomeMatrix m;
  for (const auto& s : sessions) {
    if (s.failed) {
      ++m.failed_sessions[s.model];
      continue;
    }
    ProgramOutcomes& po = m.data[s.model][s.subject.id];
    if (s.subject.mutation_class.empty()) {
      po.has_original = true;
      po.original_correct = s.outcome.correct;
    } else {
      po.variants[s.subject.mutation_class].push_back(s.outcome.correct);
    }
  }
  return m;
}

double correctness_rate(const OutcomeMatrix& outcomes,
                        const std::string& model,
                        const std::string& mutation_class) {
  auto it = outcomes.data.find(model);
  if (it == outcomes.data.end()) {
    throw EmptyDenominator("no outcomes for model " + model);
  }
  int total = 0, correct = 0;
  for (const auto& [id, po] : it->second) {
    if (mutation_class.empty()) {
      if (!po.has_original) continue;
      ++total;
      if (po.original_correct) ++correct;
    } else {
      auto vit = po.variants.find(mutation_class);
      if (vit == po.variants.end() || vit->second.empty()) continue;
      ++total;
      if (std::any_of(vit->second.begin(), vit->second.end(),
                      [](bool b) { return b; })) {
        ++correct;
      }
    }
  }
  if (total == 0) {
    throw EmptyDenominator("no programs for model " + model + ", class '" +
                           mutation_class + "'");
  }
  return 100.0 * correct / total;
}

std::set<std::string> recovered_programs(const OutcomeMatrix& outcomes,
                                         const std::string& model,
                                         const std::string& mutation_class) {
  std::set<std::string> recovered;
  auto it = outcomes.data.find(model);
  if (it == outcomes.data.end()) return recovered;
  for (const auto& [id, po] : it->second) {
    if (!po.has_original || po.original_correct) continue;
    for (const auto& [cls, results] : po.variants) {
      if (mutation_class != "all" && cls != mutation_class) continue;
      if (std::any_of(results.begin(), results.end(),
                      [](bool b) { return b; })) {
        recovered.insert(id);
        break;
      }
    }
  }
  return recovered;
}

double recovery_rate(const OutcomeMatrix& outcomes, const std::string& model,
                     const std::string& mutation_class) {
  auto it = outcomes.data.find(model);
  if (it == outcomes.data.end()) {
    throw EmptyDenominator("no outcomes for model " + model);
  }
  int total = 0;
  for (const auto& [id, po] : it->second) {
    if (po.has_original) ++total;
  }
  if (total == 0) {
    throw EmptyDenominator("no original outcomes for model " + model);
  }
  return 100.0 *
         static_cast<double>(
             recovered_programs(outcomes, model, mutation_class).size()) /
         total;
}

std::string annotation_label_name(AnnotationLabel label) {
  switch (label) {
    case AnnotationLabel::Sound1Iter: return "sound_1iter";
    case AnnotationLabel::SoundMultiIter: return "sound_multi_iter";
    case AnnotationLabel::FlawedGuess: return "flawed_guess";
  }
  return "?";
}

std::optional<AnnotationLabel> annotation_label_from_name(
    const std::string& name) {
  if (name == "sound_1iter") return AnnotationLabel::Sound1Iter;
  if (name == "sound_multi_iter") return AnnotationLabel::SoundMultiIter;
  if (name == "flawed_guess") return AnnotationLabel::FlawedGuess;
  return std::nullopt;
}

std::vector<AnnotationRecord> read_annotations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<AnnotationRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (first) {
      first = false;
      if (!fields.empty() && fields[0] == "model") continue;  // header
    }
    if (fields.size() < 4) {
      throw std::runtime_error("malformed annotation row: " + line);
    }
    auto label = annotation_label_from_name(fields[2]);
    if (!label) {
      throw std::runtime_error("unknown annotation label: " + fields[2]);
    }
    out.push_back({fields[0], fields[1], *label, fields[3]});
  }
  return out;
}

AnnotationBreakdown annotation_breakdown(
    const std::vector<AnnotationRecord>& annotations,
    const OutcomeMatrix& outcomes, const std::string& model) {
  AnnotationBreakdown bd;
  auto it = outcomes.data.find(model);
  if (it == outcomes.data.end()) return bd;

  // program -> label -> vote count
  std::map<std::string, std::map<AnnotationLabel, int>> votes;
  for (const auto& a : annotations) {
    if (a.model == model) ++votes[a.program_id][a.label];
  }

  int counts[3] = {0, 0, 0};
  int labeled = 0;
  for (const auto& [id, po] : it->second) {
    if (!po.has_original || !po.original_correct) continue;
    auto vit = votes.find(id);
    if (vit == votes.end() || vit->second.empty()) {
      bd.unlabeled.push_back(id);
      continue;
    }
    // Majority label; deterministic tie-break on enum order.
    AnnotationLabel best = AnnotationLabel::Sound1Iter;
    int best_count = -1;
    for (AnnotationLabel l :
         {AnnotationLabel::Sound1Iter, AnnotationLabel::SoundMultiIter,
          AnnotationLabel::FlawedGuess}) {
      auto c = vit->second.count(l) ? vit->second.at(l) : 0;
      if (c > best_count) {
        best = l;
        best_count = c;
      }
    }
    ++counts[static_cast<int>(best)];
    ++labeled;
  }
  if (labeled > 0) {
    bd.sound_1iter =
        100.0 * counts[static_cast<int>(AnnotationLabel::Sound1Iter)] / labeled;
    bd.sound_multi_iter =
        100.0 * counts[static_cast<int>(AnnotationLabel::SoundMultiIter)] /
        labeled;
    bd.flawed_guess =
        100.0 * counts[static_cast<int>(AnnotationLabel::FlawedGuess)] /
        labeled;
  }
  return bd;
}

std::string format_rate(double percentage) {
  // Half-up at one decimal; std::round is half-away-from-zero, which agrees
  // for the non-negative rates used here. Negative deltas are formatted via
  // their magnitude by format_cell.
  double scaled = std::floor(percentage * 10.0 + 0.5) / 10.0;
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << scaled;
  return out.str();
}

std::string format_cell(double rate, double delta) {
  std::string sign = delta < 0 ? "-" : "+";
  return format_rate(rate) + " (" + sign + format_rate(std::fabs(delta)) + ")";
}

MetricsReport build_report(const OutcomeMatrix& outcomes,
                           const std::vector<AnnotationRecord>& annotations,
                           const std::set<std::string>& single_turn_models) {
  MetricsReport report;
  for (const auto& [model, programs] : outcomes.data) {
    ModelReport mr;
    mr.model = model;
    mr.single_turn = single_turn_models.count(model) > 0;
    auto fit = outcomes.failed_sessions.find(model);
    mr.failed_sessions = fit == outcomes.failed_sessions.end() ? 0 : fit->second;
    try {
      mr.original_rate = correctness_rate(outcomes, model, "");
    } catch (const EmptyDenominator& e) {
      report.notes.push_back(std::string(e.what()));
      continue;
    }
    for (MutationClass cls : kAllMutationClasses) {
      std::string name = mutation_class_name(cls);
      try {
        double rate = correctness_rate(outcomes, model, name);
        mr.class_rates[name] = {rate, rate - mr.original_rate};
      } catch (const EmptyDenominator&) {
        report.notes.push_back("no " + name + " outcomes for " + model);
      }
      try {
        mr.recovery_rates[name] = recovery_rate(outcomes, model, name);
      } catch (const EmptyDenominator&) {
        // noted above
      }
    }
    try {
      mr.recovery_rates["all"] = recovery_rate(outcomes, model, "all");
    } catch (const EmptyDenominator&) {
    }
    if (!annotations.empty()) {
      mr.breakdown = annotation_breakdown(annotations, outcomes, model);
    }
    report.models.push_back(std::move(mr));
  }
  // Failed-session counts for models with no scoreable outcomes at all.
  for (const auto& [model, count] : outcomes.failed_sessions) {
    if (!outcomes.data.count(model)) {
      report.notes.push_back("model " + model + ": " + std::to_string(count) +
                             " failed sessions and no scoreable outcomes");
    }
  }
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::json j;
  j["models"] = nlohmann::json::array();
  for (const auto& m : report.models) {
    nlohmann::json jm = {
        {"model", m.model},
        {"original_rate", m.original_rate},
        {"failed_sessions", m.failed_sessions},
        {"single_turn", m.single_turn},
    };
    for (const auto& [cls, rd] : m.class_rates) {
      jm["class_rates"][cls] = {{"rate", rd.first},
                                {"delta", rd.second},
                                {"cell", format_cell(rd.first, rd.second)}};
    }
    for (const auto& [cls, r] : m.recovery_rates) {
      jm["recovery_rates"][cls] = r;
    }
    if (m.breakdown) {
      jm["annotation_breakdown"] = {
          {"flawed_guess", m.breakdown->flawed_guess},
          {"sound_multi_iter",
           m.single_turn ? nlohmann::json(nullptr)
                         : nlohmann::json(m.breakdown->sound_multi_iter)},
          {"sound_1iter", m.breakdown->sound_1iter},
          {"unlabeled", m.breakdown->unlabeled},
      };
    }
    j["models"].push_back(std::move(jm));
  }
  j["notes"] = report.notes;
  return j.dump(2);
}

namespace {

void pad_to(std::string* s, size_t width) {
  while (s->size() < width) s->push_back(' ');
}

}  // namespace

std::string report_to_text(const MetricsReport& report) {
  std::ostringstream out;
  std::vector<std::string> class_names;
  for (MutationClass cls : kAllMutationClasses) {
    class_names.push_back(mutation_class_name(cls));
  }
  size_t label_w = 18;
  size_t col_w = 16;

  auto row = [&](const std::string& label, const std::vector<std::string>& cells) {
    std::string line = label;
    pad_to(&line, label_w);
    for (const auto& c : cells) {
      std::string cell = c;
      pad_to(&cell, col_w);
      line += cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  };

  out << "== Prediction correctness (any-variant, % of programs) ==\n";
  {
    std::vector<std::string> header = {"Original"};
    header.insert(header.end(), class_names.begin(), class_names.end());
    row("Model", header);
    for (const auto& m : report.models) {
      std::vector<std::string> cells = {format_rate(m.original_rate)};
      for (const auto& cls : class_names) {
        auto it = m.class_rates.find(cls);
        cells.push_back(it == m.class_rates.end()
                            ? "--"
                            : format_cell(it->second.first, it->second.second));
      }
      row(m.model, cells);
    }
  }

  out << "\n== Recovery (% of programs correct only after mutation) ==\n";
  {
    std::vector<std::string> header = class_names;
    header.push_back("AllMutations");
    row("Model", header);
    for (const auto& m : report.models) {
      std::vector<std::string> cells;
      for (const auto& cls : class_names) {
        auto it = m.recovery_rates.find(cls);
        cells.push_back(it == m.recovery_rates.end() ? "--"
                                                     : format_rate(it->second));
      }
      auto it = m.recovery_rates.find("all");
      cells.push_back(it == m.recovery_rates.end() ? "--"
                                                   : format_rate(it->second));
      row(m.model, cells);
    }
  }

  bool any_breakdown = std::any_of(
      report.models.begin(), report.models.end(),
      [](const ModelReport& m) { return m.breakdown.has_value(); });
  if (any_breakdown) {
    out << "\n== Reasoning breakdown (% of correct predictions) ==\n";
    row("Model", {"FlawedGuess", "Sound>1Iter", "Sound=1Iter"});
    for (const auto& m : report.models) {
      if (!m.breakdown) continue;
      row(m.model,
          {format_rate(m.breakdown->flawed_guess),
           m.single_turn ? "--" : format_rate(m.breakdown->sound_multi_iter),
           format_rate(m.breakdown->sound_1iter)});
    }
  }

  out << "\n== Excluded sessions ==\n";
  for (const auto& m : report.models) {
    out << m.model << ": " << m.failed_sessions << " failed sessions\n";
  }
  if (!report.notes.empty()) {
    out << "\n== Notes ==\n";
    for (const auto& n : report.notes) out << "- " << n << "\n";
  }
  return out.str();
}

}  // namespace mutabench
