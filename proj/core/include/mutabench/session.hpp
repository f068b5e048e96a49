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

#ifndef MUTABENCH_SESSION_HPP
#define MUTABENCH_SESSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "mutabench/client.hpp"
#include "mutabench/sandbox.hpp"

namespace mutabench {

struct ModelProfile {
  std::string name;
  std::string endpoint;
  bool supports_multi_turn = true;
  int max_iterations = 5;  // forced to 1 for single-turn models
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct PromptExchange {
  std::string request;   // the user turn added for this iteration
  std::string response;  // raw model reply
  double latency_s = 0.0;
  int prompt_tokens = -1;
  int completion_tokens = -1;
};

// `failed` is endpoint breakdown, not a prediction result; failed sessions
// are excluded from rate denominators and counted separately.
enum class Termination { Correct, IterationCap, TimeCap, MalformedAll, Failed };

std::string termination_name(Termination t);
std::optional<Termination> termination_from_name(const std::string& name);

struct PredictionOutcome {
  std::optional<std::string> predicted_literal;  // last extracted literal
  bool correct = false;
  int iterations_used = 0;
  Termination termination = Termination::Failed;
};

// One evaluation subject: an original program or a verified variant.
struct SessionSubject {
  std::string id;              // program id
  std::string mutation_class;  // "" for originals
  std::string variant_key;     // "" for originals; unique per variant
  std::string source;
  std::string entry_name;
  std::string input_expr;
  std::string expected_output_expr;
};

struct Session {
  SessionSubject subject;
  std::string model;
  std::vector<PromptExchange> exchanges;
  PredictionOutcome outcome;
  double budget_s = 90.0;
  bool failed = false;
  std::string failure_reason;
};

// Prediction judging: both literals are evaluated in the sandbox without the
// program under test and compared with ==; unevaluable -> false.
bool judge(const Sandbox& sandbox, const std::string& predicted_literal,
           const std::string& expected_output_expr);

// The prediction loop: build prompt, call, extract, judge; on an incorrect
// multi-turn iteration append feedback and continue. Stops on a correct
// answer, the iteration cap, or the budget. When transcript_path is
// non-empty the session is persisted (atomically rewritten) after every
// exchange. Endpoint errors mark the session failed instead of throwing.
Session run_session(const SessionSubject& subject, const ModelProfile& model,
                    const ChatClient& client, const Sandbox& sandbox,
                    double budget_s = 90.0,
                    const std::string& transcript_path = "");

std::string session_to_json(const Session& session);
Session session_from_json(const std::string& text);
std::vector<Session> read_sessions_jsonl(const std::string& path);
void append_session_jsonl(const std::string& path, const Session& session);

}  // namespace mutabench

#endif  // MUTABENCH_SESSION_HPP
