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

#include "mutabench/session.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mutabench/extract.hpp"
#include "mutabench/prompts.hpp"

namespace mutabench {

namespace {

void persist(const std::string& path, const Session& session) {
  if (path.empty()) return;
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << session_to_json(session) << "\n";
  }
  std::rename(tmp.c_str(), path.c_str());
}

}  // namespace

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::Correct: return "correct";
    case Termination::IterationCap: return "iteration_cap";
    case Termination::TimeCap: return "time_cap";
    case Termination::MalformedAll: return "malformed_all";
    case Termination::Failed: return "failed";
  }
  return "?";
}

std::optional<Termination> termination_from_name(const std::string& name) {
  if (name == "correct") return Termination::Correct;
  if (name == "iteration_cap") return Termination::IterationCap;
  if (name == "time_cap") return Termination::TimeCap;
  if (name == "malformed_all") return Termination::MalformedAll;
  if (name == "failed") return Termination::Failed;
  return std::nullopt;
}

bool judge(const Sandbox& sandbox, const std::string& predicted_literal,
           const std::string& expected_output_expr) {
  return sandbox.judge_literals(predicted_literal, expected_output_expr);
}

Session run_session(const SessionSubject& subject, const ModelProfile& model,
                    const ChatClient& client, const Sandbox& sandbox,
                    double budget_s, const std::string& transcript_path) {
  Session session;
  session.subject = subject;
  session.model = model.name;
  session.budget_s = budget_s;

  int max_iterations = model.supports_multi_turn ? model.max_iterations : 1;
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  std::vector<ChatMessage> conversation;
  bool any_extracted = false;

  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    if (iteration > 0 && elapsed() >= budget_s) {
      session.outcome.termination = Termination::TimeCap;
      break;
    }
    std::string request =
        iteration == 0
            ? build_initial_prompt(subject.source, subject.entry_name,
                                   subject.input_expr)
            : build_feedback_prompt(model.supports_multi_turn);
    conversation.push_back({"user", request});

    ChatResponse reply;
    try {
      reply = client.complete(model.name, conversation, model.temperature,
                              model.max_tokens);
    } catch (const EndpointError& e) {
      session.failed = true;
      session.failure_reason = e.what();
      session.outcome.termination = Termination::Failed;
      session.outcome.iterations_used =
          static_cast<int>(session.exchanges.size());
      persist(transcript_path, session);
      return session;
    }
    conversation.push_back({"assistant", reply.content});

    PromptExchange exchange;
    exchange.request = request;
    exchange.response = reply.content;
    exchange.latency_s = reply.latency_s;
    exchange.prompt_tokens = reply.prompt_tokens;
    exchange.completion_tokens = reply.completion_tokens;
    session.exchanges.push_back(std::move(exchange));
    session.outcome.iterations_used =
        static_cast<int>(session.exchanges.size());
    persist(transcript_path, session);

    std::optional<std::string> literal = extract_answer(reply.content);
    if (literal) {
      any_extracted = true;
      session.outcome.predicted_literal = literal;
      if (judge(sandbox, *literal, subject.expected_output_expr)) {
        session.outcome.correct = true;
        session.outcome.termination = Termination::Correct;
        persist(transcript_path, session);
        return session;
      }
    }
    if (iteration + 1 == max_iterations) {
      session.outcome.termination =
          any_extracted ? Termination::IterationCap : Termination::MalformedAll;
    }
  }
  if (session.exchanges.empty()) {
    // Budget elapsed before the first request could be issued.
    session.outcome.termination = Termination::TimeCap;
  }
  persist(transcript_path, session);
  return session;
}

std::string session_to_json(const Session& session) {
  nlohmann::json exchanges = nlohmann::json::array();
  for (const auto& e : session.exchanges) {
    exchanges.push_back({{"request", e.request},
                         {"response", e.response},
                         {"latency_s", e.latency_s},
                         {"prompt_tokens", e.prompt_tokens},
                         {"completion_tokens", e.completion_tokens}});
  }
  nlohmann::json outcome = {
      {"predicted_literal",
       session.outcome.predicted_literal
           ? nlohmann::json(*session.outcome.predicted_literal)
           : nlohmann::json(nullptr)},
      {"correct", session.outcome.correct},
      {"iterations_used", session.outcome.iterations_used},
      {"termination", termination_name(session.outcome.termination)},
  };
  nlohmann::json j = {
      {"subject", session.subject.id},
      {"class", session.subject.mutation_class.empty()
                    ? nlohmann::json(nullptr)
                    : nlohmann::json(session.subject.mutation_class)},
      {"variant_key", session.subject.variant_key},
      {"model", session.model},
      {"exchanges", exchanges},
      {"outcome", outcome},
      {"budget_s", session.budget_s},
      {"failed", session.failed},
      {"failure_reason", session.failure_reason},
  };
  return j.dump();
}

Session session_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Session s;
  s.subject.id = j.at("subject").get<std::string>();
  if (!j.at("class").is_null()) {
    s.subject.mutation_class = j["class"].get<std::string>();
  }
  s.subject.variant_key = j.value("variant_key", "");
  s.model = j.at("model").get<std::string>();
  for (const auto& e : j.at("exchanges")) {
    PromptExchange ex;
    ex.request = e.value("request", "");
    ex.response = e.value("response", "");
    ex.latency_s = e.value("latency_s", 0.0);
    ex.prompt_tokens = e.value("prompt_tokens", -1);
    ex.completion_tokens = e.value("completion_tokens", -1);
    s.exchanges.push_back(std::move(ex));
  }
  const auto& o = j.at("outcome");
  if (!o.at("predicted_literal").is_null()) {
    s.outcome.predicted_literal = o["predicted_literal"].get<std::string>();
  }
  s.outcome.correct = o.value("correct", false);
  s.outcome.iterations_used = o.value("iterations_used", 0);
  auto term = termination_from_name(o.value("termination", ""));
  s.outcome.termination = term.value_or(Termination::Failed);
  s.budget_s = j.value("budget_s", 90.0);
  s.failed = j.value("failed", false);
  s.failure_reason = j.value("failure_reason", "");
  return s;
}

std::vector<Session> read_sessions_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Session> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(session_from_json(line));
  }
  return out;
}

void append_session_jsonl(const std::string& path, const Session& session) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path + " for append");
  out << session_to_json(session) << "\n";
}

}  // namespace mutabench
