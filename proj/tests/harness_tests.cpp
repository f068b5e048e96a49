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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mutabench/extract.hpp"
#include "mutabench/prompts.hpp"
#include "mutabench/session.hpp"

using namespace mutabench;

namespace {

// In-process OpenAI-compatible endpoint replaying a scripted list of
// assistant replies; records every request body it sees.
class MockEndpoint {
 public:
  explicit MockEndpoint(std::vector<std::string> replies,
                        double delay_s = 0.0)
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
        size_t i = std::min(requests_.size() - 1, replies_.size() - 1);
        reply = replies_[i];
      }
      nlohmann::json body = {
          {"choices",
           {{{"message", {{"role", "assistant"}, {"content", reply}}}}}},
          {"usage", {{"prompt_tokens", 10}, {"completion_tokens", 20}}}};
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

  std::vector<std::string> request_bodies() {
    std::lock_guard<std::mutex> lock(mu_);
    return requests_;
  }

  // The user-turn contents of the i-th request, in order.
  std::vector<std::string> user_turns(size_t i) {
    auto bodies = request_bodies();
    REQUIRE(i < bodies.size());
    nlohmann::json j = nlohmann::json::parse(bodies[i]);
    std::vector<std::string> turns;
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

// The first (incorrect) and second (revised) model replies of the
// minPossibleSum dialogue.
const std::string kReplyWrong =
    "Let's walk through the execution of the code step-by-step \n"
    "to understand how the output is produced.\n"
    "8. The function returns the sum of the elements in `arr`, \n"
    "which is `1 + 2 = 3`.\n"
    "Therefore, the assertion should be:\n"
    "[ANSWER]assert minPossibleSum(1, 1) == 3[/ANSWER]\n";

const std::string kReplyRight =
    "There seems to be a misunderstanding in the explanation. \n"
    "- The loop does not run because `len(arr) < n` \n"
    "(1 < 1) is false.\n"
    "Therefore, the correct assertion should be:\n"
    "[ANSWER]assert minPossibleSum(1, 1) == 1[/ANSWER]\n";

SessionSubject min_possible_sum_subject() {
  SessionSubject s;
  s.id = "min-possible-sum";
  s.source = kMinPossibleSum;
  s.entry_name = "minPossibleSum";
  s.input_expr = "n=1, target=1";
  s.expected_output_expr = "1";
  return s;
}

ModelProfile test_profile(const std::string& endpoint) {
  ModelProfile p;
  p.name = "test-model";
  p.endpoint = endpoint;
  return p;
}

Sandbox& sandbox() {
  static Sandbox sb;
  return sb;
}

}  // namespace

TEST_CASE("initial prompt: frozen preamble and fenced assertion") {
  std::string prompt =
      build_initial_prompt(kMinPossibleSum, "minPossibleSum", "n=1, target=1");
  CHECK(prompt.rfind(initial_prompt_preamble(), 0) == 0);
  CHECK(initial_prompt_preamble().find(
            "Simulate the Execution: You are given a Python function \n") == 0);
  CHECK(prompt.find("'''assert sumEvenNumbers([1,2,3,4])==?""?""?''' would be\n"
                    "[ANSWER]\nassert sumEvenNumbers([1,2,3,4]) == 6\n"
                    "[/ANSWER]") != std::string::npos);
  CHECK(prompt.find("no more than 1000 tokens.\n```python \n") !=
        std::string::npos);
  CHECK(prompt.find("assert minPossibleSum(n=1, target=1) == ???\n```") !=
        std::string::npos);
}

TEST_CASE("initial prompt: empty source still forms a well-formed fence") {
  std::string prompt = build_initial_prompt("", "f", "[1, 2, 3, 4, 5]");
  CHECK(prompt.find("```python \nassert f([1, 2, 3, 4, 5]) == ???\n```") !=
        std::string::npos);
}

TEST_CASE("initial prompt: byte-stable across calls") {
  std::string a = build_initial_prompt(kMinPossibleSum, "minPossibleSum", "1, 1");
  std::string b = build_initial_prompt(kMinPossibleSum, "minPossibleSum", "1, 1");
  CHECK(a == b);
}

TEST_CASE("feedback prompt: frozen template, generic across failures") {
  std::string fb = build_feedback_prompt(true);
  CHECK(fb.rfind("Your previous output prediction was INCORRECT!\n", 0) == 0);
  CHECK(fb.find("for your new prediction, using no more than 1000 tokens.") !=
        std::string::npos);
  CHECK(fb == build_feedback_prompt(true));
}

TEST_CASE("feedback prompt: single-turn models are a protocol violation") {
  CHECK_THROWS_AS(build_feedback_prompt(false), ProtocolViolation);
}

TEST_CASE("extract_answer: dialogue fixtures give 3 then 1") {
  auto first = extract_answer(kReplyWrong);
  REQUIRE(first.has_value());
  CHECK(*first == "3");
  auto second = extract_answer(kReplyRight);
  REQUIRE(second.has_value());
  CHECK(*second == "1");
}

TEST_CASE("extract_answer: multi-line tagged assertion") {
  auto v = extract_answer(
      "[ANSWER]\nassert minimumPossibleSum(n = 1, target = 1) == 1\n[/ANSWER]");
  REQUIRE(v.has_value());
  CHECK(*v == "1");
}

TEST_CASE("extract_answer: the last block and last assertion win") {
  auto v = extract_answer(
      "[ANSWER]assert f(1) == 2[/ANSWER] text "
      "[ANSWER]assert f(1) == 3\nassert f(2) == 4[/ANSWER]");
  REQUIRE(v.has_value());
  CHECK(*v == "4");
}

TEST_CASE("extract_answer: bracket- and string-aware RHS") {
  auto dict = extract_answer("[ANSWER]assert f(a == 1) == {'k': [1, 2]}[/ANSWER]");
  REQUIRE(dict.has_value());
  CHECK(*dict == "{'k': [1, 2]}");
  auto str = extract_answer("[ANSWER]assert f(1) == 'a == b'[/ANSWER]");
  REQUIRE(str.has_value());
  CHECK(*str == "'a == b'");
}

TEST_CASE("extract_answer: malformed responses") {
  CHECK_FALSE(extract_answer("prose only, no tags").has_value());
  CHECK_FALSE(extract_answer("[ANSWER]no assertion here[/ANSWER]").has_value());
  CHECK_FALSE(extract_answer("[ANSWER]assert f(1)[/ANSWER]").has_value());
  CHECK_FALSE(extract_answer("[ANSWER]assert f(1) == 2").has_value());
}

TEST_CASE("run_session: correct first try") {
  MockEndpoint mock({"[ANSWER]assert minPossibleSum(1, 1) == 1[/ANSWER]"});
  ChatClient client(mock.url());
  Session s = run_session(min_possible_sum_subject(),
                          test_profile(mock.url()), client, sandbox());
  CHECK(s.outcome.correct);
  CHECK(s.outcome.iterations_used == 1);
  CHECK(s.outcome.termination == Termination::Correct);
  CHECK(s.exchanges.size() == 1);
  REQUIRE(s.outcome.predicted_literal.has_value());
  CHECK(*s.outcome.predicted_literal == "1");
}

TEST_CASE("run_session: dialogue fixture, wrong then right") {
  MockEndpoint mock({kReplyWrong, kReplyRight});
  ChatClient client(mock.url());
  Session s = run_session(min_possible_sum_subject(),
                          test_profile(mock.url()), client, sandbox());
  CHECK(s.outcome.correct);
  CHECK(s.outcome.iterations_used == 2);
  CHECK(s.outcome.termination == Termination::Correct);

  // Request bytes: first request carries the initial template, second
  // carries the full history plus the feedback template.
  auto first_turns = mock.user_turns(0);
  REQUIRE(first_turns.size() == 1);
  CHECK(first_turns[0] ==
        build_initial_prompt(kMinPossibleSum, "minPossibleSum",
                             "n=1, target=1"));
  auto second_turns = mock.user_turns(1);
  REQUIRE(second_turns.size() == 2);
  CHECK(second_turns[0] == first_turns[0]);
  CHECK(second_turns[1] == build_feedback_prompt(true));
}

TEST_CASE("run_session: always wrong stops at the iteration cap") {
  MockEndpoint mock({"[ANSWER]assert minPossibleSum(1, 1) == 3[/ANSWER]"});
  ChatClient client(mock.url());
  Session s = run_session(min_possible_sum_subject(),
                          test_profile(mock.url()), client, sandbox());
  CHECK_FALSE(s.outcome.correct);
  CHECK(s.outcome.iterations_used == 5);
  CHECK(s.outcome.termination == Termination::IterationCap);
}

TEST_CASE("run_session: malformed replies every time") {
  MockEndpoint mock({"no tags at all"});
  ChatClient client(mock.url());
  Session s = run_session(min_possible_sum_subject(),
                          test_profile(mock.url()), client, sandbox());
  CHECK(s.outcome.termination == Termination::MalformedAll);
  CHECK_FALSE(s.outcome.predicted_literal.has_value());
}

TEST_CASE("run_session: single-turn profiles issue exactly one exchange") {
  MockEndpoint mock({"[ANSWER]assert minPossibleSum(1, 1) == 3[/ANSWER]"});
  ChatClient client(mock.url());
  ModelProfile profile = test_profile(mock.url());
  profile.supports_multi_turn = false;
  Session s = run_session(min_possible_sum_subject(), profile, client,
                          sandbox());
  CHECK(s.exchanges.size() == 1);
  CHECK_FALSE(s.outcome.correct);
}

TEST_CASE("run_session: slow endpoint hits the time cap") {
  // 1.5 s per reply against a 2 s budget: the second reply lands past the
  // budget, so the session stops there instead of running all five rounds.
  MockEndpoint mock({"[ANSWER]assert minPossibleSum(1, 1) == 3[/ANSWER]"},
                    /*delay_s=*/1.5);
  ChatClient client(mock.url());
  Session s = run_session(min_possible_sum_subject(),
                          test_profile(mock.url()), client, sandbox(),
                          /*budget_s=*/2.0);
  CHECK(s.outcome.termination == Termination::TimeCap);
  CHECK(s.outcome.iterations_used == 2);
}

TEST_CASE("run_session: unreachable endpoint marks the session failed") {
  ChatClient client("http://127.0.0.1:9");  // discard port, nothing listens
  Session s = run_session(min_possible_sum_subject(),
                          test_profile("http://127.0.0.1:9"), client,
                          sandbox());
  CHECK(s.failed);
  CHECK(s.outcome.termination == Termination::Failed);
  CHECK_FALSE(s.failure_reason.empty());
}

TEST_CASE("run_session: transcript persistence and JSON round trip") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "mutabench_session_test.json";
  fs::remove(path);
  MockEndpoint mock({kReplyWrong, kReplyRight});
  ChatClient client(mock.url());
  Session s = run_session(min_possible_sum_subject(),
                          test_profile(mock.url()), client, sandbox(), 90.0,
                          path.string());
  REQUIRE(fs::exists(path));
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  Session back = session_from_json(text);
  CHECK(back.subject.id == s.subject.id);
  CHECK(back.outcome.correct == s.outcome.correct);
  CHECK(back.outcome.iterations_used == s.outcome.iterations_used);
  CHECK(back.exchanges.size() == s.exchanges.size());
  CHECK(back.exchanges[0].request == s.exchanges[0].request);
  fs::remove(path);
}

TEST_CASE("judge: literal equality through the sandbox") {
  CHECK_FALSE(judge(sandbox(), "3", "1"));
  CHECK(judge(sandbox(), "1", "1"));
  CHECK(judge(sandbox(), "0.5", "1/2"));
}
