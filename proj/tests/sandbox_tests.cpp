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

#include "mutabench/sandbox.hpp"

using namespace mutabench;

namespace {

const char* kMinPossibleSum =
    "def minPossibleSum(n, target):\n"
    "    i = 1\n"
    "    arr = {1}\n"
    "    while len(arr) < n:\n"
    "        i += 1\n"
    "        if target - i not in arr:\n"
    "            arr.add(i)\n"
    "    return sum(arr)\n";

const char* kSumEvens =
    "def f(nums):\n"
    "    total = 0\n"
    "    for n in nums:\n"
    "        if n % 2 == 0:\n"
    "            total += n\n"
    "    return total\n";

Sandbox& sandbox() {
  static Sandbox sb;
  return sb;
}

}  // namespace

TEST_CASE("verify: minPossibleSum(1, 1) == 1 passes") {
  auto r = sandbox().verify(kMinPossibleSum, "minPossibleSum",
                            {{"n=1, target=1", "1"}});
  CHECK(r.status == ExecStatus::Passed);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].equal);
  CHECK(r.verdicts[0].actual == "1");
}

TEST_CASE("verify: the wrong expected value fails") {
  auto r = sandbox().verify(kMinPossibleSum, "minPossibleSum",
                            {{"n=1, target=1", "3"}});
  CHECK(r.status == ExecStatus::Failed);
}

TEST_CASE("verify: a divergent program times out") {
  auto r = sandbox().verify("while True:\n    pass\n", "f", {{"1", "1"}}, 2.0);
  CHECK(r.status == ExecStatus::Timeout);
  CHECK(r.wall_time < 15.0);
}

TEST_CASE("verify: a divergent call times out") {
  auto r = sandbox().verify("def f(x):\n    while True:\n        pass\n", "f",
                            {{"1", "1"}}, 2.0);
  CHECK(r.status == ExecStatus::Timeout);
}

TEST_CASE("verify: a raising call is a crash, not an exception") {
  auto r = sandbox().verify("def f(x):\n    return 1 / 0\n", "f",
                            {{"1", "1"}});
  CHECK(r.status == ExecStatus::Crashed);
}

TEST_CASE("verify: a missing entry point is a crash") {
  auto r = sandbox().verify("x = 1\n", "f", {{"1", "1"}});
  CHECK(r.status == ExecStatus::Crashed);
}

TEST_CASE("verify: status aggregates over every test") {
  auto r = sandbox().verify(kSumEvens, "f",
                            {{"[2, 4]", "6"}, {"[1]", "0"}, {"[2]", "99"}});
  CHECK(r.status == ExecStatus::Failed);
  REQUIRE(r.verdicts.size() == 3);
  CHECK(r.verdicts[0].equal);
  CHECK(r.verdicts[1].equal);
  CHECK_FALSE(r.verdicts[2].equal);
}

TEST_CASE("verify: determinism across runs") {
  for (int i = 0; i < 2; ++i) {
    auto r = sandbox().verify(kSumEvens, "f", {{"[1, 2, 3, 4]", "6"}});
    CHECK(r.status == ExecStatus::Passed);
  }
}

TEST_CASE("evaluate_call: returns the repr of the result") {
  auto r = sandbox().evaluate_call(kSumEvens, "f", "[1, 2, 3, 4]");
  CHECK(r.status == ExecStatus::Passed);
  CHECK(r.literal == "6");
  auto empty = sandbox().evaluate_call(kSumEvens, "f", "[]");
  CHECK(empty.literal == "0");
}

TEST_CASE("evaluate_call: keyword arguments and rich values") {
  auto r = sandbox().evaluate_call(
      "def g(a, b=1):\n    return [a, b, 'x']\n", "g", "2, b=5");
  CHECK(r.status == ExecStatus::Passed);
  CHECK(r.literal == "[2, 5, 'x']");
}

TEST_CASE("evaluate_call: crash and timeout statuses") {
  auto crash = sandbox().evaluate_call("def f(x):\n    return x / 0\n", "f",
                                       "1");
  CHECK(crash.status == ExecStatus::Crashed);
  auto timeout = sandbox().evaluate_call(
      "def f(x):\n    while True:\n        pass\n", "f", "1", 2.0);
  CHECK(timeout.status == ExecStatus::Timeout);
}

TEST_CASE("judge_literals: object-language equality") {
  CHECK(sandbox().judge_literals("1", "1"));
  CHECK_FALSE(sandbox().judge_literals("3", "1"));
  CHECK(sandbox().judge_literals("0.5", "1/2"));
  CHECK(sandbox().judge_literals("[1, 2]", "[1] + [2]"));
  CHECK_FALSE(sandbox().judge_literals("not a literal ((", "1"));
}

TEST_CASE("constructor throws SandboxUnavailable for a bogus interpreter") {
  CHECK_THROWS_AS(Sandbox("/nonexistent/python3"), SandboxUnavailable);
}
