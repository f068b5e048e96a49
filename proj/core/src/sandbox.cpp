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

#include "mutabench/sandbox.hpp"

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "mutabench/subprocess.hpp"

namespace mutabench {

namespace {

// JSON string escaping is a subset of Python string-literal syntax, so a
// dumped JSON string doubles as a Python literal.
std::string py_str(const std::string& s) { return nlohmann::json(s).dump(); }

std::string excerpt(const std::string& text, size_t limit = 2000) {
  if (text.size() <= limit) return text;
  return text.substr(0, limit) + "...[truncated]";
}

constexpr const char* kDriverPrelude = R"PY(
import json, signal, sys

class _TestTimeout(Exception):
    pass

def _alarm(signum, frame):
    raise _TestTimeout()

def _with_timeout(fn, seconds):
    signal.signal(signal.SIGALRM, _alarm)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        return fn()
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)

def _emit(obj):
    sys.stdout.write(json.dumps(obj))
    sys.stdout.flush()
)PY";

nlohmann::json parse_verdict(const std::string& stdout_text) {
  // The driver's JSON object is the last thing on stdout; the subject
  // program may have printed before it.
  size_t pos = stdout_text.rfind("\n{");
  std::string tail =
      pos == std::string::npos ? stdout_text : stdout_text.substr(pos + 1);
  if (pos == std::string::npos) {
    size_t brace = tail.find('{');
    if (brace == std::string::npos) return nullptr;
    tail = tail.substr(brace);
  }
  return nlohmann::json::parse(tail, nullptr, /*allow_exceptions=*/false);
}

}  // namespace

std::string exec_status_name(ExecStatus status) {
  switch (status) {
    case ExecStatus::Passed: return "passed";
    case ExecStatus::Failed: return "failed";
    case ExecStatus::Crashed: return "crashed";
    case ExecStatus::Timeout: return "timeout";
  }
  return "?";
}

Sandbox::Sandbox(std::string python_bin) : python_bin_(std::move(python_bin)) {
  if (python_bin_.empty()) {
    const char* env = std::getenv("MUTABENCH_PYTHON");
    python_bin_ = env && *env ? env : "python3";
  }
  RunResult probe = run_process({python_bin_, "-I", "-c", "print('ok')"},
                                "", 20.0);
  if (probe.spawn_failed || probe.exit_code != 0 ||
      probe.stdout_text.find("ok") == std::string::npos) {
    throw SandboxUnavailable("cannot run Python interpreter '" + python_bin_ +
                             "'");
  }
}

ExecutionResult Sandbox::verify(const std::string& source,
                                const std::string& entry_name,
                                const std::vector<TestCase>& tests,
                                double timeout_s) const {
  std::ostringstream script;
  script << kDriverPrelude;
  script << "_SRC = " << py_str(source) << "\n";
  script << "_ENTRY = " << py_str(entry_name) << "\n";
  script << "_TIMEOUT = " << timeout_s << "\n";
  script << "_TESTS = [\n";
  for (const auto& t : tests) {
    script << "    (" << py_str(t.input_expr) << ", "
           << py_str(t.expected_output_expr) << "),\n";
  }
  script << "]\n";
  script << R"PY(
_g = {"__name__": "__mutabench_subject__"}
try:
    _with_timeout(lambda: exec(compile(_SRC, "<subject>", "exec"), _g),
                  _TIMEOUT)
except _TestTimeout:
    _emit({"status": "timeout", "error": "timeout loading program",
           "verdicts": []})
    sys.exit(0)
except BaseException as e:
    _emit({"status": "crashed", "error": repr(e), "verdicts": []})
    sys.exit(0)
_fn = _g.get(_ENTRY)
if not callable(_fn):
    _emit({"status": "crashed", "error": "entry %r not found" % _ENTRY,
           "verdicts": []})
    sys.exit(0)

_verdicts = []
_status = "passed"
for _inp, _exp in _TESTS:
    _args, _kwargs = [], {}
    def _cap(*a, **k):
        _args.extend(a)
        _kwargs.update(k)
    try:
        _env = dict(_g)
        _env["_cap"] = _cap
        def _run():
            eval("_cap(%s)" % _inp, _env)
            got = _fn(*_args, **_kwargs)
            want = eval(_exp, dict(_g))
            return got, want
        _got, _want = _with_timeout(_run, _TIMEOUT)
        _eq = bool(_got == _want)
        _verdicts.append({"equal": _eq, "actual": repr(_got)})
        if not _eq and _status == "passed":
            _status = "failed"
    except _TestTimeout:
        _verdicts.append({"equal": False, "error": "timeout"})
        _status = "timeout"
        break
    except BaseException as e:
        _verdicts.append({"equal": False, "error": repr(e)})
        if _status != "timeout":
            _status = "crashed"
_emit({"status": _status, "verdicts": _verdicts})
)PY";

  // Hard wall-clock backstop over all tests plus interpreter startup.
  double budget = timeout_s * (static_cast<double>(tests.size()) + 1.0) + 10.0;
  RunResult run = run_process({python_bin_, "-I", "-"}, script.str(), budget);

  ExecutionResult result;
  result.wall_time = run.wall_s;
  result.stderr_excerpt = excerpt(run.stderr_text);
  if (run.spawn_failed) {
    throw SandboxUnavailable("failed to spawn '" + python_bin_ + "'");
  }
  if (run.timed_out) {
    result.status = ExecStatus::Timeout;
    return result;
  }
  nlohmann::json verdict = parse_verdict(run.stdout_text);
  if (!verdict.is_object() || !verdict.contains("status")) {
    result.status = ExecStatus::Crashed;
    if (result.stderr_excerpt.empty()) {
      result.stderr_excerpt = "no verdict from sandbox driver";
    }
    return result;
  }
  std::string status = verdict["status"].get<std::string>();
  result.status = status == "passed"    ? ExecStatus::Passed
                  : status == "failed"  ? ExecStatus::Failed
                  : status == "timeout" ? ExecStatus::Timeout
                                        : ExecStatus::Crashed;
  for (const auto& v : verdict.value("verdicts", nlohmann::json::array())) {
    TestVerdict tv;
    tv.equal = v.value("equal", false);
    tv.actual = v.value("actual", "");
    tv.error = v.value("error", "");
    result.verdicts.push_back(std::move(tv));
  }
  if (verdict.contains("error") && result.stderr_excerpt.empty()) {
    result.stderr_excerpt = verdict["error"].get<std::string>();
  }
  return result;
}

EvalResult Sandbox::evaluate_call(const std::string& source,
                                  const std::string& entry_name,
                                  const std::string& input_expr,
                                  double timeout_s) const {
  std::ostringstream script;
  script << kDriverPrelude;
  script << "_SRC = " << py_str(source) << "\n";
  script << "_ENTRY = " << py_str(entry_name) << "\n";
  script << "_INPUT = " << py_str(input_expr) << "\n";
  script << "_TIMEOUT = " << timeout_s << "\n";
  script << R"PY(
_g = {"__name__": "__mutabench_subject__"}
try:
    def _load():
        exec(compile(_SRC, "<subject>", "exec"), _g)
        fn = _g.get(_ENTRY)
        if not callable(fn):
            raise NameError("entry %r not found" % _ENTRY)
        args, kwargs = [], {}
        def _cap(*a, **k):
            args.extend(a)
            kwargs.update(k)
        env = dict(_g)
        env["_cap"] = _cap
        eval("_cap(%s)" % _INPUT, env)
        return repr(fn(*args, **kwargs))
    _emit({"status": "passed", "value": _with_timeout(_load, _TIMEOUT)})
except _TestTimeout:
    _emit({"status": "timeout"})
except BaseException as e:
    _emit({"status": "crashed", "error": repr(e)})
)PY";

  RunResult run =
      run_process({python_bin_, "-I", "-"}, script.str(), timeout_s + 15.0);
  EvalResult result;
  result.stderr_excerpt = excerpt(run.stderr_text);
  if (run.spawn_failed) {
    throw SandboxUnavailable("failed to spawn '" + python_bin_ + "'");
  }
  if (run.timed_out) {
    result.status = ExecStatus::Timeout;
    return result;
  }
  nlohmann::json verdict = parse_verdict(run.stdout_text);
  if (!verdict.is_object() || !verdict.contains("status")) {
    result.status = ExecStatus::Crashed;
    return result;
  }
  std::string status = verdict["status"].get<std::string>();
  if (status == "passed") {
    result.status = ExecStatus::Passed;
    result.literal = verdict.value("value", "");
  } else if (status == "timeout") {
    result.status = ExecStatus::Timeout;
  } else {
    result.status = ExecStatus::Crashed;
    if (verdict.contains("error") && result.stderr_excerpt.empty()) {
      result.stderr_excerpt = verdict["error"].get<std::string>();
    }
  }
  return result;
}

bool Sandbox::judge_literals(const std::string& predicted,
                             const std::string& expected,
                             double timeout_s) const {
  std::ostringstream script;
  script << kDriverPrelude;
  script << "_PRED = " << py_str(predicted) << "\n";
  script << "_EXP = " << py_str(expected) << "\n";
  script << "_TIMEOUT = " << timeout_s << "\n";
  script << R"PY(
try:
    def _cmp():
        return bool(eval(_PRED, {}) == eval(_EXP, {}))
    _emit({"status": "passed", "equal": _with_timeout(_cmp, _TIMEOUT)})
except BaseException:
    _emit({"status": "crashed", "equal": False})
)PY";

  RunResult run =
      run_process({python_bin_, "-I", "-"}, script.str(), timeout_s + 15.0);
  if (run.spawn_failed) {
    throw SandboxUnavailable("failed to spawn '" + python_bin_ + "'");
  }
  if (run.timed_out) return false;
  nlohmann::json verdict = parse_verdict(run.stdout_text);
  if (!verdict.is_object()) return false;
  return verdict.value("equal", false);
}

}  // namespace mutabench
