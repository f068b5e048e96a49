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

#include "mutabench/ingest.hpp"

#include <fstream>

#include <json.hpp>

namespace mutabench {

namespace {

std::string record_id(const nlohmann::json& j, size_t line_no) {
  for (const char* key : {"id", "question_id", "task_id"}) {
    if (j.contains(key)) {
      const auto& v = j[key];
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
    }
  }
  return "line:" + std::to_string(line_no);
}

std::vector<TestCase> record_tests(const nlohmann::json& j) {
  std::vector<TestCase> tests;
  if (j.contains("tests") && j["tests"].is_array()) {
    for (const auto& t : j["tests"]) {
      tests.push_back({t.at("input").get<std::string>(),
                       t.at("expected").get<std::string>()});
    }
  } else if (j.contains("input") && j.contains("output")) {
    tests.push_back({j["input"].get<std::string>(),
                     j["output"].get<std::string>()});
  }
  return tests;
}

Program adapt(const nlohmann::json& j, BenchmarkOrigin origin,
              size_t line_no) {
  Program p;
  p.origin = origin;
  p.id = record_id(j, line_no);
  switch (origin) {
    case BenchmarkOrigin::LiveCodeBench:
      p.source = j.at("code").get<std::string>();
      p.entry_name = j.at("function_name").get<std::string>();
      p.tests = record_tests(j);
      break;
    case BenchmarkOrigin::CruxEval:
      p.source = j.at("code").get<std::string>();
      p.entry_name = j.value("function_name", std::string("f"));
      p.tests = record_tests(j);
      break;
    case BenchmarkOrigin::Custom:
      p.source = j.at("source").get<std::string>();
      p.entry_name = j.at("entry").get<std::string>();
      p.tests = record_tests(j);
      if (j.contains("origin")) {
        auto o = origin_from_name(j["origin"].get<std::string>());
        if (o) p.origin = *o;
      }
      break;
  }
  return p;
}

}  // namespace

IngestResult ingest_lines(const std::vector<std::string>& lines,
                          BenchmarkOrigin origin) {
  IngestResult result;
  size_t line_no = 0;
  for (const auto& line : lines) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json j =
        nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) {
      result.excluded.push_back(
          {"line:" + std::to_string(line_no), "not a JSON object"});
      continue;
    }
    Program p;
    try {
      p = adapt(j, origin, line_no);
    } catch (const nlohmann::json::exception& e) {
      result.excluded.push_back(
          {record_id(j, line_no), std::string("missing field: ") + e.what()});
      continue;
    }
    if (auto err = validate_program(p)) {
      result.excluded.push_back({p.id, *err});
      continue;
    }
    if (auto why = nondeterminism_reason(p)) {
      result.excluded.push_back({p.id, *why});
      continue;
    }
    result.programs.push_back(std::move(p));
  }
  return result;
}

IngestResult ingest_file(const std::string& path, BenchmarkOrigin origin) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return ingest_lines(lines, origin);
}

std::string exclusions_to_json(const std::vector<ExclusionEntry>& excluded) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : excluded) {
    j.push_back({{"id", e.id}, {"reason", e.reason}});
  }
  return j.dump(2);
}

}  // namespace mutabench
