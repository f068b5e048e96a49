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

#include "mutabench/manifest.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mutabench/util/sha256.hpp"
#include "mutabench/version.hpp"

namespace mutabench {

namespace {

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json profile_to_json(const ModelProfile& p) {
  return {{"name", p.name},
          {"endpoint", p.endpoint},
          {"supports_multi_turn", p.supports_multi_turn},
          {"max_iterations", p.max_iterations},
          {"temperature", p.temperature},
          {"max_tokens", p.max_tokens}};
}

ModelProfile profile_from_json(const nlohmann::json& j) {
  ModelProfile p;
  p.name = j.at("name").get<std::string>();
  p.endpoint = j.value("endpoint", "");
  p.supports_multi_turn = j.value("supports_multi_turn", true);
  p.max_iterations = j.value("max_iterations", 5);
  p.temperature = j.value("temperature", 0.0);
  p.max_tokens = j.value("max_tokens", 1024);
  return p;
}

}  // namespace

RunManifest make_manifest(uint64_t seed, const std::string& benchmark_path,
                          const std::vector<ModelProfile>& profiles,
                          double budget_s) {
  RunManifest m;
  m.seed = seed;
  m.benchmark_path = benchmark_path;
  m.benchmark_sha256 =
      benchmark_path.empty() ? "" : sha256_file_hex(benchmark_path);
  m.profiles = profiles;
  m.budget_s = budget_s;
  m.created_utc = utc_now();
  m.tool_version = kVersion;

  // The id hashes everything reproducibility depends on (not the
  // timestamp).
  std::ostringstream content;
  content << seed << "\n" << m.benchmark_sha256 << "\n" << budget_s << "\n";
  for (const auto& p : profiles) content << profile_to_json(p).dump() << "\n";
  m.id = sha256_hex(content.str()).substr(0, 16);
  return m;
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::json j = {
      {"id", m.id},
      {"seed", m.seed},
      {"benchmark_path", m.benchmark_path},
      {"benchmark_sha256", m.benchmark_sha256},
      {"profiles", nlohmann::json::array()},
      {"budget_s", m.budget_s},
      {"created_utc", m.created_utc},
      {"tool_version", m.tool_version},
  };
  for (const auto& p : m.profiles) j["profiles"].push_back(profile_to_json(p));
  return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RunManifest m;
  m.id = j.at("id").get<std::string>();
  m.seed = j.at("seed").get<uint64_t>();
  m.benchmark_path = j.value("benchmark_path", "");
  m.benchmark_sha256 = j.value("benchmark_sha256", "");
  for (const auto& p : j.value("profiles", nlohmann::json::array())) {
    m.profiles.push_back(profile_from_json(p));
  }
  m.budget_s = j.value("budget_s", 90.0);
  m.created_utc = j.value("created_utc", "");
  m.tool_version = j.value("tool_version", "");
  return m;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << manifest_to_json(manifest) << "\n";
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str());
}

}  // namespace mutabench
