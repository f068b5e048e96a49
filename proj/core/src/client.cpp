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

#include "mutabench/client.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace mutabench {

namespace {

constexpr const char* kCompletionsPath = "/v1/chat/completions";

}  // namespace

ChatClient::ChatClient(std::string endpoint, std::string api_key_env)
    : endpoint_(std::move(endpoint)) {
  // Split scheme://host[:port] from an optional path prefix.
  size_t scheme = endpoint_.find("://");
  size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  size_t slash = endpoint_.find('/', host_start);
  if (slash == std::string::npos) {
    base_ = endpoint_;
    path_ = kCompletionsPath;
  } else {
    base_ = endpoint_.substr(0, slash);
    std::string prefix = endpoint_.substr(slash);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    path_ = prefix + kCompletionsPath;
  }
  if (!api_key_env.empty()) {
    const char* key = std::getenv(api_key_env.c_str());
    if (key) api_key_ = key;
  }
}

ChatResponse ChatClient::complete(const std::string& model,
                                  const std::vector<ChatMessage>& messages,
                                  double temperature, int max_tokens,
                                  int max_retries) const {
  nlohmann::json body = {
      {"model", model},
      {"temperature", temperature},
      {"max_tokens", max_tokens},
      {"messages", nlohmann::json::array()},
  };
  for (const auto& m : messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  std::string payload = body.dump();

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
    }
    httplib::Client cli(base_);
    cli.set_connection_timeout(10, 0);
    cli.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) {
      headers.emplace("Authorization", "Bearer " + api_key_);
    }
    auto start = std::chrono::steady_clock::now();
    auto res = cli.Post(path_, headers, payload, "application/json");
    double latency =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;  // transient: retry
    }
    if (res->status != 200) {
      throw EndpointError("HTTP " + std::to_string(res->status) + " from " +
                          endpoint_ + ": " + res->body.substr(0, 500));
    }
    nlohmann::json doc =
        nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (!doc.is_object() || !doc.contains("choices") ||
        !doc["choices"].is_array() || doc["choices"].empty()) {
      last_error = "malformed completion payload";
      continue;
    }
    const auto& choice = doc["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content")) {
      last_error = "completion choice lacks message content";
      continue;
    }
    ChatResponse out;
    out.content = choice["message"]["content"].is_null()
                      ? ""
                      : choice["message"]["content"].get<std::string>();
    out.latency_s = latency;
    if (doc.contains("usage") && doc["usage"].is_object()) {
      out.prompt_tokens = doc["usage"].value("prompt_tokens", -1);
      out.completion_tokens = doc["usage"].value("completion_tokens", -1);
    }
    return out;
  }
  throw EndpointError("endpoint " + endpoint_ + " failed after " +
                      std::to_string(max_retries + 1) + " attempts: " +
                      last_error);
}

}  // namespace mutabench
