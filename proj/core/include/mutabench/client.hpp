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

#ifndef MUTABENCH_CLIENT_HPP
#define MUTABENCH_CLIENT_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mutabench {

struct EndpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChatMessage {
  std::string role;  // "user" or "assistant"
  std::string content;
};

struct ChatResponse {
  std::string content;
  double latency_s = 0.0;
  int prompt_tokens = -1;      // -1 when the endpoint does not report usage
  int completion_tokens = -1;
};

// Minimal OpenAI-compatible chat-completions client. The endpoint is a base
// URL (scheme://host[:port][/prefix]); requests go to
// <prefix>/v1/chat/completions. The API key comes from the environment
// variable named by api_key_env (empty = anonymous endpoint).
class ChatClient {
 public:
  ChatClient(std::string endpoint, std::string api_key_env = "MUTABENCH_API_KEY");

  // Sends the conversation; retries transient failures up to max_retries
  // times, then throws EndpointError.
  ChatResponse complete(const std::string& model,
                        const std::vector<ChatMessage>& messages,
                        double temperature, int max_tokens,
                        int max_retries = 3) const;

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  std::string base_;  // scheme://host[:port]
  std::string path_;  // <prefix>/v1/chat/completions
  std::string api_key_;
};

}  // namespace mutabench

#endif  // MUTABENCH_CLIENT_HPP
