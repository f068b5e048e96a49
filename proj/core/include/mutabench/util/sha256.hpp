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

#ifndef MUTABENCH_UTIL_SHA256_HPP
#define MUTABENCH_UTIL_SHA256_HPP

#include <string>

namespace mutabench {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);
// Digest of a file's bytes; throws std::runtime_error when unreadable.
std::string sha256_file_hex(const std::string& path);

}  // namespace mutabench

#endif  // MUTABENCH_UTIL_SHA256_HPP
