// Copyright 2026 The Authors.
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

#ifndef FAIRVAX_CONFIG_H_
#define FAIRVAX_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fairvax {

// Flat key-value configuration in a TOML-compatible subset:
//
//   # comment
//   key = 1.5
//   name = "text"
//   flag = true
//   list = ["a", "b"]
//   synthetic.num_cbgs = 200
//
// Tables, multi-line values and inline tables are not supported. Keys may be
// dotted; they are kept verbatim.
class KeyValueConfig {
 public:
  static absl::StatusOr<KeyValueConfig> Parse(absl::string_view text);
  static absl::StatusOr<KeyValueConfig> Load(const std::filesystem::path& path);

  bool Has(absl::string_view key) const;
  void Set(std::string key, std::string value);

  absl::StatusOr<double> GetDouble(absl::string_view key, double fallback) const;
  absl::StatusOr<int64_t> GetInt(absl::string_view key, int64_t fallback) const;
  absl::StatusOr<bool> GetBool(absl::string_view key, bool fallback) const;
  std::string GetString(absl::string_view key, absl::string_view fallback) const;
  std::vector<std::string> GetList(absl::string_view key) const;

  // Entries whose key starts with `prefix`, with the prefix removed.
  KeyValueConfig WithPrefix(absl::string_view prefix) const;

  // Fails naming the first key not in `known`.
  absl::Status CheckKnownKeys(const std::set<std::string>& known) const;

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace fairvax

#endif  // FAIRVAX_CONFIG_H_
