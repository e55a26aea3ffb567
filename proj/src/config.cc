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

#include "fairvax/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace fairvax {
namespace {

std::string Unquote(absl::string_view v) {
  v = absl::StripAsciiWhitespace(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') &&
      v.back() == v.front()) {
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

// Strips a trailing comment that is not inside a quoted string.
absl::string_view StripComment(absl::string_view line) {
  char quote = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

absl::StatusOr<KeyValueConfig> KeyValueConfig::Parse(absl::string_view text) {
  KeyValueConfig config;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(StripComment(raw));
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": expected 'key = value'"));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    absl::string_view value = absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": empty key or value"));
    }
    if (value.front() == '[' && value.back() != ']') {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": unterminated list"));
    }
    config.entries_[key] = value.front() == '[' ? std::string(value)
                                                : Unquote(value);
  }
  return config;
}

absl::StatusOr<KeyValueConfig> KeyValueConfig::Load(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open config file ", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<KeyValueConfig> config = Parse(buffer.str());
  if (!config.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", config.status().message()));
  }
  return config;
}

bool KeyValueConfig::Has(absl::string_view key) const {
  return entries_.find(key) != entries_.end();
}

void KeyValueConfig::Set(std::string key, std::string value) {
  entries_[std::move(key)] = std::move(value);
}

absl::StatusOr<double> KeyValueConfig::GetDouble(absl::string_view key,
                                                 double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double v = 0;
  if (!absl::SimpleAtod(it->second, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key ", key, ": not a number: '", it->second, "'"));
  }
  return v;
}

absl::StatusOr<int64_t> KeyValueConfig::GetInt(absl::string_view key,
                                               int64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  int64_t v = 0;
  if (!absl::SimpleAtoi(it->second, &v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config key ", key, ": not an integer: '", it->second, "'"));
  }
  return v;
}

absl::StatusOr<bool> KeyValueConfig::GetBool(absl::string_view key,
                                             bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  bool v = false;
  if (!absl::SimpleAtob(it->second, &v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config key ", key, ": not a boolean: '", it->second, "'"));
  }
  return v;
}

std::string KeyValueConfig::GetString(absl::string_view key,
                                      absl::string_view fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? std::string(fallback) : it->second;
}

std::vector<std::string> KeyValueConfig::GetList(absl::string_view key) const {
  std::vector<std::string> out;
  auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  absl::string_view v = it->second;
  if (!v.empty() && v.front() == '[') v = v.substr(1, v.size() - 2);
  for (absl::string_view item : absl::StrSplit(v, ',')) {
    std::string s = Unquote(item);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

KeyValueConfig KeyValueConfig::WithPrefix(absl::string_view prefix) const {
  KeyValueConfig out;
  for (const auto& [key, value] : entries_) {
    absl::string_view k = key;
    if (absl::ConsumePrefix(&k, prefix)) out.entries_[std::string(k)] = value;
  }
  return out;
}

absl::Status KeyValueConfig::CheckKnownKeys(
    const std::set<std::string>& known) const {
  for (const auto& [key, value] : entries_) {
    if (!known.count(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

}  // namespace fairvax
