// Copyright (c) 2026 The sasv-fusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SASV_CLI_RUN_CONFIG_H_
#define SASV_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace sasv::cli {

// Flat "key = value" settings for one command. Lines starting with '#' are
// comments. Only known keys are accepted.
//
// Getters record the default they fall back to, so Format() after a run
// lists every setting that run actually used.
class RunConfig {
 public:
  // Throws ParseError on malformed lines and ConfigError on unknown keys.
  static RunConfig Parse(std::string_view text,
                         const std::string& source = "<config>");
  static RunConfig Load(const std::string& path);

  // Throws ConfigError on an unknown key or an empty value.
  void Set(const std::string& key, const std::string& value);
  // Parses "key=value".
  void SetAssignment(const std::string& assignment);

  bool Has(const std::string& key) const { return values_.count(key) > 0; }

  std::string GetString(const std::string& key, const std::string& fallback);
  // Throws ConfigError when the key is absent.
  std::string RequireString(const std::string& key);
  int GetInt(const std::string& key, int fallback);
  double GetDouble(const std::string& key, double fallback);
  std::uint64_t GetUint64(const std::string& key, std::uint64_t fallback);

  std::string Format() const;

  static bool IsKnownKey(std::string_view key);

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace sasv::cli

#endif  // SASV_CLI_RUN_CONFIG_H_
