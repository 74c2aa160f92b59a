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

#include "sasv/cli/run_config.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "sasv/common/error.h"
#include "sasv/data/protocol.h"

namespace sasv::cli {

namespace {

constexpr auto kKnownKeys = std::to_array<std::string_view>({
    // Paths.
    "out", "protocol", "enroll_map", "trials", "asv_store", "cm_store",
    "checkpoint", "scores",
    // Model and evaluation.
    "model", "histogram_bins",
    // Training.
    "learning_rate", "epochs", "batch_size", "optimizer", "beta1", "beta2",
    "adam_epsilon", "seed", "samples_per_epoch", "triplets_per_batch",
    "margin",
    // Synthetic data.
    "n_speakers", "utts_per_speaker", "spoofs_per_speaker",
    "enroll_per_speaker", "asv_dim", "cm_dim", "speaker_rank", "session_rank",
    "session_noise", "asv_noise",
    "spoof_asv_spread", "cm_separation", "train_fraction", "dev_fraction",
    "nontarget_per_speaker", "store_format", "cm_scale"});

std::string_view Trim(std::string_view s) {
  const auto* ws = " \t\r";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("setting '" + key + "': cannot parse '" + text + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ConfigError("setting '" + key + "' must be finite");
    }
  }
  return value;
}

template <typename T>
std::string NumberText(T value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace

bool RunConfig::IsKnownKey(std::string_view key) {
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) !=
         kKnownKeys.end();
}

RunConfig RunConfig::Parse(std::string_view text, const std::string& source) {
  RunConfig config;
  std::size_t pos = 0;
  std::size_t line_number = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_number;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_number, "expected 'key = value'");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ParseError(source, line_number, "empty key or value");
    }
    if (!IsKnownKey(key)) {
      throw ParseError(source, line_number, "unknown setting '" + key + "'");
    }
    config.values_[key] = value;
  }
  return config;
}

RunConfig RunConfig::Load(const std::string& path) {
  return Parse(data::ReadTextFile(path), path);
}

void RunConfig::Set(const std::string& key, const std::string& value) {
  if (!IsKnownKey(key)) throw ConfigError("unknown setting '" + key + "'");
  if (value.empty()) throw ConfigError("empty value for '" + key + "'");
  values_[key] = value;
}

void RunConfig::SetAssignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("expected key=value, got '" + assignment + "'");
  }
  Set(std::string(Trim(std::string_view(assignment).substr(0, eq))),
      std::string(Trim(std::string_view(assignment).substr(eq + 1))));
}

std::string RunConfig::GetString(const std::string& key,
                                 const std::string& fallback) {
  auto [it, inserted] = values_.emplace(key, fallback);
  return it->second;
}

std::string RunConfig::RequireString(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("missing required setting '" + key + "'");
  }
  return it->second;
}

int RunConfig::GetInt(const std::string& key, int fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    values_[key] = NumberText(fallback);
    return fallback;
  }
  return ParseNumber<int>(key, it->second);
}

double RunConfig::GetDouble(const std::string& key, double fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    values_[key] = NumberText(fallback);
    return fallback;
  }
  return ParseNumber<double>(key, it->second);
}

std::uint64_t RunConfig::GetUint64(const std::string& key,
                                   std::uint64_t fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    values_[key] = NumberText(fallback);
    return fallback;
  }
  return ParseNumber<std::uint64_t>(key, it->second);
}

std::string RunConfig::Format() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
  return out;
}

}  // namespace sasv::cli
