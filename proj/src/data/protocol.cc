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

#include "sasv/data/protocol.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sasv/common/error.h"

namespace sasv::data {

namespace {

// Calls fn(line_number, fields) for every non-blank line.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    std::vector<std::string> fields;
    std::istringstream is{std::string(line)};
    for (std::string field; is >> field;) fields.push_back(std::move(field));
    if (!fields.empty()) fn(line_number, fields);
  }
}

std::vector<std::string> SplitCommas(const std::string& list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t end = list.find(',', pos);
    if (end == std::string::npos) end = list.size();
    out.push_back(list.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

}  // namespace

std::string_view ToString(TrialLabel label) {
  switch (label) {
    case TrialLabel::kTarget:
      return "target";
    case TrialLabel::kNonTarget:
      return "nontarget";
    case TrialLabel::kSpoof:
      return "spoof";
  }
  return "?";
}

std::optional<TrialLabel> ParseTrialLabel(std::string_view token) {
  if (token == "target") return TrialLabel::kTarget;
  if (token == "nontarget") return TrialLabel::kNonTarget;
  if (token == "spoof") return TrialLabel::kSpoof;
  return std::nullopt;
}

std::vector<UtteranceRecord> ParseCmProtocol(std::string_view text,
                                             const std::string& source) {
  std::vector<UtteranceRecord> records;
  ForEachLine(text, [&](std::size_t line,
                        const std::vector<std::string>& fields) {
    if (fields.size() != 5) {
      throw ParseError(source, line,
                       "expected 5 columns (speaker utterance - system key), "
                       "got " + std::to_string(fields.size()));
    }
    UtteranceRecord record;
    record.speaker_id = fields[0];
    record.utterance_id = fields[1];
    if (fields[3] != "-") record.system_id = fields[3];
    record.spoof_key =
        fields[4] == "bonafide" ? SpoofKey::kBonafide : SpoofKey::kSpoof;
    records.push_back(std::move(record));
  });
  return records;
}

std::string FormatCmProtocol(const std::vector<UtteranceRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.speaker_id + ' ' + r.utterance_id + " - " +
           r.system_id.value_or("-") + ' ' +
           (r.spoof_key == SpoofKey::kBonafide ? "bonafide" : "spoof") + '\n';
  }
  return out;
}

EnrollmentMap ParseEnrollmentMap(std::string_view text,
                                 const std::string& source) {
  EnrollmentMap map;
  ForEachLine(text, [&](std::size_t line,
                        const std::vector<std::string>& fields) {
    if (fields.size() != 2) {
      throw ParseError(source, line,
                       "expected 'speaker utt1,utt2,...', got " +
                           std::to_string(fields.size()) + " columns");
    }
    std::vector<std::string> utts = SplitCommas(fields[1]);
    for (const auto& u : utts) {
      if (u.empty()) throw ParseError(source, line, "empty utterance id");
    }
    if (!map.emplace(fields[0], std::move(utts)).second) {
      throw ParseError(source, line, "duplicate speaker '" + fields[0] + "'");
    }
  });
  return map;
}

std::string FormatEnrollmentMap(const EnrollmentMap& map) {
  std::string out;
  for (const auto& [speaker, utts] : map) {
    out += speaker + ' ';
    for (std::size_t i = 0; i < utts.size(); ++i) {
      if (i > 0) out += ',';
      out += utts[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<TrialKey> ParseTrialKeys(std::string_view text,
                                     const std::string& source) {
  std::vector<TrialKey> keys;
  ForEachLine(text, [&](std::size_t line,
                        const std::vector<std::string>& fields) {
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError(source, line,
                       "expected 'speaker utterance label', got " +
                           std::to_string(fields.size()) + " columns");
    }
    const std::string& token = fields.back();
    auto label = ParseTrialLabel(token);
    if (!label) {
      throw ParseError(source, line,
                       "unknown label '" + token +
                           "' (expected target, nontarget or spoof)");
    }
    keys.push_back({fields[0], fields[1], *label});
  });
  return keys;
}

std::string FormatTrialKeys(const std::vector<TrialKey>& keys) {
  std::string out;
  for (const auto& k : keys) {
    out += k.enroll_speaker_id + ' ' + k.test_utterance_id + ' ' +
           std::string(ToString(k.label)) + '\n';
  }
  return out;
}

std::vector<TrialRecord> ResolveTrials(const std::vector<TrialKey>& keys,
                                       const EnrollmentMap& enrollment) {
  std::vector<TrialRecord> trials;
  trials.reserve(keys.size());
  for (const auto& key : keys) {
    auto it = enrollment.find(key.enroll_speaker_id);
    if (it == enrollment.end() || it->second.empty()) {
      throw std::runtime_error("speaker '" + key.enroll_speaker_id +
                               "' has no entry in the enrollment map");
    }
    trials.push_back(
        {key.enroll_speaker_id, it->second, key.test_utterance_id, key.label});
  }
  return trials;
}

std::vector<TrialRecord> ParseTrialList(std::string_view text,
                                        const EnrollmentMap& enrollment,
                                        const std::string& source) {
  return ResolveTrials(ParseTrialKeys(text, source), enrollment);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace sasv::data
