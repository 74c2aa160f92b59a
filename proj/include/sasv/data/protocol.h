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

#ifndef SASV_DATA_PROTOCOL_H_
#define SASV_DATA_PROTOCOL_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasv::data {

enum class SpoofKey { kBonafide, kSpoof };

struct UtteranceRecord {
  std::string utterance_id;
  std::string speaker_id;
  SpoofKey spoof_key = SpoofKey::kBonafide;
  std::optional<std::string> system_id;  // attack system, e.g. "A01"

  bool operator==(const UtteranceRecord&) const = default;
};

enum class TrialLabel { kTarget, kNonTarget, kSpoof };

std::string_view ToString(TrialLabel label);
// Accepts exactly "target", "nontarget" and "spoof".
std::optional<TrialLabel> ParseTrialLabel(std::string_view token);

// One trial line before enrollment resolution.
struct TrialKey {
  std::string enroll_speaker_id;
  std::string test_utterance_id;
  TrialLabel label = TrialLabel::kTarget;

  bool operator==(const TrialKey&) const = default;
};

struct TrialRecord {
  std::string enroll_speaker_id;
  std::vector<std::string> enroll_utterance_ids;  // never empty
  std::string test_utterance_id;
  TrialLabel label = TrialLabel::kTarget;

  bool operator==(const TrialRecord&) const = default;
};

// speaker_id -> enrollment utterance ids.
using EnrollmentMap = std::map<std::string, std::vector<std::string>>;

// ASVspoof 2019 LA CM protocol: "speaker utterance - system key" per line.
// `source` names the input in error messages.
std::vector<UtteranceRecord> ParseCmProtocol(
    std::string_view text, const std::string& source = "<protocol>");
std::string FormatCmProtocol(const std::vector<UtteranceRecord>& records);

// "speaker utt1,utt2,..." per line.
EnrollmentMap ParseEnrollmentMap(std::string_view text,
                                 const std::string& source = "<enroll-map>");
std::string FormatEnrollmentMap(const EnrollmentMap& map);

// "speaker test_utterance label" per line. A four-column variant with the
// attack system in the third column ("speaker utt A07 spoof") is accepted.
std::vector<TrialKey> ParseTrialKeys(std::string_view text,
                                     const std::string& source = "<trials>");
std::string FormatTrialKeys(const std::vector<TrialKey>& keys);

// Attaches enrollment utterances. Throws std::runtime_error naming the
// first speaker missing from `enrollment`.
std::vector<TrialRecord> ResolveTrials(const std::vector<TrialKey>& keys,
                                       const EnrollmentMap& enrollment);

// ParseTrialKeys followed by ResolveTrials.
std::vector<TrialRecord> ParseTrialList(std::string_view text,
                                        const EnrollmentMap& enrollment,
                                        const std::string& source = "<trials>");

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);

}  // namespace sasv::data

#endif  // SASV_DATA_PROTOCOL_H_
