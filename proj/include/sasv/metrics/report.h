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

#ifndef SASV_METRICS_REPORT_H_
#define SASV_METRICS_REPORT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sasv/metrics/eer.h"

namespace sasv::metrics {

// Score file: "enroll_speaker_id test_utterance_id score" per line. Scores
// are written in shortest round-trip form, so parsing recovers them exactly.
std::string FormatScoreFile(std::span<const ScoredTrial> trials);

struct ScoreLine {
  std::string enroll_speaker_id;
  std::string test_utterance_id;
  double score = 0.0;
};

std::vector<ScoreLine> ParseScoreFile(std::string_view text,
                                      const std::string& source = "<scores>");

// Attaches a score to every trial key. Throws std::runtime_error listing
// trials without a score.
std::vector<ScoredTrial> JoinScores(std::span<const data::TrialKey> trials,
                                    std::span<const ScoreLine> scores);

// key = value lines; EERs in percent with two decimals.
std::string FormatReportText(const EvalReport& report);
// metric,eer_percent,threshold,n_pos,n_neg
std::string FormatReportCsv(const EvalReport& report);
// label,bin_low,bin_high,count
std::string FormatHistogramCsv(const Histogram& histogram);

}  // namespace sasv::metrics

#endif  // SASV_METRICS_REPORT_H_
