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

#include "sasv/metrics/report.h"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "sasv/common/error.h"

namespace sasv::metrics {

namespace {

std::string ShortestDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

constexpr std::array<data::TrialLabel, 3> kLabels = {
    data::TrialLabel::kTarget, data::TrialLabel::kNonTarget,
    data::TrialLabel::kSpoof};

}  // namespace

std::string FormatScoreFile(std::span<const ScoredTrial> trials) {
  std::string out;
  for (const auto& t : trials) {
    out += t.trial.enroll_speaker_id + ' ' + t.trial.test_utterance_id + ' ' +
           ShortestDouble(t.score) + '\n';
  }
  return out;
}

std::vector<ScoreLine> ParseScoreFile(std::string_view text,
                                      const std::string& source) {
  std::vector<ScoreLine> lines;
  std::size_t pos = 0;
  std::size_t line_number = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::istringstream is{std::string(text.substr(pos, end - pos))};
    pos = end + 1;
    ++line_number;
    std::vector<std::string> fields;
    for (std::string f; is >> f;) fields.push_back(std::move(f));
    if (fields.empty()) continue;
    if (fields.size() != 3) {
      throw ParseError(source, line_number,
                       "expected 'speaker utterance score', got " +
                           std::to_string(fields.size()) + " columns");
    }
    double score = 0.0;
    const std::string& f = fields[2];
    auto res = std::from_chars(f.data(), f.data() + f.size(), score);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size() ||
        !std::isfinite(score)) {
      throw ParseError(source, line_number, "bad score '" + f + "'");
    }
    lines.push_back({fields[0], fields[1], score});
  }
  return lines;
}

std::vector<ScoredTrial> JoinScores(std::span<const data::TrialKey> trials,
                                    std::span<const ScoreLine> scores) {
  std::map<std::pair<std::string, std::string>, double> lookup;
  for (const auto& s : scores) {
    if (!lookup.emplace(std::pair{s.enroll_speaker_id, s.test_utterance_id},
                        s.score)
             .second) {
      throw std::runtime_error("duplicate score for trial " +
                               s.enroll_speaker_id + " " + s.test_utterance_id);
    }
  }
  std::vector<ScoredTrial> out;
  std::vector<std::string> missing;
  out.reserve(trials.size());
  for (const auto& t : trials) {
    auto it = lookup.find({t.enroll_speaker_id, t.test_utterance_id});
    if (it == lookup.end()) {
      missing.push_back(t.enroll_speaker_id + " " + t.test_utterance_id);
      continue;
    }
    out.push_back({t, it->second});
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) +
                      " trial(s) have no score, e.g. '" + missing.front() + "'";
    throw std::runtime_error(msg);
  }
  return out;
}

std::string FormatReportText(const EvalReport& report) {
  std::string out;
  for (const auto& m : report.metrics) {
    const std::string name(ToString(m.metric));
    if (m.eer) {
      out += fmt::format("{}_eer_percent = {:.2f}\n", name, 100.0 * m.eer->eer);
      out += fmt::format("{}_threshold = {:.6f}\n", name, m.eer->threshold);
    } else {
      out += name + "_eer_percent = absent\n";
      out += name + "_threshold = absent\n";
    }
    out += fmt::format("{}_n_pos = {}\n{}_n_neg = {}\n", name, m.n_positive,
                       name, m.n_negative);
  }
  for (std::size_t i = 0; i < kLabels.size(); ++i) {
    out += fmt::format("n_{} = {}\n", data::ToString(kLabels[i]),
                       report.label_counts[i]);
  }
  return out;
}

std::string FormatReportCsv(const EvalReport& report) {
  std::string out = "metric,eer_percent,threshold,n_pos,n_neg\n";
  for (const auto& m : report.metrics) {
    if (m.eer) {
      out += fmt::format("{},{:.6f},{:.6f},{},{}\n", ToString(m.metric),
                         100.0 * m.eer->eer, m.eer->threshold, m.n_positive,
                         m.n_negative);
    } else {
      out += fmt::format("{},,,{},{}\n", ToString(m.metric), m.n_positive,
                         m.n_negative);
    }
  }
  return out;
}

std::string FormatHistogramCsv(const Histogram& histogram) {
  std::string out = "label,bin_low,bin_high,count\n";
  for (std::size_t l = 0; l < kLabels.size(); ++l) {
    for (std::size_t b = 0; b < histogram.counts[l].size(); ++b) {
      out += fmt::format("{},{:.6f},{:.6f},{}\n", data::ToString(kLabels[l]),
                         histogram.edges[b], histogram.edges[b + 1],
                         histogram.counts[l][b]);
    }
  }
  return out;
}

}  // namespace sasv::metrics
