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

#ifndef SASV_METRICS_EER_H_
#define SASV_METRICS_EER_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sasv/data/protocol.h"

namespace sasv::metrics {

struct EerResult {
  double eer = 0.0;  // fraction in [0, 1]
  double threshold = 0.0;
};

// Equal error rate with "accept iff score >= threshold".
//
// Operating points are taken at every distinct score (plus +inf, where
// everything is rejected). Going up in threshold, FRR rises and FAR falls;
// the EER is the linear interpolation of the first segment where FRR - FAR
// changes sign. Throws std::invalid_argument if either list is empty.
EerResult ComputeEer(std::span<const double> positives,
                     std::span<const double> negatives);

enum class Metric { kSv, kSpf, kSasv };
inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::kSv, Metric::kSpf,
                                                      Metric::kSasv};
std::string_view ToString(Metric metric);

struct ScoredTrial {
  data::TrialKey trial;
  double score = 0.0;  // higher = more target-like
};

struct TrialSubset {
  std::vector<double> positives;
  std::vector<double> negatives;
};

// sv: target vs nontarget; spf: target vs spoof; sasv: target vs
// nontarget + spoof.
TrialSubset SubsetTrials(std::span<const ScoredTrial> trials, Metric metric);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges spanning [min, max]
  // counts[label][bin], labels indexed by TrialLabel.
  std::array<std::vector<std::size_t>, 3> counts;
};

// Equal-width bins over the observed score range; the last bin is closed.
Histogram ScoreHistogram(std::span<const ScoredTrial> trials, int bins);

struct MetricResult {
  Metric metric = Metric::kSasv;
  std::optional<EerResult> eer;  // absent when a side is empty
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
};

struct EvalReport {
  std::array<MetricResult, 3> metrics;  // sv, spf, sasv
  std::array<std::size_t, 3> label_counts{};  // target, nontarget, spoof
  Histogram histogram;

  const MetricResult& Get(Metric metric) const {
    return metrics[static_cast<std::size_t>(metric)];
  }
  // EER in percent, or nullopt when absent.
  std::optional<double> EerPercent(Metric metric) const;
};

inline constexpr int kDefaultHistogramBins = 50;

EvalReport EvaluateSystem(std::span<const ScoredTrial> trials,
                          int histogram_bins = kDefaultHistogramBins);

}  // namespace sasv::metrics

#endif  // SASV_METRICS_EER_H_
