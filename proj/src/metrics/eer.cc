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

#include "sasv/metrics/eer.h"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sasv::metrics {

EerResult ComputeEer(std::span<const double> positives,
                     std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) {
    throw std::invalid_argument("ComputeEer: empty score list");
  }
  std::vector<double> pos(positives.begin(), positives.end());
  std::vector<double> neg(negatives.begin(), negatives.end());
  auto finite = [](double s) { return std::isfinite(s); };
  if (!std::all_of(pos.begin(), pos.end(), finite) ||
      !std::all_of(neg.begin(), neg.end(), finite)) {
    throw std::invalid_argument("ComputeEer: non-finite score");
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  std::vector<double> thresholds;
  thresholds.reserve(pos.size() + neg.size());
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double n_pos = static_cast<double>(pos.size());
  const double n_neg = static_cast<double>(neg.size());
  std::size_t below_pos = 0;  // positives < threshold (false rejections)
  std::size_t below_neg = 0;  // negatives < threshold (true rejections)
  double prev_threshold = 0.0;
  double prev_frr = 0.0;
  double prev_gap = 0.0;
  for (std::size_t k = 0; k <= thresholds.size(); ++k) {
    const bool at_infinity = k == thresholds.size();
    double threshold = prev_threshold;
    double frr = 1.0;
    double far = 0.0;
    if (!at_infinity) {
      threshold = thresholds[k];
      while (below_pos < pos.size() && pos[below_pos] < threshold) ++below_pos;
      while (below_neg < neg.size() && neg[below_neg] < threshold) ++below_neg;
      frr = static_cast<double>(below_pos) / n_pos;
      far = static_cast<double>(neg.size() - below_neg) / n_neg;
    }
    const double gap = frr - far;
    if (gap >= 0.0) {
      if (k == 0) return {frr, threshold};
      // Linear interpolation of the (FAR, FRR) segment where FRR - FAR
      // crosses zero.
      const double t = prev_gap / (prev_gap - gap);
      return {prev_frr + t * (frr - prev_frr),
              prev_threshold + t * (threshold - prev_threshold)};
    }
    prev_threshold = threshold;
    prev_frr = frr;
    prev_gap = gap;
  }
  // Unreachable: the +inf point always has FRR - FAR = 1.
  return {1.0, prev_threshold};
}

std::string_view ToString(Metric metric) {
  switch (metric) {
    case Metric::kSv:
      return "sv";
    case Metric::kSpf:
      return "spf";
    case Metric::kSasv:
      return "sasv";
  }
  return "?";
}

TrialSubset SubsetTrials(std::span<const ScoredTrial> trials, Metric metric) {
  TrialSubset subset;
  for (const auto& t : trials) {
    switch (t.trial.label) {
      case data::TrialLabel::kTarget:
        subset.positives.push_back(t.score);
        break;
      case data::TrialLabel::kNonTarget:
        if (metric != Metric::kSpf) subset.negatives.push_back(t.score);
        break;
      case data::TrialLabel::kSpoof:
        if (metric != Metric::kSv) subset.negatives.push_back(t.score);
        break;
    }
  }
  return subset;
}

Histogram ScoreHistogram(std::span<const ScoredTrial> trials, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least 1 bin");
  const auto n_bins = static_cast<std::size_t>(bins);
  Histogram h;
  for (auto& c : h.counts) c.assign(n_bins, 0);
  if (trials.empty()) {
    h.edges.assign(n_bins + 1, 0.0);
    return h;
  }
  double lo = trials.front().score;
  double hi = lo;
  for (const auto& t : trials) {
    lo = std::min(lo, t.score);
    hi = std::max(hi, t.score);
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) {
    h.edges[i] = lo + width * static_cast<double>(i);
  }
  h.edges.back() = hi;
  for (const auto& t : trials) {
    std::size_t bin = 0;
    if (width > 0.0) {
      bin = static_cast<std::size_t>((t.score - lo) / width);
      bin = std::min(bin, n_bins - 1);
    }
    ++h.counts[static_cast<std::size_t>(t.trial.label)][bin];
  }
  return h;
}

std::optional<double> EvalReport::EerPercent(Metric metric) const {
  const auto& m = Get(metric);
  if (!m.eer) return std::nullopt;
  return 100.0 * m.eer->eer;
}

EvalReport EvaluateSystem(std::span<const ScoredTrial> trials,
                          int histogram_bins) {
  EvalReport report;
  for (const auto& t : trials) {
    if (!std::isfinite(t.score)) {
      throw std::invalid_argument("non-finite score for trial " +
                                  t.trial.enroll_speaker_id + " " +
                                  t.trial.test_utterance_id);
    }
    ++report.label_counts[static_cast<std::size_t>(t.trial.label)];
  }
  for (Metric metric : kAllMetrics) {
    const TrialSubset subset = SubsetTrials(trials, metric);
    MetricResult& result = report.metrics[static_cast<std::size_t>(metric)];
    result.metric = metric;
    result.n_positive = subset.positives.size();
    result.n_negative = subset.negatives.size();
    if (!subset.positives.empty() && !subset.negatives.empty()) {
      result.eer = ComputeEer(subset.positives, subset.negatives);
    }
  }
  report.histogram = ScoreHistogram(trials, histogram_bins);
  return report;
}

}  // namespace sasv::metrics
