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

#ifndef SASV_TESTS_EER_ORACLE_H_
#define SASV_TESTS_EER_ORACLE_H_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace sasv::testing {

// Quadratic threshold sweep: every distinct score, then +inf. Rates are
// recounted from scratch at each threshold.
inline double BruteForceEer(const std::vector<double>& pos,
                            const std::vector<double>& neg) {
  std::vector<double> thresholds = pos;
  thresholds.insert(thresholds.end(), neg.begin(), neg.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  std::vector<double> frr;
  std::vector<double> far;
  for (double t : thresholds) {
    std::size_t rejected = 0;
    for (double s : pos) rejected += s < t ? 1 : 0;
    std::size_t accepted = 0;
    for (double s : neg) accepted += s >= t ? 1 : 0;
    frr.push_back(static_cast<double>(rejected) / static_cast<double>(pos.size()));
    far.push_back(static_cast<double>(accepted) / static_cast<double>(neg.size()));
  }
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const double gap = frr[k] - far[k];
    if (gap < 0.0) continue;
    if (k == 0) return frr[0];
    const double before = frr[k - 1] - far[k - 1];
    const double t = before / (before - gap);
    return frr[k - 1] + t * (frr[k] - frr[k - 1]);
  }
  return 1.0;
}

}  // namespace sasv::testing

#endif  // SASV_TESTS_EER_ORACLE_H_
