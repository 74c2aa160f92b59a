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

#include "sasv/nn/grad_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace sasv::nn {

namespace {

std::vector<std::size_t> PickCoordinates(std::size_t total,
                                         std::size_t limit,
                                         std::mt19937_64& rng) {
  std::vector<std::size_t> picked(total);
  std::iota(picked.begin(), picked.end(), std::size_t{0});
  if (limit == 0 || limit >= total) return picked;
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < limit; ++i) {
    std::uniform_int_distribution<std::size_t> dist(i, total - 1);
    std::swap(picked[i], picked[dist(rng)]);
  }
  picked.resize(limit);
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

GradCheckResult GradCheck(std::span<MlpParams* const> params,
                          std::span<const MlpParams> analytic,
                          const std::function<double()>& loss,
                          const GradCheckOptions& options) {
  if (!(options.epsilon > 0.0)) {
    throw std::invalid_argument("GradCheck: epsilon must be positive");
  }
  if (params.size() != analytic.size()) {
    throw std::invalid_argument("GradCheck: params/gradient count mismatch");
  }
  std::mt19937_64 rng(options.seed);
  GradCheckResult result;
  const double eps = options.epsilon;

  for (std::size_t s = 0; s < params.size(); ++s) {
    MlpParams& p = *params[s];
    if (p.dense.size() != analytic[s].dense.size()) {
      throw std::invalid_argument("GradCheck: layer count mismatch");
    }
    for (std::size_t k = 0; k < p.dense.size(); ++k) {
      Matrix& w = p.dense[k].weight;
      Vector& b = p.dense[k].bias;
      const DenseParams& g = analytic[s].dense[k];
      if (g.weight.rows() != w.rows() || g.weight.cols() != w.cols() ||
          g.bias.size() != b.size()) {
        throw std::invalid_argument("GradCheck: gradient shape mismatch");
      }
      const auto n_weight = static_cast<std::size_t>(w.size());
      const auto total = n_weight + static_cast<std::size_t>(b.size());
      for (std::size_t flat :
           PickCoordinates(total, options.max_checks_per_layer, rng)) {
        double* slot;
        double expected;
        std::string where = "set " + std::to_string(s) + " layer " +
                            std::to_string(k) + " ";
        if (flat < n_weight) {
          const auto r = static_cast<Index>(flat) / w.cols();
          const auto c = static_cast<Index>(flat) % w.cols();
          slot = &w(r, c);
          expected = g.weight(r, c);
          where += "weight(" + std::to_string(r) + "," + std::to_string(c) +
                   ")";
        } else {
          const auto r = static_cast<Index>(flat - n_weight);
          slot = &b[r];
          expected = g.bias[r];
          where += "bias(" + std::to_string(r) + ")";
        }
        const double saved = *slot;
        *slot = saved + eps;
        const double up = loss();
        *slot = saved - eps;
        const double down = loss();
        *slot = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double scale = std::max(
            {std::abs(expected), std::abs(numeric), options.scale_floor});
        const double err = std::abs(expected - numeric) / scale;
        ++result.num_checked;
        if (!(err <= result.max_relative_error)) {
          result.max_relative_error = err;
          result.worst = where;
        }
      }
    }
  }
  return result;
}

GradCheckResult GradCheck(MlpParams& params, const MlpParams& analytic,
                          const std::function<double()>& loss,
                          const GradCheckOptions& options) {
  MlpParams* sets[] = {&params};
  return GradCheck(sets, std::span<const MlpParams>(&analytic, 1), loss,
                   options);
}

}  // namespace sasv::nn
