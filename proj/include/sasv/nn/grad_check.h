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

#ifndef SASV_NN_GRAD_CHECK_H_
#define SASV_NN_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "sasv/nn/mlp.h"

namespace sasv::nn {

struct GradCheckOptions {
  double epsilon = 1e-5;
  // 0 checks every scalar. Otherwise at most this many coordinates per dense
  // layer are drawn (without replacement) using `seed`.
  std::size_t max_checks_per_layer = 0;
  std::uint64_t seed = 0;
  // Relative error is |a - n| / max(|a|, |n|, scale_floor).
  double scale_floor = 1e-6;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t num_checked = 0;
  std::string worst;  // "set S layer L weight(r,c)" of the worst coordinate
};

// Compares analytic gradients against central finite differences
// (L(p + eps) - L(p - eps)) / (2 eps). `loss` must evaluate the loss at the
// current values of `params`; each coordinate is restored after probing.
GradCheckResult GradCheck(std::span<MlpParams* const> params,
                          std::span<const MlpParams> analytic,
                          const std::function<double()>& loss,
                          const GradCheckOptions& options = {});

// Single parameter-set convenience form.
GradCheckResult GradCheck(MlpParams& params, const MlpParams& analytic,
                          const std::function<double()>& loss,
                          const GradCheckOptions& options = {});

}  // namespace sasv::nn

#endif  // SASV_NN_GRAD_CHECK_H_
