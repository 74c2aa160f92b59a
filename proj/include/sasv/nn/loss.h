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

#ifndef SASV_NN_LOSS_H_
#define SASV_NN_LOSS_H_

#include <span>
#include <vector>

#include "sasv/nn/mlp.h"

namespace sasv::nn {

// Numerically stable softmax. Throws on an empty or non-finite vector.
Vector Softmax(const Vector& logits);

// Column-wise softmax of a (classes x batch) logit matrix.
Matrix SoftmaxColumns(const Matrix& logits);

// Categorical cross entropy -sum_i target_i * log(softmax(logits)_i).
// `target` must be one-hot with the same length as `logits`.
double CceLoss(const Vector& logits, const Vector& target);

// Index of the hot entry; throws std::invalid_argument if `target` is not
// one-hot.
Index OneHotIndex(const Vector& target);

struct BatchLoss {
  double loss = 0.0;  // mean over the batch
  Matrix gradient;    // d(mean loss) / d(logits)
};

// Mean CCE over the columns of `logits`; `labels[j]` is the class of column j.
BatchLoss CceBatch(const Matrix& logits, std::span<const int> labels);

}  // namespace sasv::nn

#endif  // SASV_NN_LOSS_H_
