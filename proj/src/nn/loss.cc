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

#include "sasv/nn/loss.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sasv::nn {

namespace {

double LogSumExp(const Eigen::Ref<const Vector>& x) {
  const double peak = x.maxCoeff();
  return peak + std::log((x.array() - peak).exp().sum());
}

}  // namespace

Vector Softmax(const Vector& logits) {
  if (logits.size() == 0) throw std::invalid_argument("Softmax: empty input");
  if (!logits.allFinite()) {
    throw std::invalid_argument("Softmax: non-finite logits");
  }
  Vector e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

Matrix SoftmaxColumns(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Index j = 0; j < logits.cols(); ++j) {
    out.col(j) = Softmax(logits.col(j));
  }
  return out;
}

Index OneHotIndex(const Vector& target) {
  Index hot = -1;
  for (Index i = 0; i < target.size(); ++i) {
    if (target[i] == 1.0) {
      if (hot >= 0) throw std::invalid_argument("target is not one-hot");
      hot = i;
    } else if (target[i] != 0.0) {
      throw std::invalid_argument("target is not one-hot");
    }
  }
  if (hot < 0) throw std::invalid_argument("target is not one-hot");
  return hot;
}

double CceLoss(const Vector& logits, const Vector& target) {
  if (logits.size() != target.size()) {
    throw std::invalid_argument("CceLoss: logits/target length mismatch");
  }
  if (logits.size() == 0) throw std::invalid_argument("CceLoss: empty input");
  if (!logits.allFinite()) {
    throw std::invalid_argument("CceLoss: non-finite logits");
  }
  const Index hot = OneHotIndex(target);
  // log-sum-exp form: exact zero for a dominant correct logit.
  return LogSumExp(logits) - logits[hot];
}

BatchLoss CceBatch(const Matrix& logits, std::span<const int> labels) {
  if (static_cast<std::size_t>(logits.cols()) != labels.size()) {
    throw std::invalid_argument("CceBatch: label count mismatch");
  }
  if (labels.empty()) throw std::invalid_argument("CceBatch: empty batch");
  BatchLoss result;
  result.gradient = SoftmaxColumns(logits);
  const double scale = 1.0 / static_cast<double>(labels.size());
  for (Index j = 0; j < logits.cols(); ++j) {
    const int label = labels[static_cast<std::size_t>(j)];
    if (label < 0 || label >= logits.rows()) {
      throw std::invalid_argument("CceBatch: label " + std::to_string(label) +
                                  " out of range");
    }
    result.loss += LogSumExp(logits.col(j)) - logits(label, j);
    result.gradient(label, j) -= 1.0;
  }
  result.loss *= scale;
  result.gradient *= scale;
  return result;
}

}  // namespace sasv::nn
