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

#include "sasv/nn/mlp.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sasv::nn {

namespace {

std::string LayerName(std::size_t index) {
  return "layer " + std::to_string(index);
}

}  // namespace

MlpSpec::MlpSpec(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("MlpSpec: no layers");
  if (layers_.front().kind != LayerKind::kFullyConnected) {
    throw std::invalid_argument("MlpSpec: first layer must be fully connected");
  }
  Index width = layers_.front().in_dim;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    LayerSpec& layer = layers_[i];
    if (layer.kind == LayerKind::kElu) {
      layer.in_dim = layer.out_dim = width;
      continue;
    }
    if (layer.in_dim <= 0 || layer.out_dim <= 0) {
      throw std::invalid_argument("MlpSpec: " + LayerName(i) +
                                  " has non-positive dimension");
    }
    if (layer.in_dim != width) {
      throw std::invalid_argument(
          "MlpSpec: " + LayerName(i) + " expects " +
          std::to_string(layer.in_dim) + " inputs but previous layer gives " +
          std::to_string(width));
    }
    width = layer.out_dim;
  }
}

Index MlpSpec::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().in_dim;
}

Index MlpSpec::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().out_dim;
}

std::size_t MlpSpec::num_dense() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    if (layer.kind == LayerKind::kFullyConnected) ++n;
  }
  return n;
}

std::string MlpSpec::ToString() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (i > 0) os << " -> ";
    if (layers_[i].kind == LayerKind::kElu) {
      os << "ELU";
    } else {
      os << "FC(" << layers_[i].in_dim << "x" << layers_[i].out_dim << ")";
    }
  }
  return os.str();
}

std::size_t MlpParams::NumScalars() const {
  std::size_t n = 0;
  for (const auto& layer : dense) {
    n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  }
  return n;
}

bool MlpParams::AllFinite() const {
  for (const auto& layer : dense) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

void MlpParams::SetZero() {
  for (auto& layer : dense) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
}

bool MlpParams::operator==(const MlpParams& other) const {
  if (dense.size() != other.dense.size()) return false;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    const auto& a = dense[i];
    const auto& b = other.dense[i];
    if (a.weight.rows() != b.weight.rows() ||
        a.weight.cols() != b.weight.cols() || a.bias.size() != b.bias.size()) {
      return false;
    }
    if (a.weight != b.weight || a.bias != b.bias) return false;
  }
  return true;
}

MlpParams ZeroParams(const MlpSpec& spec) {
  MlpParams params;
  for (const auto& layer : spec.layers()) {
    if (layer.kind != LayerKind::kFullyConnected) continue;
    params.dense.push_back({Matrix::Zero(layer.out_dim, layer.in_dim),
                            Vector::Zero(layer.out_dim)});
  }
  return params;
}

MlpParams InitParams(const MlpSpec& spec, std::mt19937_64& rng) {
  MlpParams params = ZeroParams(spec);
  std::size_t k = 0;
  for (const auto& layer : spec.layers()) {
    if (layer.kind != LayerKind::kFullyConnected) continue;
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.in_dim + layer.out_dim));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix& w = params.dense[k++].weight;
    // Draws fill the weight row by row.
    for (Index r = 0; r < w.rows(); ++r) {
      for (Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    }
  }
  return params;
}

void ValidateParams(const MlpSpec& spec, const MlpParams& params) {
  if (params.dense.size() != spec.num_dense()) {
    throw std::invalid_argument(
        "params hold " + std::to_string(params.dense.size()) +
        " dense layers, spec has " + std::to_string(spec.num_dense()));
  }
  std::size_t k = 0;
  const auto& layers = spec.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].kind != LayerKind::kFullyConnected) continue;
    const DenseParams& p = params.dense[k++];
    if (p.weight.rows() != layers[i].out_dim ||
        p.weight.cols() != layers[i].in_dim ||
        p.bias.size() != layers[i].out_dim) {
      throw std::invalid_argument(LayerName(i) + ": parameter shape mismatch");
    }
  }
}

Vector Elu(const Vector& x) {
  if (!x.allFinite()) throw std::invalid_argument("Elu: non-finite input");
  return x.unaryExpr([](double v) { return v > 0.0 ? v : std::expm1(v); });
}

Vector DenseForward(const DenseParams& layer, const Vector& input) {
  if (input.size() != layer.weight.cols()) {
    throw std::invalid_argument(
        "DenseForward: input length " + std::to_string(input.size()) +
        " != in_dim " + std::to_string(layer.weight.cols()));
  }
  if (layer.bias.size() != layer.weight.rows()) {
    throw std::invalid_argument("DenseForward: bias length mismatch");
  }
  return layer.weight * input + layer.bias;
}

namespace {

Matrix RunLayers(const MlpSpec& spec, const MlpParams& params,
                 const Matrix& input, Tape* tape) {
  ValidateParams(spec, params);
  const auto& layers = spec.layers();
  if (input.rows() != spec.input_dim()) {
    throw std::invalid_argument(
        LayerName(0) + ": input has " + std::to_string(input.rows()) +
        " rows, expected " + std::to_string(spec.input_dim()));
  }
  if (tape != nullptr) {
    tape->layer_inputs.clear();
    tape->layer_inputs.reserve(layers.size());
  }
  Matrix x = input;
  std::size_t k = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (tape != nullptr) tape->layer_inputs.push_back(x);
    if (layers[i].kind == LayerKind::kFullyConnected) {
      const DenseParams& p = params.dense[k++];
      Matrix y = p.weight * x;
      y.colwise() += p.bias;
      x = std::move(y);
    } else {
      x = x.unaryExpr([](double v) { return v > 0.0 ? v : std::expm1(v); });
    }
  }
  return x;
}

}  // namespace

ForwardResult Forward(const MlpSpec& spec, const MlpParams& params,
                      const Matrix& input) {
  ForwardResult result;
  result.output = RunLayers(spec, params, input, &result.tape);
  return result;
}

Matrix Predict(const MlpSpec& spec, const MlpParams& params,
               const Matrix& input) {
  return RunLayers(spec, params, input, nullptr);
}

Vector Predict(const MlpSpec& spec, const MlpParams& params,
               const Vector& input) {
  Matrix column = input;
  return RunLayers(spec, params, column, nullptr).col(0);
}

Gradients Backward(const MlpSpec& spec, const MlpParams& params,
                   const Tape& tape, const Matrix& output_gradient) {
  const auto& layers = spec.layers();
  if (tape.layer_inputs.size() != layers.size()) {
    throw std::invalid_argument("Backward: tape does not match spec");
  }
  ValidateParams(spec, params);
  if (output_gradient.rows() != spec.output_dim() ||
      output_gradient.cols() != tape.layer_inputs.front().cols()) {
    throw std::invalid_argument("Backward: output gradient shape mismatch");
  }

  Gradients grads;
  grads.params = ZeroParams(spec);
  Matrix delta = output_gradient;
  std::size_t k = params.dense.size();
  for (std::size_t i = layers.size(); i-- > 0;) {
    const Matrix& x = tape.layer_inputs[i];
    if (x.rows() != layers[i].in_dim) {
      throw std::invalid_argument("Backward: tape entry for " + LayerName(i) +
                                  " has wrong width");
    }
    if (layers[i].kind == LayerKind::kFullyConnected) {
      --k;
      grads.params.dense[k].weight.noalias() = delta * x.transpose();
      grads.params.dense[k].bias = delta.rowwise().sum();
      delta = params.dense[k].weight.transpose() * delta;
    } else {
      // d/dx ELU = 1 for x > 0, e^x otherwise.
      delta.array() *= x.unaryExpr([](double v) {
                          return v > 0.0 ? 1.0 : std::exp(v);
                        }).array();
    }
  }
  grads.input = std::move(delta);
  return grads;
}

void Accumulate(MlpParams& a, const MlpParams& b) {
  if (a.dense.size() != b.dense.size()) {
    throw std::invalid_argument("Accumulate: layer count mismatch");
  }
  for (std::size_t i = 0; i < a.dense.size(); ++i) {
    if (a.dense[i].weight.rows() != b.dense[i].weight.rows() ||
        a.dense[i].weight.cols() != b.dense[i].weight.cols()) {
      throw std::invalid_argument("Accumulate: shape mismatch at dense layer " +
                                  std::to_string(i));
    }
    a.dense[i].weight += b.dense[i].weight;
    a.dense[i].bias += b.dense[i].bias;
  }
}

}  // namespace sasv::nn
