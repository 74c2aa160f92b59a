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

#include "sasv/models/checkpoint.h"

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sasv/common/binary_io.h"
#include "sasv/data/protocol.h"

namespace sasv::models {

namespace {

constexpr char kMagic[] = "SASVMDL1";
constexpr std::size_t kMagicSize = 8;

void WriteName(std::ostream& os, const std::string& name) {
  if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("checkpoint name too long");
  }
  io::WriteLittleEndian(os, static_cast<std::uint16_t>(name.size()));
  io::WriteBytes(os, name);
}

std::string ReadName(std::istream& is, const char* what) {
  const auto len = io::ReadLittleEndian<std::uint16_t>(is, what);
  return io::ReadBytes(is, len, what);
}

}  // namespace

const Checkpoint::NamedBlock& Checkpoint::Block(const std::string& name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return b;
  }
  throw std::runtime_error("checkpoint (" + kind + ") has no block '" + name +
                           "'");
}

const std::vector<double>& Checkpoint::Extra(const std::string& name) const {
  for (const auto& [key, values] : extras) {
    if (key == name) return values;
  }
  throw std::runtime_error("checkpoint (" + kind + ") has no entry '" + name +
                           "'");
}

double Checkpoint::Scalar(const std::string& name) const {
  const auto& values = Extra(name);
  if (values.size() != 1) {
    throw std::runtime_error("checkpoint entry '" + name + "' is not a scalar");
  }
  return values.front();
}

std::string EncodeCheckpoint(const Checkpoint& checkpoint) {
  std::ostringstream os(std::ios::binary);
  os.write(kMagic, kMagicSize);
  WriteName(os, checkpoint.kind);

  io::WriteLittleEndian(os, static_cast<std::uint32_t>(checkpoint.blocks.size()));
  for (const auto& block : checkpoint.blocks) {
    nn::ValidateParams(block.spec, block.params);
    WriteName(os, block.name);
    const auto& layers = block.spec.layers();
    io::WriteLittleEndian(os, static_cast<std::uint32_t>(layers.size()));
    for (const auto& layer : layers) {
      io::WriteLittleEndian(os, static_cast<std::uint8_t>(layer.kind));
      io::WriteLittleEndian(os, static_cast<std::uint32_t>(layer.in_dim));
      io::WriteLittleEndian(os, static_cast<std::uint32_t>(layer.out_dim));
    }
  }

  io::WriteLittleEndian(os, static_cast<std::uint32_t>(checkpoint.extras.size()));
  for (const auto& [name, values] : checkpoint.extras) {
    WriteName(os, name);
    io::WriteLittleEndian(os, static_cast<std::uint32_t>(values.size()));
    for (double v : values) io::WriteF64(os, v);
  }

  for (const auto& block : checkpoint.blocks) {
    for (const auto& layer : block.params.dense) {
      for (nn::Index r = 0; r < layer.weight.rows(); ++r) {
        for (nn::Index c = 0; c < layer.weight.cols(); ++c) {
          io::WriteF64(os, layer.weight(r, c));
        }
      }
      for (nn::Index r = 0; r < layer.bias.size(); ++r) {
        io::WriteF64(os, layer.bias[r]);
      }
    }
  }
  return os.str();
}

Checkpoint DecodeCheckpoint(const std::string& bytes,
                            const std::string& source) {
  if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kMagic) != 0) {
    throw std::runtime_error(source + ": not a model checkpoint (bad magic)");
  }
  std::istringstream is(bytes, std::ios::binary);
  is.ignore(kMagicSize);
  try {
    Checkpoint checkpoint;
    checkpoint.kind = ReadName(is, "kind");

    const auto n_blocks = io::ReadLittleEndian<std::uint32_t>(is, "block count");
    for (std::uint32_t b = 0; b < n_blocks; ++b) {
      Checkpoint::NamedBlock block;
      block.name = ReadName(is, "block name");
      const auto n_layers =
          io::ReadLittleEndian<std::uint32_t>(is, "layer count");
      std::vector<nn::LayerSpec> layers;
      for (std::uint32_t l = 0; l < n_layers; ++l) {
        const auto kind = io::ReadLittleEndian<std::uint8_t>(is, "layer kind");
        const auto in = io::ReadLittleEndian<std::uint32_t>(is, "in_dim");
        const auto out = io::ReadLittleEndian<std::uint32_t>(is, "out_dim");
        if (kind == static_cast<std::uint8_t>(nn::LayerKind::kFullyConnected)) {
          layers.push_back(nn::LayerSpec::Dense(in, out));
        } else if (kind == static_cast<std::uint8_t>(nn::LayerKind::kElu)) {
          layers.push_back(nn::LayerSpec::Elu());
        } else {
          throw std::runtime_error("unknown layer kind " + std::to_string(kind));
        }
      }
      block.spec = nn::MlpSpec(std::move(layers));
      checkpoint.blocks.push_back(std::move(block));
    }

    const auto n_extras = io::ReadLittleEndian<std::uint32_t>(is, "extra count");
    for (std::uint32_t e = 0; e < n_extras; ++e) {
      std::string name = ReadName(is, "extra name");
      const auto n = io::ReadLittleEndian<std::uint32_t>(is, "extra length");
      std::vector<double> values(n);
      for (auto& v : values) v = io::ReadF64(is, "extra value");
      checkpoint.extras.emplace_back(std::move(name), std::move(values));
    }

    for (auto& block : checkpoint.blocks) {
      block.params = nn::ZeroParams(block.spec);
      for (auto& layer : block.params.dense) {
        for (nn::Index r = 0; r < layer.weight.rows(); ++r) {
          for (nn::Index c = 0; c < layer.weight.cols(); ++c) {
            layer.weight(r, c) = io::ReadF64(is, "weights");
          }
        }
        for (nn::Index r = 0; r < layer.bias.size(); ++r) {
          layer.bias[r] = io::ReadF64(is, "biases");
        }
      }
      if (!block.params.AllFinite()) {
        throw std::runtime_error("block '" + block.name +
                                 "' has non-finite parameters");
      }
    }
    if (is.peek() != std::char_traits<char>::eof()) {
      throw std::runtime_error("trailing bytes after parameters");
    }
    return checkpoint;
  } catch (const std::exception& e) {
    throw std::runtime_error(source + ": " + e.what());
  }
}

void SaveCheckpoint(const Checkpoint& checkpoint, const std::string& path) {
  data::WriteTextFile(path, EncodeCheckpoint(checkpoint));
}

Checkpoint LoadCheckpoint(const std::string& path) {
  return DecodeCheckpoint(data::ReadTextFile(path), path);
}

}  // namespace sasv::models
