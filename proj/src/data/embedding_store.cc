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

#include "sasv/data/embedding_store.h"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sasv/common/binary_io.h"
#include "sasv/common/error.h"
#include "sasv/data/protocol.h"

namespace sasv::data {

namespace {

constexpr char kMagic[] = "SASVEMB1";
constexpr std::size_t kMagicSize = 8;

bool HasMagic(const std::string& bytes) {
  return bytes.size() >= kMagicSize && bytes.compare(0, kMagicSize, kMagic) == 0;
}

std::string EncodeBinary(const EmbeddingStore& store) {
  std::ostringstream os(std::ios::binary);
  os.write(kMagic, kMagicSize);
  io::WriteLittleEndian(os, static_cast<std::uint32_t>(store.dim()));
  io::WriteLittleEndian(os, static_cast<std::uint32_t>(store.size()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    const std::string& id = store.ids()[i];
    if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw std::invalid_argument("utterance id too long for binary store: " +
                                  id.substr(0, 32) + "...");
    }
    io::WriteLittleEndian(os, static_cast<std::uint16_t>(id.size()));
    io::WriteBytes(os, id);
    for (double v : store.vector(i)) io::WriteF32(os, static_cast<float>(v));
  }
  return os.str();
}

EmbeddingStore DecodeBinary(const std::string& bytes, EmbeddingKind kind,
                            const std::string& source) {
  std::istringstream is(bytes, std::ios::binary);
  is.ignore(kMagicSize);
  try {
    const auto dim = io::ReadLittleEndian<std::uint32_t>(is, "dim");
    const auto count = io::ReadLittleEndian<std::uint32_t>(is, "count");
    EmbeddingStore store(kind, dim);
    for (std::uint32_t r = 0; r < count; ++r) {
      const auto len = io::ReadLittleEndian<std::uint16_t>(is, "id length");
      std::string id = io::ReadBytes(is, len, "utterance id");
      Vector v(dim);
      for (std::uint32_t d = 0; d < dim; ++d) v[d] = io::ReadF32(is, "vector");
      store.Add(std::move(id), std::move(v));
    }
    if (is.peek() != std::char_traits<char>::eof()) {
      throw std::runtime_error("trailing bytes after last record");
    }
    return store;
  } catch (const std::exception& e) {
    throw std::runtime_error(source + ": " + e.what());
  }
}

std::string EncodeTsv(const EmbeddingStore& store) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < store.size(); ++i) {
    out += store.ids()[i];
    for (double v : store.vector(i)) {
      // Shortest text that round-trips the stored value.
      auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out += '\t';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

EmbeddingStore DecodeTsv(const std::string& text, EmbeddingKind kind,
                         const std::string& source) {
  EmbeddingStore store(kind);
  std::size_t pos = 0;
  std::size_t line_number = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) tab = line.size();
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() < 2) {
      throw ParseError(source, line_number, "row has no embedding values");
    }
    Vector v(static_cast<Eigen::Index>(fields.size() - 1));
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const std::string& field = fields[f];
      double value = 0.0;
      auto res = std::from_chars(field.data(), field.data() + field.size(),
                                 value);
      if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw ParseError(source, line_number,
                         "bad number '" + field + "' in column " +
                             std::to_string(f + 1));
      }
      v[static_cast<Eigen::Index>(f - 1)] = value;
    }
    try {
      store.Add(fields[0], std::move(v));
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_number, e.what());
    }
  }
  return store;
}

}  // namespace

std::string ToString(EmbeddingKind kind) {
  return kind == EmbeddingKind::kAsv ? "asv" : "cm";
}

EmbeddingStore::EmbeddingStore(EmbeddingKind kind, Eigen::Index dim)
    : kind_(kind), dim_(dim) {
  if (dim < 0) throw std::invalid_argument("EmbeddingStore: negative dim");
}

void EmbeddingStore::Add(std::string utterance_id, Vector embedding) {
  if (index_.count(utterance_id) != 0) {
    throw std::invalid_argument("duplicate utterance id '" + utterance_id +
                                "'");
  }
  if (dim_ == 0 && ids_.empty()) dim_ = embedding.size();
  if (embedding.size() != dim_ || dim_ == 0) {
    throw std::invalid_argument(
        "embedding for '" + utterance_id + "' has length " +
        std::to_string(embedding.size()) + ", store dim is " +
        std::to_string(dim_));
  }
  if (!embedding.allFinite()) {
    throw std::invalid_argument("embedding for '" + utterance_id +
                                "' has non-finite values");
  }
  index_.emplace(utterance_id, ids_.size());
  ids_.push_back(std::move(utterance_id));
  vectors_.push_back(std::move(embedding));
}

const Vector* EmbeddingStore::Find(const std::string& utterance_id) const {
  auto it = index_.find(utterance_id);
  return it == index_.end() ? nullptr : &vectors_[it->second];
}

const Vector& EmbeddingStore::At(const std::string& utterance_id) const {
  const Vector* v = Find(utterance_id);
  if (v == nullptr) {
    throw std::out_of_range("utterance '" + utterance_id + "' not in " +
                            ToString(kind_) + " store");
  }
  return *v;
}

bool EmbeddingStore::Contains(const std::string& utterance_id) const {
  return index_.count(utterance_id) != 0;
}

Vector EmbeddingStore::Mean() const {
  if (empty()) throw std::invalid_argument("Mean of an empty store");
  Vector sum = Vector::Zero(dim_);
  for (const auto& v : vectors_) sum += v;
  return sum / static_cast<double>(vectors_.size());
}

bool EmbeddingStore::operator==(const EmbeddingStore& other) const {
  if (kind_ != other.kind_ || dim_ != other.dim_ || ids_ != other.ids_) {
    return false;
  }
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i] != other.vectors_[i]) return false;
  }
  return true;
}

EmbeddingStore DecodeEmbeddingStore(const std::string& bytes,
                                    EmbeddingKind kind,
                                    const std::string& source) {
  return HasMagic(bytes) ? DecodeBinary(bytes, kind, source)
                         : DecodeTsv(bytes, kind, source);
}

std::string EncodeEmbeddingStore(const EmbeddingStore& store,
                                 StoreFormat format) {
  return format == StoreFormat::kBinary ? EncodeBinary(store)
                                        : EncodeTsv(store);
}

EmbeddingStore LoadEmbeddingStore(const std::string& path,
                                  EmbeddingKind kind) {
  return DecodeEmbeddingStore(ReadTextFile(path), kind, path);
}

void WriteEmbeddingStore(const EmbeddingStore& store, const std::string& path,
                         StoreFormat format) {
  WriteTextFile(path, EncodeEmbeddingStore(store, format));
}

Vector EnrollmentEmbedding(const EmbeddingStore& store,
                           std::span<const std::string> utterance_ids) {
  if (utterance_ids.empty()) {
    throw std::invalid_argument("enrollment needs at least one utterance");
  }
  Vector sum = Vector::Zero(store.dim());
  for (const auto& id : utterance_ids) sum += store.At(id);
  return sum / static_cast<double>(utterance_ids.size());
}

}  // namespace sasv::data
