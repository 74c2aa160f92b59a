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

#ifndef SASV_DATA_EMBEDDING_STORE_H_
#define SASV_DATA_EMBEDDING_STORE_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace sasv::data {

using Vector = Eigen::VectorXd;

enum class EmbeddingKind { kAsv, kCm };
enum class StoreFormat { kBinary, kTsv };

std::string ToString(EmbeddingKind kind);

// Utterance id -> fixed-length embedding, kept in insertion order. Values are
// held in double precision; the binary format stores single precision and
// TSV keeps full precision.
class EmbeddingStore {
 public:
  // dim == 0 leaves the width to be fixed by the first Add().
  explicit EmbeddingStore(EmbeddingKind kind, Eigen::Index dim = 0);

  // Throws std::invalid_argument on a duplicate id, wrong length, or
  // non-finite entry.
  void Add(std::string utterance_id, Vector embedding);

  const Vector* Find(const std::string& utterance_id) const;
  // Throws std::out_of_range for an unknown id.
  const Vector& At(const std::string& utterance_id) const;
  bool Contains(const std::string& utterance_id) const;

  EmbeddingKind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Vector& vector(std::size_t i) const { return vectors_[i]; }

  // Element-wise mean over every entry; throws on an empty store.
  Vector Mean() const;

  bool operator==(const EmbeddingStore& other) const;

 private:
  EmbeddingKind kind_;
  Eigen::Index dim_;
  std::vector<std::string> ids_;
  std::vector<Vector> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Detects the format from the leading magic bytes.
EmbeddingStore LoadEmbeddingStore(const std::string& path, EmbeddingKind kind);
void WriteEmbeddingStore(const EmbeddingStore& store, const std::string& path,
                         StoreFormat format);

// In-memory forms of the same codecs.
EmbeddingStore DecodeEmbeddingStore(const std::string& bytes,
                                    EmbeddingKind kind,
                                    const std::string& source = "<memory>");
std::string EncodeEmbeddingStore(const EmbeddingStore& store,
                                 StoreFormat format);

// Arithmetic mean of the listed embeddings. Throws std::out_of_range naming
// a missing id, std::invalid_argument on an empty list.
Vector EnrollmentEmbedding(const EmbeddingStore& store,
                           std::span<const std::string> utterance_ids);

}  // namespace sasv::data

#endif  // SASV_DATA_EMBEDDING_STORE_H_
