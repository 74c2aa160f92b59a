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

#ifndef SASV_MODELS_PIPELINE_H_
#define SASV_MODELS_PIPELINE_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sasv/data/embedding_store.h"
#include "sasv/data/protocol.h"
#include "sasv/nn/mlp.h"
#include "sasv/sampling/pairs.h"

namespace sasv::models {

// a.b / (|a||b|), clamped to [-1, 1]. Throws std::invalid_argument on a
// length mismatch or a zero vector.
double CosineScore(const nn::Vector& a, const nn::Vector& b);

// Embeddings needed to score one enrollment/test pair.
struct TrialEmbeddings {
  nn::Vector enroll_asv;
  nn::Vector enroll_cm;
  nn::Vector test_asv;
  nn::Vector test_cm;
};

// Thrown when trials or training records reference utterances absent from
// an embedding store. `missing()` lists "<kind>:<utterance id>" entries.
class MissingEmbeddingsError : public std::runtime_error {
 public:
  explicit MissingEmbeddingsError(std::vector<std::string> missing);
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

// Looks up the embeddings of a trial. Enrollment embeddings are averaged
// over the enrollment utterances. An enrollment utterance without a CM
// embedding contributes the CM store-wide mean instead.
class EmbeddingResolver {
 public:
  EmbeddingResolver(const data::EmbeddingStore& asv,
                    const data::EmbeddingStore& cm);

  // Throws MissingEmbeddingsError listing every unresolved id.
  void CheckCoverage(std::span<const data::TrialRecord> trials) const;

  TrialEmbeddings Resolve(std::span<const std::string> enroll_ids,
                          const std::string& test_id) const;
  TrialEmbeddings Resolve(const data::TrialRecord& trial) const;

  const data::EmbeddingStore& asv() const { return *asv_; }
  const data::EmbeddingStore& cm() const { return *cm_; }

 private:
  const data::EmbeddingStore* asv_;
  const data::EmbeddingStore* cm_;
  nn::Vector cm_fallback_;
};

class TrialScorer {
 public:
  virtual ~TrialScorer() = default;
  // Higher means more target-like.
  virtual double Score(const TrialEmbeddings& trial) const = 0;
};

std::vector<double> ScoreTrials(const TrialScorer& scorer,
                                const EmbeddingResolver& resolver,
                                std::span<const data::TrialRecord> trials);

// Cosine of enrollment and test ASV embeddings.
class AsvCosineScorer : public TrialScorer {
 public:
  double Score(const TrialEmbeddings& trial) const override;
};

// A labelled training partition together with its embeddings.
class TrainingData {
 public:
  // Throws MissingEmbeddingsError if a record lacks an ASV or CM embedding.
  TrainingData(std::vector<data::UtteranceRecord> records,
               const data::EmbeddingStore& asv,
               const data::EmbeddingStore& cm);

  const std::vector<data::UtteranceRecord>& records() const {
    return records_;
  }
  const sampling::RecordIndex& index() const { return index_; }
  const data::EmbeddingStore& asv() const { return *asv_; }
  const data::EmbeddingStore& cm() const { return *cm_; }

  // (asv_dim + cm_dim) x n matrix of [asv; cm] columns.
  nn::Matrix Stacked(std::span<const std::string> utterance_ids) const;

 private:
  std::vector<data::UtteranceRecord> records_;
  sampling::RecordIndex index_;
  const data::EmbeddingStore* asv_;
  const data::EmbeddingStore* cm_;
};

// Per-epoch training record.
struct EpochLog {
  int epoch = 0;
  double loss = 0.0;       // mean total loss
  double aux_loss = 0.0;   // MSFM: mean SSSV loss
  double head_loss = 0.0;  // MSFM: mean score-fusion loss
};

}  // namespace sasv::models

#endif  // SASV_MODELS_PIPELINE_H_
