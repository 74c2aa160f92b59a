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

#include "sasv/models/pipeline.h"

#include <algorithm>

namespace sasv::models {

double CosineScore(const nn::Vector& a, const nn::Vector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("CosineScore: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("CosineScore: zero vector");
  }
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

namespace {

std::string JoinMissing(const std::vector<std::string>& missing) {
  std::string msg = std::to_string(missing.size()) +
                    " utterance(s) missing from embedding stores:";
  const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) msg += " " + missing[i];
  if (shown < missing.size()) msg += " ...";
  return msg;
}

}  // namespace

MissingEmbeddingsError::MissingEmbeddingsError(
    std::vector<std::string> missing)
    : std::runtime_error(JoinMissing(missing)), missing_(std::move(missing)) {}

EmbeddingResolver::EmbeddingResolver(const data::EmbeddingStore& asv,
                                     const data::EmbeddingStore& cm)
    : asv_(&asv), cm_(&cm) {
  if (!cm.empty()) cm_fallback_ = cm.Mean();
}

void EmbeddingResolver::CheckCoverage(
    std::span<const data::TrialRecord> trials) const {
  std::vector<std::string> missing;
  auto need = [&](const data::EmbeddingStore& store, const std::string& id) {
    if (store.Contains(id)) return;
    std::string entry = data::ToString(store.kind()) + ":" + id;
    if (std::find(missing.begin(), missing.end(), entry) == missing.end()) {
      missing.push_back(std::move(entry));
    }
  };
  for (const auto& t : trials) {
    for (const auto& id : t.enroll_utterance_ids) need(*asv_, id);
    need(*asv_, t.test_utterance_id);
    need(*cm_, t.test_utterance_id);
  }
  if (!missing.empty()) throw MissingEmbeddingsError(std::move(missing));
}

TrialEmbeddings EmbeddingResolver::Resolve(
    std::span<const std::string> enroll_ids, const std::string& test_id) const {
  TrialEmbeddings out;
  out.enroll_asv = data::EnrollmentEmbedding(*asv_, enroll_ids);
  out.enroll_cm = nn::Vector::Zero(cm_->dim());
  for (const auto& id : enroll_ids) {
    const nn::Vector* y = cm_->Find(id);
    if (y == nullptr && cm_fallback_.size() == 0) {
      throw std::out_of_range("utterance '" + id + "' not in cm store");
    }
    out.enroll_cm += y != nullptr ? *y : cm_fallback_;
  }
  out.enroll_cm /= static_cast<double>(enroll_ids.size());
  out.test_asv = asv_->At(test_id);
  out.test_cm = cm_->At(test_id);
  return out;
}

TrialEmbeddings EmbeddingResolver::Resolve(
    const data::TrialRecord& trial) const {
  return Resolve(trial.enroll_utterance_ids, trial.test_utterance_id);
}

std::vector<double> ScoreTrials(const TrialScorer& scorer,
                                const EmbeddingResolver& resolver,
                                std::span<const data::TrialRecord> trials) {
  resolver.CheckCoverage(trials);
  std::vector<double> scores;
  scores.reserve(trials.size());
  for (const auto& trial : trials) {
    scores.push_back(scorer.Score(resolver.Resolve(trial)));
  }
  return scores;
}

double AsvCosineScorer::Score(const TrialEmbeddings& trial) const {
  return CosineScore(trial.enroll_asv, trial.test_asv);
}

TrainingData::TrainingData(std::vector<data::UtteranceRecord> records,
                           const data::EmbeddingStore& asv,
                           const data::EmbeddingStore& cm)
    : records_(std::move(records)), index_(records_), asv_(&asv), cm_(&cm) {
  std::vector<std::string> missing;
  for (const auto& r : records_) {
    if (!asv.Contains(r.utterance_id)) missing.push_back("asv:" + r.utterance_id);
    if (!cm.Contains(r.utterance_id)) missing.push_back("cm:" + r.utterance_id);
  }
  if (!missing.empty()) throw MissingEmbeddingsError(std::move(missing));
}

nn::Matrix TrainingData::Stacked(
    std::span<const std::string> utterance_ids) const {
  const auto da = asv_->dim();
  const auto dc = cm_->dim();
  nn::Matrix out(da + dc, static_cast<nn::Index>(utterance_ids.size()));
  for (std::size_t j = 0; j < utterance_ids.size(); ++j) {
    const auto col = static_cast<nn::Index>(j);
    out.col(col).head(da) = asv_->At(utterance_ids[j]);
    out.col(col).tail(dc) = cm_->At(utterance_ids[j]);
  }
  return out;
}

}  // namespace sasv::models
