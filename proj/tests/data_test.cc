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

#include <cmath>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "sasv/common/error.h"
#include "sasv/data/embedding_store.h"
#include "sasv/data/protocol.h"

namespace sasv::data {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("sasv_data_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string File(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

TEST(CmProtocolTest, BonafideLine) {
  auto records = ParseCmProtocol("LA_0079 LA_T_1138215 - - bonafide\n");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].speaker_id, "LA_0079");
  EXPECT_EQ(records[0].utterance_id, "LA_T_1138215");
  EXPECT_EQ(records[0].spoof_key, SpoofKey::kBonafide);
  EXPECT_FALSE(records[0].system_id.has_value());
}

TEST(CmProtocolTest, SpoofLine) {
  auto records = ParseCmProtocol("LA_0079 LA_T_0000001 - A01 spoof");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].spoof_key, SpoofKey::kSpoof);
  EXPECT_EQ(records[0].system_id, "A01");
}

TEST(CmProtocolTest, EmptyFileAndBlankLines) {
  EXPECT_TRUE(ParseCmProtocol("").empty());
  EXPECT_EQ(ParseCmProtocol("\n  \nA u1 - - bonafide\n\n").size(), 1u);
}

TEST(CmProtocolTest, AnyOtherKeyIsSpoof) {
  auto records = ParseCmProtocol("A u1 - A19 deepfake\n");
  EXPECT_EQ(records[0].spoof_key, SpoofKey::kSpoof);
}

TEST(CmProtocolTest, WrongColumnCountReportsLine) {
  try {
    ParseCmProtocol("A u1 - - bonafide\nA u2 - bonafide\n", "proto.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("proto.txt:2"), std::string::npos);
  }
}

TEST(CmProtocolTest, FormatRoundTrip) {
  const std::string text =
      "LA_0079 LA_T_1138215 - - bonafide\nLA_0079 LA_T_0000001 - A01 spoof\n";
  EXPECT_EQ(FormatCmProtocol(ParseCmProtocol(text)), text);
}

TEST(EnrollmentMapTest, ParseAndFormat) {
  const std::string text = "LA_0015 u1,u2\nLA_0016 u3\n";
  EnrollmentMap map = ParseEnrollmentMap(text);
  ASSERT_EQ(map.size(), 2u);
  EXPECT_EQ(map["LA_0015"], (std::vector<std::string>{"u1", "u2"}));
  EXPECT_EQ(FormatEnrollmentMap(map), text);
}

TEST(EnrollmentMapTest, Rejections) {
  EXPECT_THROW(ParseEnrollmentMap("A u1\nA u2\n"), ParseError);
  EXPECT_THROW(ParseEnrollmentMap("A u1,,u2\n"), ParseError);
  EXPECT_THROW(ParseEnrollmentMap("A\n"), ParseError);
}

TEST(TrialListTest, TargetAndSpoof) {
  const EnrollmentMap map = {{"LA_0015", {"e1", "e2"}}};
  auto trials = ParseTrialList(
      "LA_0015 LA_E_1103494 target\nLA_0015 LA_E_9999999 spoof\n", map);
  ASSERT_EQ(trials.size(), 2u);
  EXPECT_EQ(trials[0].label, TrialLabel::kTarget);
  EXPECT_EQ(trials[0].test_utterance_id, "LA_E_1103494");
  EXPECT_EQ(trials[0].enroll_utterance_ids,
            (std::vector<std::string>{"e1", "e2"}));
  EXPECT_EQ(trials[1].label, TrialLabel::kSpoof);
}

TEST(TrialListTest, NonTargetLabel) {
  auto keys = ParseTrialKeys("A u nontarget\n");
  EXPECT_EQ(keys[0].label, TrialLabel::kNonTarget);
}

TEST(TrialListTest, FourColumnVariantTakesLastLabel) {
  auto keys = ParseTrialKeys("LA_0015 LA_E_1 A07 spoof\n");
  ASSERT_EQ(keys.size(), 1u);
  EXPECT_EQ(keys[0].label, TrialLabel::kSpoof);
}

TEST(TrialListTest, BonafideLabelRejected) {
  try {
    ParseTrialKeys("A u target\nA v bonafide\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(TrialListTest, MissingSpeakerRejected) {
  const EnrollmentMap map = {{"A", {"e1"}}};
  EXPECT_THROW(ParseTrialList("B u target\n", map), std::runtime_error);
}

TEST(TrialListTest, FormatRoundTrip) {
  const std::string text = "A u1 target\nA u2 nontarget\nA u3 spoof\n";
  EXPECT_EQ(FormatTrialKeys(ParseTrialKeys(text)), text);
}

TEST(EmbeddingStoreTest, TsvExample) {
  auto store = DecodeEmbeddingStore("utt1\t0.1\t0.2\nutt2\t0.3\t0.4\n",
                                    EmbeddingKind::kAsv);
  EXPECT_EQ(store.dim(), 2);
  EXPECT_EQ(store.size(), 2u);
  EXPECT_DOUBLE_EQ(store.At("utt2")[1], 0.4);
}

TEST(EmbeddingStoreTest, MixedRowLengthsRejected) {
  EXPECT_THROW(DecodeEmbeddingStore("a\t0.1\t0.2\nb\t0.1\t0.2\t0.3\n",
                                    EmbeddingKind::kAsv),
               ParseError);
}

TEST(EmbeddingStoreTest, DuplicateIdRejected) {
  EXPECT_THROW(
      DecodeEmbeddingStore("a\t0.1\na\t0.2\n", EmbeddingKind::kCm),
      ParseError);
  EmbeddingStore store(EmbeddingKind::kAsv);
  store.Add("a", Vector::Ones(2));
  EXPECT_THROW(store.Add("a", Vector::Ones(2)), std::invalid_argument);
}

TEST(EmbeddingStoreTest, NonFiniteRejected) {
  EXPECT_THROW(DecodeEmbeddingStore("a\tnan\n", EmbeddingKind::kCm),
               ParseError);
  EmbeddingStore store(EmbeddingKind::kAsv);
  Vector v = Vector::Ones(2);
  v[1] = INFINITY;
  EXPECT_THROW(store.Add("a", v), std::invalid_argument);
}

TEST(EmbeddingStoreTest, TruncatedBinaryRejected) {
  EmbeddingStore store(EmbeddingKind::kAsv);
  store.Add("utt", Vector::Ones(4));
  const std::string bytes = EncodeEmbeddingStore(store, StoreFormat::kBinary);
  for (std::size_t cut : {4ul, 12ul, bytes.size() - 1}) {
    EXPECT_THROW(DecodeEmbeddingStore(bytes.substr(0, cut),
                                      EmbeddingKind::kAsv),
                 std::runtime_error)
        << cut;
  }
  EXPECT_THROW(DecodeEmbeddingStore(bytes + "x", EmbeddingKind::kAsv),
               std::runtime_error);
}

TEST(EmbeddingStoreTest, BinaryLayout) {
  EmbeddingStore store(EmbeddingKind::kAsv, 192);
  store.Add("ab", Vector::Constant(192, 0.25));
  const std::string bytes = EncodeEmbeddingStore(store, StoreFormat::kBinary);
  EXPECT_EQ(bytes.size(), 8u + 4 + 4 + 2 + 2 + 192 * 4);
  EXPECT_EQ(bytes.substr(0, 8), "SASVEMB1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 192);  // little-endian dim
  EXPECT_EQ(bytes[9], 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 1);  // count
}

TEST(EmbeddingStoreTest, EmptyStoreRoundTrips) {
  EmbeddingStore store(EmbeddingKind::kCm);
  for (auto format : {StoreFormat::kBinary, StoreFormat::kTsv}) {
    auto back = DecodeEmbeddingStore(EncodeEmbeddingStore(store, format),
                                     EmbeddingKind::kCm);
    EXPECT_TRUE(back.empty());
  }
}

EmbeddingStore RandomStore(std::mt19937_64& rng, EmbeddingKind kind) {
  std::uniform_int_distribution<int> dim(1, 40);
  std::uniform_int_distribution<int> count(0, 30);
  std::normal_distribution<double> value(0.0, 3.0);
  const int d = dim(rng);
  EmbeddingStore store(kind, d);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Vector v(d);
    for (int k = 0; k < d; ++k) v[k] = value(rng);
    store.Add("utt_" + std::to_string(i), v);
  }
  return store;
}

TEST(EmbeddingStoreTest, RoundTripProperty) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const EmbeddingStore store = RandomStore(rng, EmbeddingKind::kAsv);
    const auto binary = DecodeEmbeddingStore(
        EncodeEmbeddingStore(store, StoreFormat::kBinary), store.kind());
    const auto tsv = DecodeEmbeddingStore(
        EncodeEmbeddingStore(store, StoreFormat::kTsv), store.kind());
    ASSERT_EQ(binary.ids(), store.ids());
    ASSERT_EQ(tsv.ids(), store.ids());
    for (std::size_t i = 0; i < store.size(); ++i) {
      const Vector as_float = store.vector(i).cast<float>().cast<double>();
      EXPECT_EQ(binary.vector(i), as_float);
      EXPECT_EQ(tsv.vector(i), store.vector(i));
    }
  }
}

TEST(EmbeddingStoreTest, FileRoundTripAndFormatDetection) {
  TempDir dir;
  std::mt19937_64 rng(22);
  EmbeddingStore store = RandomStore(rng, EmbeddingKind::kCm);
  store.Add("extra", Vector::Ones(store.dim() == 0 ? 3 : store.dim()));
  WriteEmbeddingStore(store, dir.File("s.emb"), StoreFormat::kBinary);
  WriteEmbeddingStore(store, dir.File("s.tsv"), StoreFormat::kTsv);
  const auto binary = LoadEmbeddingStore(dir.File("s.emb"), EmbeddingKind::kCm);
  const auto tsv = LoadEmbeddingStore(dir.File("s.tsv"), EmbeddingKind::kCm);
  EXPECT_EQ(binary.size(), store.size());
  EXPECT_EQ(tsv.size(), store.size());
  EXPECT_THROW(LoadEmbeddingStore(dir.File("absent"), EmbeddingKind::kCm),
               std::runtime_error);
}

TEST(EmbeddingStoreTest, LookupIsPure) {
  EmbeddingStore store(EmbeddingKind::kAsv);
  store.Add("a", Vector::LinSpaced(5, 0, 1));
  const Vector first = store.At("a");
  EXPECT_EQ(store.At("a"), first);
  EXPECT_EQ(*store.Find("a"), first);
  EXPECT_EQ(store.Find("b"), nullptr);
  EXPECT_THROW(store.At("b"), std::out_of_range);
}

TEST(EnrollmentEmbeddingTest, Examples) {
  EmbeddingStore store(EmbeddingKind::kAsv);
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  store.Add("a", a);
  store.Add("b", b);
  store.Add("a2", a);
  const std::vector<std::string> single = {"a"};
  const std::vector<std::string> same = {"a", "a2"};
  const std::vector<std::string> both = {"a", "b"};
  const std::vector<std::string> missing = {"a", "zzz"};
  EXPECT_EQ(EnrollmentEmbedding(store, single), a);
  EXPECT_EQ(EnrollmentEmbedding(store, same), a);
  EXPECT_EQ(EnrollmentEmbedding(store, both), Vector::Constant(2, 0.5));
  EXPECT_THROW(EnrollmentEmbedding(store, missing), std::out_of_range);
}

}  // namespace
}  // namespace sasv::data
