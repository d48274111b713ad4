// Copyright 2026 The crisisloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crisisloc/text.hpp"

namespace crisisloc {

enum class FeatureClass : std::uint8_t {
  Unigram,
  Bigram,
  ArkPos,
  PtbPos,
  ShallowParse,
  CrisisSensitive,
};

inline constexpr std::size_t kFeatureClassCount = 6;

inline constexpr std::array<FeatureClass, kFeatureClassCount> kAllFeatureClasses = {
    FeatureClass::Unigram, FeatureClass::Bigram,       FeatureClass::ArkPos,
    FeatureClass::PtbPos,  FeatureClass::ShallowParse, FeatureClass::CrisisSensitive};

// "UNIGRAM", "BIGRAM", "ARK_POS", "PTB_POS", "SHALLOW_PARSE", "CRISIS_SENSITIVE".
std::string_view feature_class_name(FeatureClass c);
FeatureClass parse_feature_class(std::string_view name);

// Tag layers a class needs; word classes need none.
std::vector<TagLayer> required_layers(FeatureClass c);

// Non-empty subset of the six feature classes, stored as a bitmask.
class FeatureClassSet {
 public:
  constexpr FeatureClassSet() = default;
  constexpr explicit FeatureClassSet(std::uint8_t mask) : mask_(mask & 0x3F) {}
  FeatureClassSet(std::initializer_list<FeatureClass> classes) {
    for (auto c : classes) insert(c);
  }

  static constexpr FeatureClassSet all() { return FeatureClassSet(0x3F); }

  constexpr bool contains(FeatureClass c) const { return (mask_ >> static_cast<int>(c)) & 1u; }
  constexpr void insert(FeatureClass c) {
    mask_ = static_cast<std::uint8_t>(mask_ | (1u << static_cast<int>(c)));
  }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint8_t mask() const { return mask_; }
  std::size_t size() const;
  std::vector<FeatureClass> members() const;
  constexpr bool subset_of(FeatureClassSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }

  // "UNIGRAM+BIGRAM"
  std::string name() const;
  static FeatureClassSet parse(std::string_view text);

  friend constexpr bool operator==(FeatureClassSet, FeatureClassSet) = default;

 private:
  std::uint8_t mask_ = 0;
};

// Class-qualified feature key. Keys from different classes never compare
// equal even when the key strings coincide.
struct FeatureId {
  FeatureClass cls = FeatureClass::Unigram;
  std::string key;

  friend auto operator<=>(const FeatureId&, const FeatureId&) = default;

  // "CLASS:key"
  std::string qualified() const;
  static FeatureId parse_qualified(std::string_view text);
};

struct FeatureIdHash {
  std::size_t operator()(const FeatureId& id) const noexcept;
};

// Sparse raw-count vector. Counts are always >= 1; absent means zero.
class FeatureVector {
 public:
  using Map = std::map<FeatureId, std::uint32_t>;

  void add(FeatureId id, std::uint32_t n = 1);
  void add(FeatureClass cls, std::string key, std::uint32_t n = 1) {
    add(FeatureId{cls, std::move(key)}, n);
  }
  void merge(const FeatureVector& other);

  std::uint32_t count(const FeatureId& id) const;
  std::uint32_t count(FeatureClass cls, std::string_view key) const;
  const Map& counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }
  std::uint64_t total() const;

  FeatureVector restrict_to(FeatureClass cls) const;
  FeatureVector restrict_to(FeatureClassSet classes) const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  Map counts_;
};

// Raised when an extractor needs a tag layer the tweet does not carry.
class LayerAbsentError : public Error {
 public:
  LayerAbsentError(std::string tweet_id, FeatureClass cls, TagLayer layer);
  FeatureClass feature_class() const { return cls_; }
  TagLayer layer() const { return layer_; }

 private:
  FeatureClass cls_;
  TagLayer layer_;
};

// The nine ARK tag patterns of the crisis-sensitive class.
inline constexpr std::array<std::string_view, 9> kCrisisArkPatterns = {
    "N", "A", "!", "N R", "L A", "N P", "P D N", "L A !", "A N P"};

enum class Tagset : std::uint8_t { Ark, Ptb };

// Contiguous word n-grams (n = 1 or 2), no padding.
FeatureVector extract_word_ngrams(const TaggedTweet& tweet, int n);

// Contiguous tag n-grams for one order n in 1..3.
FeatureVector extract_pos_ngrams(const TaggedTweet& tweet, Tagset tagset, int n);

// The full POS class: orders 1, 2 and 3.
FeatureVector extract_pos_class(const TaggedTweet& tweet, Tagset tagset);

// Chunk-label n-grams (1..3) over maximal chunks plus "<LABEL>:<headword>"
// per chunk, where the headword is the chunk's last token.
FeatureVector extract_shallow_parse(const TaggedTweet& tweet);

// A maximal IOB chunk: tokens [begin, end) sharing one label.
struct Chunk {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<Chunk> chunk_spans(const std::vector<std::string>& iob_tags);

FeatureVector extract_crisis_sensitive(const TaggedTweet& tweet);

enum class MissingLayerPolicy : std::uint8_t { SkipAndReport, Fail };

struct VectorizeResult {
  FeatureVector vector;
  // Classes dropped because their layers were missing.
  std::vector<FeatureClass> skipped;
};

// Union of the per-class extractors. With Fail, missing layers raise the
// first LayerAbsentError encountered.
VectorizeResult vectorize(const TaggedTweet& tweet, FeatureClassSet classes,
                          MissingLayerPolicy policy = MissingLayerPolicy::SkipAndReport);

// Extracts one class; throws LayerAbsentError when a layer is missing.
FeatureVector extract_class(const TaggedTweet& tweet, FeatureClass cls);

bool class_available(const TaggedTweet& tweet, FeatureClass cls);

}  // namespace crisisloc
