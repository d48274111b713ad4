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

#include "crisisloc/features.hpp"

#include <bit>
#include <functional>

namespace crisisloc {

std::string_view feature_class_name(FeatureClass c) {
  switch (c) {
    case FeatureClass::Unigram: return "UNIGRAM";
    case FeatureClass::Bigram: return "BIGRAM";
    case FeatureClass::ArkPos: return "ARK_POS";
    case FeatureClass::PtbPos: return "PTB_POS";
    case FeatureClass::ShallowParse: return "SHALLOW_PARSE";
    case FeatureClass::CrisisSensitive: return "CRISIS_SENSITIVE";
  }
  return "UNKNOWN";
}

FeatureClass parse_feature_class(std::string_view name) {
  for (auto c : kAllFeatureClasses) {
    if (feature_class_name(c) == name) return c;
  }
  throw ParseError("unknown feature class '" + std::string(name) + "'");
}

std::vector<TagLayer> required_layers(FeatureClass c) {
  switch (c) {
    case FeatureClass::Unigram:
    case FeatureClass::Bigram: return {};
    case FeatureClass::ArkPos: return {TagLayer::Ark};
    case FeatureClass::PtbPos: return {TagLayer::Ptb};
    case FeatureClass::ShallowParse: return {TagLayer::Chunk};
    case FeatureClass::CrisisSensitive: return {TagLayer::Ark};
  }
  return {};
}

std::size_t FeatureClassSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<FeatureClass> FeatureClassSet::members() const {
  std::vector<FeatureClass> out;
  for (auto c : kAllFeatureClasses) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::string FeatureClassSet::name() const {
  std::string out;
  for (auto c : members()) {
    if (!out.empty()) out += '+';
    out += feature_class_name(c);
  }
  return out;
}

FeatureClassSet FeatureClassSet::parse(std::string_view text) {
  FeatureClassSet set;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find_first_of("+,", pos);
    const auto part = text.substr(pos, next == std::string_view::npos ? text.npos : next - pos);
    if (part.empty()) throw ParseError("empty feature class in '" + std::string(text) + "'");
    set.insert(parse_feature_class(part));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return set;
}

std::string FeatureId::qualified() const {
  std::string out(feature_class_name(cls));
  out += ':';
  out += key;
  return out;
}

FeatureId FeatureId::parse_qualified(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("feature id '" + std::string(text) + "' lacks a class prefix");
  }
  return FeatureId{parse_feature_class(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

std::size_t FeatureIdHash::operator()(const FeatureId& id) const noexcept {
  return std::hash<std::string>{}(id.key) * 31u + static_cast<std::size_t>(id.cls);
}

void FeatureVector::add(FeatureId id, std::uint32_t n) {
  if (n == 0) return;
  counts_[std::move(id)] += n;
}

void FeatureVector::merge(const FeatureVector& other) {
  for (const auto& [id, n] : other.counts_) counts_[id] += n;
}

std::uint32_t FeatureVector::count(const FeatureId& id) const {
  auto it = counts_.find(id);
  return it == counts_.end() ? 0 : it->second;
}

std::uint32_t FeatureVector::count(FeatureClass cls, std::string_view key) const {
  return count(FeatureId{cls, std::string(key)});
}

std::uint64_t FeatureVector::total() const {
  std::uint64_t sum = 0;
  for (const auto& [id, n] : counts_) sum += n;
  return sum;
}

FeatureVector FeatureVector::restrict_to(FeatureClass cls) const {
  return restrict_to(FeatureClassSet{cls});
}

FeatureVector FeatureVector::restrict_to(FeatureClassSet classes) const {
  FeatureVector out;
  for (const auto& [id, n] : counts_) {
    if (classes.contains(id.cls)) out.counts_.emplace_hint(out.counts_.end(), id, n);
  }
  return out;
}

LayerAbsentError::LayerAbsentError(std::string tweet_id, FeatureClass cls, TagLayer layer)
    : Error("tweet '" + tweet_id + "': " + std::string(feature_class_name(cls)) + " needs " +
            std::string(tag_layer_name(layer))),
      cls_(cls),
      layer_(layer) {}

namespace {

const std::vector<std::string>& need(const TaggedTweet& tweet, FeatureClass cls, TagLayer layer) {
  if (!tweet.has_layer(layer)) throw LayerAbsentError(tweet.id(), cls, layer);
  return tweet.layer(layer);
}

std::string join(const std::vector<std::string>& items, std::size_t begin, std::size_t n) {
  std::string out = items[begin];
  for (std::size_t k = 1; k < n; ++k) {
    out += ' ';
    out += items[begin + k];
  }
  return out;
}

void add_ngrams(const std::vector<std::string>& items, std::size_t n, FeatureClass cls,
                std::string_view prefix, FeatureVector& out) {
  if (items.size() < n) return;
  for (std::size_t i = 0; i + n <= items.size(); ++i) {
    std::string key(prefix);
    key += join(items, i, n);
    out.add(cls, std::move(key));
  }
}

std::vector<std::string> split_tags(std::string_view pattern) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    auto next = pattern.find(' ', pos);
    if (next == std::string_view::npos) next = pattern.size();
    parts.emplace_back(pattern.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

bool is_noun_tag(std::string_view tag) { return tag == "N" || tag == "^"; }

bool is_ptb_verb(std::string_view tag) { return tag.starts_with("VB") || tag == "MD"; }

// Index of the chunk covering each token, or -1.
std::vector<int> chunk_index(const std::vector<Chunk>& chunks, std::size_t n) {
  std::vector<int> idx(n, -1);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    for (std::size_t i = chunks[c].begin; i < chunks[c].end; ++i) idx[i] = static_cast<int>(c);
  }
  return idx;
}

// Tokens [in_pos, noun_pos] sit inside one PP chunk, or a PP chunk ending at
// in_pos followed by a single NP chunk covering the rest.
bool within_pp_span(const std::vector<Chunk>& chunks, const std::vector<int>& idx,
                    std::size_t in_pos, std::size_t noun_pos) {
  const int pp = idx[in_pos];
  if (pp < 0 || chunks[pp].label != "PP") return false;
  if (idx[noun_pos] == pp) return true;
  if (chunks[pp].end != in_pos + 1) return false;
  const int np = idx[in_pos + 1];
  if (np < 0 || chunks[np].label != "NP" || chunks[np].begin != in_pos + 1) return false;
  return idx[noun_pos] == np;
}

}  // namespace

FeatureVector extract_word_ngrams(const TaggedTweet& tweet, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("word n-gram order must be 1 or 2");
  FeatureVector out;
  add_ngrams(tweet.tokens(), static_cast<std::size_t>(n),
             n == 1 ? FeatureClass::Unigram : FeatureClass::Bigram, "", out);
  return out;
}

FeatureVector extract_pos_ngrams(const TaggedTweet& tweet, Tagset tagset, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("POS n-gram order must be in 1..3");
  const auto cls = tagset == Tagset::Ark ? FeatureClass::ArkPos : FeatureClass::PtbPos;
  const auto& tags = need(tweet, cls, tagset == Tagset::Ark ? TagLayer::Ark : TagLayer::Ptb);
  FeatureVector out;
  add_ngrams(tags, static_cast<std::size_t>(n), cls, "", out);
  return out;
}

FeatureVector extract_pos_class(const TaggedTweet& tweet, Tagset tagset) {
  FeatureVector out;
  for (int n = 1; n <= 3; ++n) out.merge(extract_pos_ngrams(tweet, tagset, n));
  return out;
}

std::vector<Chunk> chunk_spans(const std::vector<std::string>& iob_tags) {
  std::vector<Chunk> chunks;
  bool open = false;
  for (std::size_t i = 0; i < iob_tags.size(); ++i) {
    const std::string_view tag = iob_tags[i];
    const bool begin = tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'b') && tag[1] == '-';
    const bool inside = tag.size() > 2 && (tag[0] == 'I' || tag[0] == 'i') && tag[1] == '-';
    if (!begin && !inside) {
      open = false;
      continue;
    }
    const std::string label(tag.substr(2));
    if (inside && open && chunks.back().label == label) {
      chunks.back().end = i + 1;
      continue;
    }
    chunks.push_back(Chunk{label, i, i + 1});
    open = true;
  }
  return chunks;
}

FeatureVector extract_shallow_parse(const TaggedTweet& tweet) {
  const auto& tags = need(tweet, FeatureClass::ShallowParse, TagLayer::Chunk);
  const auto chunks = chunk_spans(tags);
  std::vector<std::string> labels;
  labels.reserve(chunks.size());
  FeatureVector out;
  for (const auto& c : chunks) {
    labels.push_back(c.label);
    out.add(FeatureClass::ShallowParse, c.label + ":" + tweet.tokens()[c.end - 1]);
  }
  for (std::size_t n = 1; n <= 3; ++n) add_ngrams(labels, n, FeatureClass::ShallowParse, "", out);
  return out;
}

FeatureVector extract_crisis_sensitive(const TaggedTweet& tweet) {
  constexpr auto kCls = FeatureClass::CrisisSensitive;
  const auto& tags = need(tweet, kCls, TagLayer::Ark);
  const auto& words = tweet.tokens();
  const std::size_t n = words.size();
  FeatureVector out;

  // Tag patterns, both as tag sequences and as word/tag sequences.
  for (std::string_view pattern : kCrisisArkPatterns) {
    const auto parts = split_tags(pattern);
    const std::size_t len = parts.size();
    for (std::size_t i = 0; i + len <= n; ++i) {
      bool match = true;
      for (std::size_t k = 0; k < len && match; ++k) match = tags[i + k] == parts[k];
      if (!match) continue;
      std::string wt = "WT:";
      for (std::size_t k = 0; k < len; ++k) {
        if (k) wt += ' ';
        wt += words[i + k];
        wt += '/';
        wt += tags[i + k];
      }
      out.add(kCls, "PAT:" + std::string(pattern));
      out.add(kCls, std::move(wt));
    }
  }

  // [in ... /N]_PP
  std::vector<Chunk> chunks;
  std::vector<int> idx;
  if (tweet.has_layer(TagLayer::Chunk)) {
    chunks = chunk_spans(tweet.layer(TagLayer::Chunk));
    idx = chunk_index(chunks, n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (words[i] != "in" || tags[i] != "P") continue;
    std::size_t j = i + 1;
    while (j < n && (tags[j] == "D" || tags[j] == "A")) ++j;
    if (j >= n || !is_noun_tag(tags[j])) continue;
    if (tweet.has_layer(TagLayer::Chunk) && !within_pp_span(chunks, idx, i, j)) continue;
    out.add(kCls, "PP:in:" + words[j]);
  }

  // Existential "there" with its succeeding verb.
  if (tweet.has_layer(TagLayer::Ptb)) {
    const auto& ptb = tweet.layer(TagLayer::Ptb);
    for (std::size_t i = 0; i < n; ++i) {
      if (ptb[i] != "EX") continue;
      for (std::size_t m = i + 1; m < n && m <= i + 2; ++m) {
        if (is_ptb_verb(ptb[m])) {
          out.add(kCls, "EX:" + words[m]);
          break;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (words[i] != "there") continue;
      if (i > 0 && tags[i - 1] == "P") continue;
      for (std::size_t m = i + 1; m < n && m <= i + 2; ++m) {
        if (tags[m] == "V") {
          out.add(kCls, "EX:" + words[m]);
          break;
        }
      }
    }
  }
  return out;
}

bool class_available(const TaggedTweet& tweet, FeatureClass cls) {
  for (auto layer : required_layers(cls)) {
    if (!tweet.has_layer(layer)) return false;
  }
  return true;
}

FeatureVector extract_class(const TaggedTweet& tweet, FeatureClass cls) {
  switch (cls) {
    case FeatureClass::Unigram: return extract_word_ngrams(tweet, 1);
    case FeatureClass::Bigram: return extract_word_ngrams(tweet, 2);
    case FeatureClass::ArkPos: return extract_pos_class(tweet, Tagset::Ark);
    case FeatureClass::PtbPos: return extract_pos_class(tweet, Tagset::Ptb);
    case FeatureClass::ShallowParse: return extract_shallow_parse(tweet);
    case FeatureClass::CrisisSensitive: return extract_crisis_sensitive(tweet);
  }
  return {};
}

VectorizeResult vectorize(const TaggedTweet& tweet, FeatureClassSet classes,
                          MissingLayerPolicy policy) {
  if (classes.empty()) throw std::invalid_argument("vectorize needs at least one feature class");
  VectorizeResult result;
  for (auto cls : classes.members()) {
    if (!class_available(tweet, cls)) {
      if (policy == MissingLayerPolicy::Fail) {
        for (auto layer : required_layers(cls)) {
          if (!tweet.has_layer(layer)) throw LayerAbsentError(tweet.id(), cls, layer);
        }
      }
      result.skipped.push_back(cls);
      continue;
    }
    result.vector.merge(extract_class(tweet, cls));
  }
  return result;
}

}  // namespace crisisloc
