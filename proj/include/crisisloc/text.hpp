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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crisisloc/common.hpp"

namespace crisisloc {

struct RawTweet;

// Raised when a tag layer's length differs from the token count.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

enum class TagLayer : std::uint8_t { Ark, Ptb, Chunk };

std::string_view tag_layer_name(TagLayer layer);

// Twitter-aware tokenizer.
//
// Splits on Unicode whitespace, then peels leading and trailing punctuation
// off each chunk as single-character tokens. A chunk that begins with a
// mention (@name), hashtag (#tag) or URL keeps its prefix; URLs only shed
// sentence punctuation from their tail. Internal punctuation, including
// apostrophes in contractions, stays inside the token. Everything except URLs
// is lowercased; URLs are kept verbatim.
std::vector<std::string> tokenize(std::string_view text);

// Lowercasing applied by tokenize (ASCII, Latin-1, Latin Extended-A, Greek
// and Cyrillic capitals).
std::string lowercase(std::string_view text);

bool is_url(std::string_view token);

struct TaggedToken {
  std::string_view surface;
  std::optional<std::string_view> ark_tag;
  std::optional<std::string_view> ptb_tag;
  std::optional<std::string_view> chunk_tag;
};

// Token sequence with optional tag layers. A layer is present for every token
// or for none of them.
class TaggedTweet {
 public:
  TaggedTweet() = default;

  const std::string& id() const { return id_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool has_layer(TagLayer layer) const { return slot(layer).has_value(); }
  // Throws Error when the layer is absent.
  const std::vector<std::string>& layer(TagLayer layer) const;

  TaggedToken at(std::size_t i) const;

 private:
  friend TaggedTweet attach_tags(std::string id, std::vector<std::string> tokens,
                                 std::optional<std::vector<std::string>> ark,
                                 std::optional<std::vector<std::string>> ptb,
                                 std::optional<std::vector<std::string>> chunks);

  const std::optional<std::vector<std::string>>& slot(TagLayer layer) const;

  std::string id_;
  std::vector<std::string> tokens_;
  std::optional<std::vector<std::string>> ark_;
  std::optional<std::vector<std::string>> ptb_;
  std::optional<std::vector<std::string>> chunk_;
};

// Throws AlignmentError naming the tweet id and layer on a length mismatch.
TaggedTweet attach_tags(std::string id, std::vector<std::string> tokens,
                        std::optional<std::vector<std::string>> ark = std::nullopt,
                        std::optional<std::vector<std::string>> ptb = std::nullopt,
                        std::optional<std::vector<std::string>> chunks = std::nullopt);

// Rule-based ARK-style tagger for corpora that arrive without tags.
std::vector<std::string> fallback_ark_tag(std::span<const std::string> tokens);

// Tokenizes the tweet text and attaches whatever layers it carries. With
// fill_ark set, a missing ARK layer is produced by fallback_ark_tag.
TaggedTweet prepare_tweet(const RawTweet& tweet, bool fill_ark = false);

}  // namespace crisisloc
