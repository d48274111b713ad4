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

#include "crisisloc/text.hpp"

#include <cstdint>

#include "crisisloc/ingest.hpp"

namespace crisisloc {

std::string_view tag_layer_name(TagLayer layer) {
  switch (layer) {
    case TagLayer::Ark: return "ark_tags";
    case TagLayer::Ptb: return "ptb_tags";
    case TagLayer::Chunk: return "chunk_tags";
  }
  return "unknown";
}

namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;  // byte offset
  std::size_t end;
};

// Decodes UTF-8; an invalid byte decodes as U+FFFD covering that byte.
std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = 0xFFFD;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      len = 0;
    }
    bool valid = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; valid && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        valid = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!valid) {
      out.push_back({0xFFFD, i, i + 1});
      ++i;
      continue;
    }
    out.push_back({cp, i, i + len});
    i += len;
  }
  return out;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_space(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  return (c >= 0xA1 && c <= 0xBF && c != 0xAA && c != 0xB5 && c != 0xBA) || c == 0xD7 ||
         c == 0xF7 || (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011);
}

bool is_word(char32_t c) { return !is_space(c) && !is_punct(c); }

bool is_handle_char(char32_t c) { return c == '_' || is_word(c); }

// Trailing characters a URL may shed: sentence punctuation and closers.
bool is_url_tail(char32_t c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':': case '"': case '\'':
    case ')': case ']': case '}': case '>':
    case 0x2019: case 0x201D: case 0x2026:
      return true;
    default:
      return false;
  }
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0xC0) return c;
  if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;
  if (c >= 0x100 && c <= 0x17F) {
    // Latin Extended-A alternates upper/lower except in 0x138..0x148 and
    // 0x179..0x17E where the parity is shifted.
    if (c == 0x178) return 0xFF;
    if (c == 0x130 || c == 0x138 || c == 0x149 || c == 0x17F) return c;
    const bool shifted = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    const bool upper = shifted ? (c % 2 == 1) : (c % 2 == 0);
    return upper ? c + 1 : c;
  }
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (c != prefix[i]) return false;
  }
  return true;
}

std::string lower_range(std::string_view text, const std::vector<CodePoint>& cps,
                        std::size_t from, std::size_t to) {
  std::string out;
  out.reserve(cps[to - 1].end - cps[from].begin);
  for (std::size_t i = from; i < to; ++i) {
    if (cps[i].value == 0xFFFD) {
      out.append(text.substr(cps[i].begin, cps[i].end - cps[i].begin));
    } else {
      encode(to_lower(cps[i].value), out);
    }
  }
  return out;
}

// Tokenizes one whitespace-free chunk given as code points [from, to).
void tokenize_chunk(std::string_view text, const std::vector<CodePoint>& cps, std::size_t from,
                    std::size_t to, std::vector<std::string>& out) {
  auto rest = [&](std::size_t i) {
    return text.substr(cps[i].begin, cps[to - 1].end - cps[i].begin);
  };
  auto special_start = [&](std::size_t i) {
    const char32_t c = cps[i].value;
    if ((c == '@' || c == '#') && i + 1 < to && is_handle_char(cps[i + 1].value)) return true;
    return is_url(rest(i));
  };

  std::size_t lo = from;
  while (lo < to && is_punct(cps[lo].value) && !special_start(lo)) {
    out.push_back(lower_range(text, cps, lo, lo + 1));
    ++lo;
  }
  if (lo == to) return;

  const bool url = is_url(rest(lo));
  std::size_t hi = to;
  while (hi > lo + 1) {
    const char32_t c = cps[hi - 1].value;
    if (url ? !is_url_tail(c) : !is_punct(c)) break;
    // A mention or hashtag keeps at least its sigil plus one character.
    if (!url && (cps[lo].value == '@' || cps[lo].value == '#') && hi - 1 == lo + 1) break;
    --hi;
  }

  if (url) {
    out.emplace_back(text.substr(cps[lo].begin, cps[hi - 1].end - cps[lo].begin));
  } else {
    out.push_back(lower_range(text, cps, lo, hi));
  }
  for (std::size_t i = hi; i < to; ++i) out.push_back(lower_range(text, cps, i, i + 1));
}

}  // namespace

bool is_url(std::string_view token) {
  return starts_with_ci(token, "http://") || starts_with_ci(token, "https://") ||
         (starts_with_ci(token, "www.") && token.size() > 4);
}

std::string lowercase(std::string_view text) {
  const auto cps = decode(text);
  if (cps.empty()) return {};
  return lower_range(text, cps, 0, cps.size());
}

std::vector<std::string> tokenize(std::string_view text) {
  const auto cps = decode(text);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].value)) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j].value)) ++j;
    if (j > i) tokenize_chunk(text, cps, i, j, tokens);
    i = j;
  }
  return tokens;
}

const std::optional<std::vector<std::string>>& TaggedTweet::slot(TagLayer layer) const {
  switch (layer) {
    case TagLayer::Ark: return ark_;
    case TagLayer::Ptb: return ptb_;
    case TagLayer::Chunk: return chunk_;
  }
  return ark_;
}

const std::vector<std::string>& TaggedTweet::layer(TagLayer layer) const {
  const auto& s = slot(layer);
  if (!s) {
    throw Error("tweet '" + id_ + "' has no " + std::string(tag_layer_name(layer)) + " layer");
  }
  return *s;
}

TaggedToken TaggedTweet::at(std::size_t i) const {
  TaggedToken t{tokens_.at(i), std::nullopt, std::nullopt, std::nullopt};
  if (ark_) t.ark_tag = (*ark_)[i];
  if (ptb_) t.ptb_tag = (*ptb_)[i];
  if (chunk_) t.chunk_tag = (*chunk_)[i];
  return t;
}

TaggedTweet attach_tags(std::string id, std::vector<std::string> tokens,
                        std::optional<std::vector<std::string>> ark,
                        std::optional<std::vector<std::string>> ptb,
                        std::optional<std::vector<std::string>> chunks) {
  auto check = [&](const std::optional<std::vector<std::string>>& layer, TagLayer which) {
    if (layer && layer->size() != tokens.size()) {
      throw AlignmentError("tweet '" + id + "': " + std::string(tag_layer_name(which)) +
                           " has " + std::to_string(layer->size()) + " tags for " +
                           std::to_string(tokens.size()) + " tokens");
    }
  };
  check(ark, TagLayer::Ark);
  check(ptb, TagLayer::Ptb);
  check(chunks, TagLayer::Chunk);

  TaggedTweet t;
  t.id_ = std::move(id);
  t.tokens_ = std::move(tokens);
  t.ark_ = std::move(ark);
  t.ptb_ = std::move(ptb);
  t.chunk_ = std::move(chunks);
  return t;
}

TaggedTweet prepare_tweet(const RawTweet& tweet, bool fill_ark) {
  auto tokens = tokenize(tweet.text);
  auto ark = tweet.ark_tags;
  if (!ark && fill_ark) ark = fallback_ark_tag(tokens);
  return attach_tags(tweet.id, std::move(tokens), std::move(ark), tweet.ptb_tags,
                     tweet.chunk_tags);
}

}  // namespace crisisloc
