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

#include "synth.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "crisisloc/cli.hpp"

namespace crisisloc::testing {

std::vector<TaggedTweet> SyntheticCorpus::with_label(Label label) const {
  std::vector<TaggedTweet> out;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (labels[i] == label) out.push_back(tweets[i]);
  }
  return out;
}

SyntheticCorpus marker_corpus(std::size_t n, std::uint64_t seed, const MarkerSpec& spec) {
  Rng rng(seed);
  SyntheticCorpus c;
  for (std::size_t i = 0; i < n; ++i) {
    const Label label = i % 2 == 0 ? Label::IR : Label::OR;
    const std::size_t len = 6 + uniform_below(rng, 7);
    std::vector<std::string> tokens;
    for (std::size_t k = 0; k < len; ++k) {
      tokens.push_back("w" + std::to_string(uniform_below(rng, static_cast<std::uint64_t>(spec.vocab))));
    }
    const bool ir = label == Label::IR;
    if (uniform_unit(rng) < (ir ? spec.ir_rate : spec.or_rate)) {
      const auto at = uniform_below(rng, tokens.size() + 1);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), ir ? spec.ir_marker : spec.or_marker);
    }
    c.tweets.push_back(attach_tags("s" + std::to_string(i), std::move(tokens)));
    c.labels.push_back(label);
  }
  return c;
}

namespace {

std::vector<std::string> pick(Rng& rng, std::span<const std::string_view> inventory, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(inventory[uniform_below(rng, inventory.size())]);
  return out;
}

std::vector<std::string> random_chunks(Rng& rng, std::size_t n) {
  static constexpr std::string_view kLabels[] = {"NP", "VP", "PP", "ADJP"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = uniform_below(rng, 4);
    const std::string label(kLabels[uniform_below(rng, 4)]);
    if (r == 0) {
      out.push_back("O");
    } else if (r == 1 && i > 0) {
      out.push_back("I-" + label);
    } else {
      out.push_back("B-" + label);
    }
  }
  return out;
}

}  // namespace

TaggedTweet with_random_layers(const TaggedTweet& tweet, Rng& rng) {
  const std::size_t n = tweet.size();
  return attach_tags(tweet.id(), tweet.tokens(), pick(rng, kArkInventory, n), pick(rng, kPtbInventory, n),
                     random_chunks(rng, n));
}

TaggedTweet random_tweet(Rng& rng, std::size_t len, bool ark, bool ptb, bool chunks) {
  static constexpr std::string_view kWords[] = {"in", "boston", "the", "there", "is", "a",
                                                "bomb", "i'm", "safe", "lol", "city", "x"};
  std::vector<std::string> tokens = pick(rng, kWords, len);
  std::optional<std::vector<std::string>> a, p, c;
  if (ark) a = pick(rng, kArkInventory, len);
  if (ptb) p = pick(rng, kPtbInventory, len);
  if (chunks) c = random_chunks(rng, len);
  return attach_tags("r", std::move(tokens), std::move(a), std::move(p), std::move(c));
}

FeatureVector random_vector(Rng& rng, int dims, int max_count, int max_features) {
  FeatureVector v;
  const auto k = uniform_below(rng, static_cast<std::uint64_t>(max_features) + 1);
  for (std::uint64_t i = 0; i < k; ++i) {
    const auto f = uniform_below(rng, static_cast<std::uint64_t>(dims));
    const auto n = 1 + uniform_below(rng, static_cast<std::uint64_t>(max_count));
    v.add(FeatureClass::Unigram, "f" + std::to_string(f), static_cast<std::uint32_t>(n));
  }
  return v;
}

std::vector<RawTweet> block_tweets(const BlockSpec& spec, Rng& rng, std::string_view id_prefix) {
  std::vector<RawTweet> out;
  for (int i = 0; i < spec.tweets; ++i) {
    std::string text;
    for (int k = 0; k < spec.tokens_per_tweet; ++k) {
      if (k) text += ' ';
      if (uniform_unit(rng) < spec.crisis_share) {
        text += spec.crisis_prefix + std::to_string(uniform_below(rng, static_cast<std::uint64_t>(spec.crisis_vocab)));
      } else {
        text += "word" + std::to_string(uniform_below(rng, static_cast<std::uint64_t>(spec.background_vocab)));
      }
    }
    RawTweet t;
    t.id = std::string(id_prefix) + std::to_string(i);
    t.text = std::move(text);
    t.created_at = spec.start + std::chrono::seconds(uniform_below(rng, 3600));
    t.geo = spec.where;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace crisisloc::testing

namespace crisisloc::testing {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

PipelineFixture write_pipeline_fixture(const std::filesystem::path& dir, bool tagged,
                                       std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  Rng rng(seed);
  const GeoPoint boston{42.35, -71.08};
  const GeoPoint new_york{40.75, -73.99};
  const Instant crisis = parse_rfc3339("2013-04-15T19:30:00Z");
  const Instant before = parse_rfc3339("2013-04-09T15:00:00Z");

  std::string lines;
  int next_id = 0;
  auto emit = [&](std::optional<GeoPoint> where, Instant when, const std::string& marker) {
    RawTweet t;
    t.id = "t" + std::to_string(next_id++);
    std::vector<std::string> tokens;
    const auto len = 5 + uniform_below(rng, 6);
    for (std::uint64_t k = 0; k < len; ++k) tokens.push_back("w" + std::to_string(uniform_below(rng, 60)));
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(uniform_below(rng, len + 1)), marker);
    for (std::size_t k = 0; k < tokens.size(); ++k) t.text += (k ? " " : "") + tokens[k];
    t.created_at = when + std::chrono::minutes(uniform_below(rng, 120));
    t.geo = where;
    if (tagged) {
      const auto layered = with_random_layers(attach_tags(t.id, tokens), rng);
      t.ark_tags = layered.layer(TagLayer::Ark);
      t.ptb_tags = layered.layer(TagLayer::Ptb);
      t.chunk_tags = layered.layer(TagLayer::Chunk);
    }
    lines += tweet_to_json_line(t) + "\n";
  };
  for (int i = 0; i < 40; ++i) emit(boston, crisis, "qz1");
  for (int i = 0; i < 70; ++i) emit(new_york, crisis, "qz2");
  for (int i = 0; i < 10; ++i) emit(boston, before, "qz3");
  for (int i = 0; i < 10; ++i) emit(new_york, before, "qz3");
  for (int i = 0; i < 20; ++i) emit(std::nullopt, crisis, i % 2 ? "qz1" : "qz2");

  PipelineFixture f;
  f.corpus = dir / "corpus.jsonl";
  f.config = dir / "config.json";
  f.output_dir = dir / "out";
  write_text(f.corpus, lines);
  write_text(f.config, R"({
  "schema_version": 1,
  "input": "corpus.jsonl",
  "output_dir": "out",
  "seed": 5,
  "timezone_offset_minutes": -240,
  "regions": [
    {"name": "boston", "lat": 42.35, "lon": -71.08, "radius_km": 19, "primary": true},
    {"name": "new_york", "lat": 40.75, "lon": -73.99, "radius_km": 20}
  ],
  "windows": {
    "crisis": {"start": "2013-04-15T14:48:00-04:00", "end": "2013-04-16T00:00:00-04:00"},
    "pre_crisis": {"start": "2013-04-09T10:00:00-04:00", "end": "2013-04-09T14:48:00-04:00"}
  },
  "feature_classes": ")" + std::string(tagged ? "UNIGRAM+BIGRAM+ARK_POS+PTB_POS+SHALLOW_PARSE+CRISIS_SENSITIVE"
                                                 : "UNIGRAM+BIGRAM") + R"(",
  "model": {"kind": "nb", "alpha": 1.0},
  "cv": {"repeats": 3, "folds": 5},
  "imbalance": {"ratios": [0.2, 0.5, 0.8], "test_fraction": 0.25},
  "divergence": {"day": "2013-04-15", "first_hour": 15, "last_hour": 17},
  "top_k": 3,
  "cloud_k": 5
}
)");
  return f;
}

}  // namespace crisisloc::testing

namespace crisisloc::testing {

int run_command(const std::vector<std::string>& args, std::string* out, std::string* err) {
  std::vector<const char*> argv{"crisisloc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    files[std::filesystem::relative(entry.path(), dir).generic_string()] = bytes.str();
  }
  return files;
}

std::filesystem::path scratch_dir(std::string_view name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("crisisloc_" + std::string(name) + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace crisisloc::testing
