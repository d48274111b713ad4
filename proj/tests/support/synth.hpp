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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crisisloc/common.hpp"
#include "crisisloc/ingest.hpp"
#include "crisisloc/model.hpp"
#include "crisisloc/random.hpp"
#include "crisisloc/text.hpp"

namespace crisisloc::testing {

struct SyntheticCorpus {
  std::vector<TaggedTweet> tweets;
  std::vector<Label> labels;

  std::vector<TaggedTweet> with_label(Label label) const;
};

// Background tweets of 6..12 tokens drawn from `vocab` filler words, half IR
// and half OR. A tweet carries its label's marker with the given rate:
// ir_marker for IR tweets, or_marker for OR tweets (pass the same word for a
// single shared marker).
struct MarkerSpec {
  std::string ir_marker = "qz1";
  std::string or_marker = "qz2";
  double ir_rate = 1.0;
  double or_rate = 1.0;
  int vocab = 400;
};

SyntheticCorpus marker_corpus(std::size_t n, std::uint64_t seed, const MarkerSpec& spec = {});

// Random ARK, PTB and chunk layers on top of the tokens, so every class is
// extractable.
TaggedTweet with_random_layers(const TaggedTweet& tweet, Rng& rng);

// Random tweet of `len` tokens over a tiny vocabulary, with the layers
// requested.
TaggedTweet random_tweet(Rng& rng, std::size_t len, bool ark, bool ptb, bool chunks);

// Sparse vectors over features f0..f(dims-1) of one class.
FeatureVector random_vector(Rng& rng, int dims, int max_count, int max_features);

inline constexpr std::string_view kArkInventory[] = {"N", "V", "A", "R", "P", "D", "L", "!",
                                                     "#", "@", "^", "O", "U", "&", "X", ","};
inline constexpr std::string_view kPtbInventory[] = {"NN", "NNS", "VB", "VBZ", "VBD", "JJ", "RB",
                                                     "IN", "DT", "EX", "MD", "PRP", "USR", "."};

// Geotagged tweets for one hour block. A fraction `crisis_share` of each
// tweet's tokens comes from the crisis vocabulary; the rest from the shared
// background.
struct BlockSpec {
  GeoPoint where;
  Instant start;
  int tweets = 150;
  int tokens_per_tweet = 12;
  double crisis_share = 0.0;
  int background_vocab = 120;
  int crisis_vocab = 40;
  std::string crisis_prefix = "crisis";
};

std::vector<RawTweet> block_tweets(const BlockSpec& spec, Rng& rng, std::string_view id_prefix);

}  // namespace crisisloc::testing

namespace crisisloc::testing {

// A small on-disk corpus and matching config for command-line runs: IR tweets
// in Boston, OR tweets in New York, pre-crisis tweets in both and
// non-geotagged tweets. With `tagged`, every record carries ARK, PTB and chunk
// layers.
struct PipelineFixture {
  std::filesystem::path config;
  std::filesystem::path corpus;
  std::filesystem::path output_dir;
};

PipelineFixture write_pipeline_fixture(const std::filesystem::path& dir, bool tagged,
                                       std::uint64_t seed = 1);

}  // namespace crisisloc::testing

namespace crisisloc::testing {

// Runs the command-line entry point in-process. Returns the exit code; stdout
// and stderr are captured when the pointers are set.
int run_command(const std::vector<std::string>& args, std::string* out = nullptr,
                std::string* err = nullptr);

// Every regular file under dir, keyed by relative path, with its bytes.
std::map<std::string, std::string> snapshot(const std::filesystem::path& dir);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(std::string_view name);

}  // namespace crisisloc::testing
