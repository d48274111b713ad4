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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crisisloc/ingest.hpp"
#include "crisisloc/text.hpp"

namespace crisisloc {

// Unigram relative frequencies. Probabilities are positive and sum to 1.
struct TokenDistribution {
  std::map<std::string, double> probs;
  std::uint64_t total_tokens = 0;

  std::size_t support_size() const { return probs.size(); }
};

// Throws ValidationError when the tweets hold no tokens.
TokenDistribution word_distribution(std::span<const TaggedTweet> tweets);

// Jensen-Shannon divergence with base-2 logarithms, in [0, 1].
double js_divergence(const TokenDistribution& p, const TokenDistribution& q);

// Square, symmetric, zero-diagonal matrix of divergences.
struct DivergenceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  // Min-max rescaled copy of values for display.
  std::vector<std::vector<double>> normalized_values;
  std::vector<std::string> warnings;

  std::size_t size() const { return labels.size(); }
};

// Pairwise divergences over named distributions.
DivergenceMatrix divergence_matrix(std::vector<std::pair<std::string, TokenDistribution>> groups);

struct HourlyOptions {
  std::chrono::year_month_day day;
  int first_hour = 0;  // inclusive, local time
  int last_hour = 23;  // inclusive, local time
  std::chrono::minutes utc_offset{0};
};

// Geotagged tweets inside the region on the given local day, one
// distribution per local hour. Hours without tokens are dropped with a warning.
DivergenceMatrix hourly_divergence_matrix(std::span<const RawTweet> tweets, const Region& region,
                                          const HourlyOptions& options);

// Pairwise divergence between named tweet groups (cities). Groups without
// tokens are dropped with a warning; at least one group must remain.
DivergenceMatrix regional_divergence_matrix(
    const std::vector<std::pair<std::string, std::vector<TaggedTweet>>>& groups);

std::string matrix_to_csv(const DivergenceMatrix& m);
std::string matrix_to_json(const DivergenceMatrix& m);

}  // namespace crisisloc
