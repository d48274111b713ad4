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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crisisloc/eval.hpp"
#include "crisisloc/features.hpp"
#include "crisisloc/ingest.hpp"
#include "crisisloc/model.hpp"

namespace crisisloc {

struct NamedRegion {
  std::string name;
  Region region;
  bool primary = false;
};

enum class ModelKind : std::uint8_t { NaiveBayes, LogReg };

std::string_view model_kind_name(ModelKind kind);

// Declarative run description, loaded from a JSON document. Window bounds are
// RFC-3339 strings carrying their own UTC offset and are held in UTC from
// then on. timezone_offset only affects how hours are labelled.
struct RunConfig {
  std::vector<NamedRegion> regions;
  TimeWindow crisis;
  std::optional<TimeWindow> pre_crisis;
  std::chrono::minutes timezone_offset{0};

  FeatureClassSet feature_classes = FeatureClassSet::all();
  ModelKind model_kind = ModelKind::NaiveBayes;
  double alpha = 1.0;
  LogRegParams logreg;
  bool balance = true;
  bool fill_ark_tags = false;

  std::uint64_t seed = 0;
  int threads = 1;
  int cv_repeats = 3;
  int cv_folds = 5;
  std::vector<double> imbalance_ratios = kDefaultImbalanceRatios;
  double test_fraction = 0.2;
  std::size_t max_instances = 0;

  std::optional<std::chrono::year_month_day> hourly_day;
  int first_hour = 0;
  int last_hour = 23;

  int top_k = 3;
  int cloud_k = 10;

  std::filesystem::path input;
  std::optional<std::filesystem::path> unlabeled_input;
  std::filesystem::path output_dir = "out";

  const NamedRegion& primary_region() const;
};

// Relative paths resolve against base_dir. Throws ValidationError on a
// schema or invariant violation and ParseError on malformed JSON.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Checks the cross-field invariants (one primary region, distinct paths).
void validate_config(const RunConfig& config);

}  // namespace crisisloc
