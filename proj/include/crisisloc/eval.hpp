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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crisisloc/common.hpp"
#include "crisisloc/features.hpp"
#include "crisisloc/model.hpp"
#include "crisisloc/text.hpp"

namespace crisisloc {

// Confusion-matrix metrics from the IR (positive class) perspective.
// Undefined ratios are reported as 0 with the matching flag set.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// Throws std::invalid_argument on length mismatch or empty input.
Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> truth);

// Rank statistic: probability that a random IR scores above a random OR,
// ties counted one half. Throws ValidationError unless both labels occur and
// std::invalid_argument on NaN scores or a length mismatch.
double roc_auc(std::span<const double> scores, std::span<const Label> truth);

// Indices chosen from an IR pool and an OR pool.
struct SampleIndices {
  std::vector<std::size_t> ir;
  std::vector<std::size_t> or_pool;
  std::vector<std::string> warnings;
};

// All IR plus an equal-size uniform sample of OR (or the reverse when OR is
// the smaller pool, with a warning). Deterministic per seed; throws
// ValidationError when the IR pool is empty.
SampleIndices balanced_indices(std::size_t ir_size, std::size_t or_size, std::uint64_t seed);

// Largest sample with the requested IR fraction the pools allow, optionally
// capped at max_instances. At ratio 0.5 with |IR| <= |OR| this is exactly
// balanced_indices with the same seed.
SampleIndices ratio_indices(std::size_t ir_size, std::size_t or_size, double ratio,
                            std::uint64_t seed, std::size_t max_instances = 0);

template <typename T>
struct LabeledItem {
  T item;
  Label label;
};

template <typename T>
struct BalancedSample {
  std::vector<LabeledItem<T>> items;
  std::vector<std::string> warnings;
};

template <typename T>
BalancedSample<T> balanced_sample(std::span<const T> ir, std::span<const T> or_pool,
                                  std::uint64_t seed) {
  auto picked = balanced_indices(ir.size(), or_pool.size(), seed);
  BalancedSample<T> out;
  out.items.reserve(picked.ir.size() + picked.or_pool.size());
  for (auto i : picked.ir) out.items.push_back({ir[i], Label::IR});
  for (auto i : picked.or_pool) out.items.push_back({or_pool[i], Label::OR});
  out.warnings = std::move(picked.warnings);
  return out;
}

// Fold number for every instance. Each label is shuffled separately and
// dealt round-robin, so fold sizes per label differ by at most one. Throws
// ValidationError if a training split would lack a label.
std::vector<int> stratified_folds(std::span<const Label> labels, int folds, std::uint64_t seed);

// Per-instance, per-class feature vectors computed once and reused across
// class subsets.
class FeatureTable {
 public:
  static FeatureTable build(std::span<const TaggedTweet> tweets, std::span<const Label> labels,
                            FeatureClassSet classes = FeatureClassSet::all(), int threads = 1);

  std::size_t size() const { return labels_.size(); }
  std::span<const Label> labels() const { return labels_; }
  // Classes extractable for every instance.
  FeatureClassSet available() const { return available_; }
  FeatureVector vector(std::size_t i, FeatureClassSet classes) const;
  std::vector<LabeledVector> labeled_vectors(FeatureClassSet classes) const;

 private:
  std::vector<Label> labels_;
  std::vector<std::array<FeatureVector, kFeatureClassCount>> per_class_;
  FeatureClassSet available_;
};

struct CvOptions {
  int repeats = 3;
  int folds = 5;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  int threads = 1;
};

struct CvReading {
  int repeat = 0;
  int fold = 0;
  std::size_t test_size = 0;
  Metrics metrics;
};

struct CvReport {
  FeatureClassSet classes;
  std::uint64_t seed = 0;
  int repeats = 0;
  int folds = 0;
  std::vector<CvReading> readings;
  Metrics mean;
};

// Repeated stratified k-fold CV of Naive Bayes. Repeat r shuffles with
// seed + r. Throws ValidationError for fewer instances than folds, missing
// class layers or a training split with one label.
CvReport cross_validate(const FeatureTable& data, FeatureClassSet classes,
                        const CvOptions& options);

struct CombinationEntry {
  FeatureClassSet classes;
  CvReport report;
};

struct CombinationReport {
  std::vector<CombinationEntry> entries;  // ascending class-mask order
  std::vector<std::size_t> ranking;       // entry indices, mean F1 descending
  std::vector<FeatureClass> unavailable;
};

// Cross-validates every non-empty subset of the available classes with the
// same options (hence the same folds).
CombinationReport enumerate_combinations(const FeatureTable& data, const CvOptions& options);

inline const std::vector<double> kDefaultImbalanceRatios = {0.05, 0.1, 0.2,  0.35, 0.5,
                                                            0.65, 0.8, 0.9, 0.95};

struct ImbalanceOptions {
  std::vector<double> ratios = kDefaultImbalanceRatios;
  double test_fraction = 0.2;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_instances = 0;  // 0: as large as the pools allow
};

struct ImbalancePoint {
  double ratio = 0.0;
  std::size_t train_ir = 0;
  std::size_t train_or = 0;
  std::size_t test_ir = 0;
  std::size_t test_or = 0;
  double auc = 0.0;
};

struct ImbalanceSweep {
  FeatureClassSet classes;
  std::vector<ImbalancePoint> points;
  double summary_auc = 0.0;
};

// For each ratio (seed + its index), samples at that IR fraction, splits
// train/test stratified, trains NB and scores the test split by AUC.
ImbalanceSweep imbalance_sweep(std::span<const TaggedTweet> ir, std::span<const TaggedTweet> or_pool,
                               FeatureClassSet classes, const ImbalanceOptions& options);

struct CloudEntry {
  std::string bigram;
  std::uint64_t count = 0;
};

// Top-k word bigrams by count, ties lexicographic.
std::vector<CloudEntry> bigram_cloud(std::span<const TaggedTweet> tweets, int k);

// Report serialization.
std::string metrics_csv_header();
std::string cv_report_csv(const CvReport& report);
std::string cv_report_json(const CvReport& report);
std::string combination_report_csv(const CombinationReport& report);
std::string combination_report_json(const CombinationReport& report);
std::string imbalance_sweep_csv(const ImbalanceSweep& sweep);
std::string imbalance_sweep_json(const ImbalanceSweep& sweep);
std::string bigram_cloud_json(const std::vector<CloudEntry>& cloud);

}  // namespace crisisloc
