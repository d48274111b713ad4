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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "crisisloc/common.hpp"
#include "crisisloc/features.hpp"

namespace crisisloc {

struct LabeledVector {
  FeatureVector vector;
  Label label = Label::IR;
};

// NB: score is log P(IR|x) - log P(OR|x), label IR iff score >= 0.
// Logistic regression: score is P(IR|x), label IR iff score >= 0.5.
struct Prediction {
  Label label = Label::IR;
  double score = 0.0;
};

// Dense index over a sorted feature list.
class FeatureIndex {
 public:
  FeatureIndex() = default;
  explicit FeatureIndex(std::vector<FeatureId> sorted_features);

  std::size_t size() const { return features_.size(); }
  const std::vector<FeatureId>& features() const { return features_; }
  // Returns -1 for features outside the index.
  std::int64_t find(const FeatureId& id) const;

  // Splits a vector into in-index positions and their counts; unknown
  // features are dropped.
  void project(const FeatureVector& v, std::vector<std::uint32_t>& indices,
               std::vector<double>& values) const;

 private:
  std::vector<FeatureId> features_;
  std::unordered_map<FeatureId, std::uint32_t, FeatureIdHash> positions_;
};

// Multinomial Naive Bayes with additive (Laplace) smoothing.
class NaiveBayesModel {
 public:
  double alpha() const { return alpha_; }
  const std::vector<FeatureId>& vocabulary() const { return index_.features(); }
  double log_prior(Label label) const { return log_prior_[slot(label)]; }
  std::span<const double> log_likelihoods(Label label) const { return log_likelihood_[slot(label)]; }
  // Log-likelihood of an in-vocabulary feature; throws std::out_of_range otherwise.
  double log_likelihood(Label label, const FeatureId& id) const;
  std::size_t document_count(Label label) const { return documents_[slot(label)]; }

  Prediction predict(const FeatureVector& v) const;

  // Priors and each label's likelihoods must exponentiate to 1 within tol.
  // Throws std::logic_error otherwise.
  void check_normalization(double tol = 1e-9) const;

  // Rebuilds a model from stored tables (model files).
  static NaiveBayesModel from_tables(double alpha, std::array<std::size_t, 2> documents,
                                     std::array<double, 2> log_priors,
                                     std::vector<FeatureId> vocabulary,
                                     std::array<std::vector<double>, 2> log_likelihoods);

 private:
  friend NaiveBayesModel train_naive_bayes(std::span<const LabeledVector>, double);
  static std::size_t slot(Label label) { return label == Label::IR ? 0 : 1; }
  void finalize();

  double alpha_ = 1.0;
  std::array<std::size_t, 2> documents_{};
  std::array<double, 2> log_prior_{};
  FeatureIndex index_;
  std::array<std::vector<double>, 2> log_likelihood_;
  // log L(f|IR) - log L(f|OR) per vocabulary entry.
  std::vector<double> margin_;
};

// Throws ValidationError on empty data, single-label data or alpha <= 0.
NaiveBayesModel train_naive_bayes(std::span<const LabeledVector> data, double alpha = 1.0);

Prediction predict_nb(const NaiveBayesModel& model, const FeatureVector& v);

// Labels everything IR with a +infinity score.
Prediction select_all_baseline(const FeatureVector& v);

struct LogRegParams {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int max_epochs = 500;
  double tolerance = 1e-6;
};

// Mean negative log-likelihood with an L2 penalty on the weights (the bias is
// not penalized). IR is encoded as 1.
class LogRegObjective {
 public:
  LogRegObjective(std::span<const LabeledVector> data, double l2);

  const FeatureIndex& index() const { return index_; }
  std::size_t rows() const { return labels_.size(); }

  double loss(std::span<const double> weights, double bias) const;
  // Returns the loss at the given point and fills the full gradient.
  double gradient(std::span<const double> weights, double bias, std::span<double> grad_weights,
                  double& grad_bias) const;
  // Same, without the L2 term in grad_weights (the training step adds it).
  double data_gradient(std::span<const double> weights, double bias,
                       std::span<double> grad_weights, double& grad_bias) const;

 private:
  FeatureIndex index_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
  std::vector<double> labels_;
  double l2_;
};

class LogisticRegressionModel {
 public:
  const std::vector<FeatureId>& features() const { return index_.features(); }
  std::span<const double> weights() const { return weights_; }
  double bias() const { return bias_; }
  const LogRegParams& params() const { return params_; }
  int epochs_run() const { return epochs_run_; }
  bool converged() const { return converged_; }

  // Zero for features the model never saw.
  double weight(const FeatureId& id) const;
  double decision_value(const FeatureVector& v) const;
  Prediction predict(const FeatureVector& v) const;

  static LogisticRegressionModel from_parts(std::vector<FeatureId> features,
                                            std::vector<double> weights, double bias,
                                            LogRegParams params, int epochs_run, bool converged);

 private:
  friend LogisticRegressionModel train_logreg(std::span<const LabeledVector>,
                                              const LogRegParams&);
  FeatureIndex index_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  LogRegParams params_;
  int epochs_run_ = 0;
  bool converged_ = false;
};

// Batch gradient descent from zero initialization until the largest absolute
// parameter update falls below tolerance or max_epochs is reached. Throws
// ValidationError for empty/single-label data and Error when the loss becomes
// non-finite.
LogisticRegressionModel train_logreg(std::span<const LabeledVector> data,
                                     const LogRegParams& params = {});

struct RankedFeature {
  FeatureId id;
  double weight = 0.0;
};

// Features of one class by descending weight (IR-indicative first), ties by
// key. Throws std::invalid_argument for k <= 0.
std::vector<RankedFeature> top_features(const LogisticRegressionModel& model, int k,
                                        FeatureClass cls);

// Model files: versioned JSON documents.
inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<NaiveBayesModel, LogisticRegressionModel>;

struct ModelFile {
  AnyModel model;
  FeatureClassSet feature_classes;
};

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(std::string_view text);

Prediction predict(const AnyModel& model, const FeatureVector& v);

}  // namespace crisisloc
