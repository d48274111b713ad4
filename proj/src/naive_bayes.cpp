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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crisisloc/kernels.hpp"
#include "crisisloc/model.hpp"

namespace crisisloc {

FeatureIndex::FeatureIndex(std::vector<FeatureId> sorted_features)
    : features_(std::move(sorted_features)) {
  positions_.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    positions_.emplace(features_[i], static_cast<std::uint32_t>(i));
  }
}

std::int64_t FeatureIndex::find(const FeatureId& id) const {
  auto it = positions_.find(id);
  return it == positions_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

void FeatureIndex::project(const FeatureVector& v, std::vector<std::uint32_t>& indices,
                           std::vector<double>& values) const {
  indices.clear();
  values.clear();
  for (const auto& [id, n] : v.counts()) {
    auto it = positions_.find(id);
    if (it == positions_.end()) continue;
    indices.push_back(it->second);
    values.push_back(static_cast<double>(n));
  }
}

double NaiveBayesModel::log_likelihood(Label label, const FeatureId& id) const {
  const auto pos = index_.find(id);
  if (pos < 0) throw std::out_of_range("feature '" + id.qualified() + "' not in vocabulary");
  return log_likelihood_[slot(label)][static_cast<std::size_t>(pos)];
}

void NaiveBayesModel::finalize() {
  const std::size_t n = index_.size();
  margin_.resize(n);
  for (std::size_t i = 0; i < n; ++i) margin_[i] = log_likelihood_[0][i] - log_likelihood_[1][i];
}

Prediction NaiveBayesModel::predict(const FeatureVector& v) const {
  thread_local std::vector<std::uint32_t> indices;
  thread_local std::vector<double> values;
  index_.project(v, indices, values);
  const double evidence = kernels::gather_dot(indices, values, margin_);
  const double score = evidence + (log_prior_[0] - log_prior_[1]);
  return Prediction{score >= 0.0 ? Label::IR : Label::OR, score};
}

void NaiveBayesModel::check_normalization(double tol) const {
  const double prior_sum = std::exp(log_prior_[0]) + std::exp(log_prior_[1]);
  if (std::fabs(prior_sum - 1.0) > tol) {
    throw std::logic_error("NB priors sum to " + format_double(prior_sum));
  }
  if (index_.size() == 0) return;
  for (std::size_t c = 0; c < 2; ++c) {
    double sum = 0.0;
    for (double ll : log_likelihood_[c]) sum += std::exp(ll);
    if (std::fabs(sum - 1.0) > tol) {
      throw std::logic_error("NB likelihoods for " + std::string(label_name(c ? Label::OR : Label::IR)) +
                             " sum to " + format_double(sum));
    }
  }
}

NaiveBayesModel NaiveBayesModel::from_tables(double alpha, std::array<std::size_t, 2> documents,
                                             std::array<double, 2> log_priors,
                                             std::vector<FeatureId> vocabulary,
                                             std::array<std::vector<double>, 2> log_likelihoods) {
  if (!(alpha > 0.0)) throw ValidationError("NB alpha must be positive");
  if (!std::is_sorted(vocabulary.begin(), vocabulary.end()) ||
      std::adjacent_find(vocabulary.begin(), vocabulary.end()) != vocabulary.end()) {
    throw ValidationError("NB vocabulary must be sorted and unique");
  }
  for (const auto& table : log_likelihoods) {
    if (table.size() != vocabulary.size()) {
      throw ValidationError("NB likelihood table size differs from vocabulary size");
    }
  }
  NaiveBayesModel m;
  m.alpha_ = alpha;
  m.documents_ = documents;
  m.log_prior_ = log_priors;
  m.index_ = FeatureIndex(std::move(vocabulary));
  m.log_likelihood_ = std::move(log_likelihoods);
  m.finalize();
  m.check_normalization(1e-6);
  return m;
}

NaiveBayesModel train_naive_bayes(std::span<const LabeledVector> data, double alpha) {
  if (data.empty()) throw ValidationError("cannot train Naive Bayes on empty data");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("NB smoothing alpha must be positive");
  }

  std::unordered_map<FeatureId, std::array<std::uint64_t, 2>, FeatureIdHash> counts;
  std::array<std::uint64_t, 2> totals{};
  NaiveBayesModel m;
  for (const auto& ex : data) {
    const std::size_t c = NaiveBayesModel::slot(ex.label);
    ++m.documents_[c];
    for (const auto& [id, n] : ex.vector.counts()) {
      counts[id][c] += n;
      totals[c] += n;
    }
  }
  if (m.documents_[0] == 0 || m.documents_[1] == 0) {
    throw ValidationError("Naive Bayes needs at least one IR and one OR example");
  }

  std::vector<FeatureId> vocab;
  vocab.reserve(counts.size());
  for (const auto& [id, _] : counts) vocab.push_back(id);
  std::sort(vocab.begin(), vocab.end());

  m.alpha_ = alpha;
  const double n_docs = static_cast<double>(data.size());
  m.log_prior_ = {std::log(static_cast<double>(m.documents_[0]) / n_docs),
                  std::log(static_cast<double>(m.documents_[1]) / n_docs)};
  const double v = static_cast<double>(vocab.size());
  for (std::size_t c = 0; c < 2; ++c) {
    const double log_denominator = std::log(static_cast<double>(totals[c]) + alpha * v);
    auto& table = m.log_likelihood_[c];
    table.resize(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      table[i] = std::log(static_cast<double>(counts[vocab[i]][c]) + alpha) - log_denominator;
    }
  }
  m.index_ = FeatureIndex(std::move(vocab));
  m.finalize();
  m.check_normalization();
  return m;
}

Prediction predict_nb(const NaiveBayesModel& model, const FeatureVector& v) {
  return model.predict(v);
}

Prediction select_all_baseline(const FeatureVector&) {
  return Prediction{Label::IR, std::numeric_limits<double>::infinity()};
}

}  // namespace crisisloc
