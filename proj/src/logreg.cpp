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
#include <set>
#include <stdexcept>

#include "crisisloc/kernels.hpp"
#include "crisisloc/model.hpp"

namespace crisisloc {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

std::vector<FeatureId> collect_features(std::span<const LabeledVector> data) {
  std::set<FeatureId> all;
  for (const auto& ex : data) {
    for (const auto& [id, _] : ex.vector.counts()) all.insert(id);
  }
  return {all.begin(), all.end()};
}

}  // namespace

LogRegObjective::LogRegObjective(std::span<const LabeledVector> data, double l2)
    : index_(collect_features(data)), l2_(l2) {
  row_start_.reserve(data.size() + 1);
  row_start_.push_back(0);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (const auto& ex : data) {
    index_.project(ex.vector, idx, val);
    cols_.insert(cols_.end(), idx.begin(), idx.end());
    vals_.insert(vals_.end(), val.begin(), val.end());
    row_start_.push_back(cols_.size());
    labels_.push_back(ex.label == Label::IR ? 1.0 : 0.0);
  }
}

double LogRegObjective::data_gradient(std::span<const double> weights, double bias,
                                      std::span<double> grad_weights, double& grad_bias) const {
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  grad_bias = 0.0;
  const double inv_n = 1.0 / static_cast<double>(labels_.size());
  double loss = 0.0;
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    const std::size_t begin = row_start_[r];
    const std::size_t len = row_start_[r + 1] - begin;
    const std::span<const std::uint32_t> idx(cols_.data() + begin, len);
    const std::span<const double> val(vals_.data() + begin, len);
    const double z = kernels::gather_dot(idx, val, weights) + bias;
    loss += softplus(z) - labels_[r] * z;
    const double residual = (sigmoid(z) - labels_[r]) * inv_n;
    for (std::size_t k = 0; k < len; ++k) grad_weights[idx[k]] += residual * val[k];
    grad_bias += residual;
  }
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return loss * inv_n + 0.5 * l2_ * penalty;
}

double LogRegObjective::gradient(std::span<const double> weights, double bias,
                                 std::span<double> grad_weights, double& grad_bias) const {
  const double loss = data_gradient(weights, bias, grad_weights, grad_bias);
  for (std::size_t i = 0; i < weights.size(); ++i) grad_weights[i] += l2_ * weights[i];
  return loss;
}

double LogRegObjective::loss(std::span<const double> weights, double bias) const {
  double loss = 0.0;
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    const std::size_t begin = row_start_[r];
    const std::size_t len = row_start_[r + 1] - begin;
    const double z = kernels::gather_dot({cols_.data() + begin, len}, {vals_.data() + begin, len},
                                         weights) +
                     bias;
    loss += softplus(z) - labels_[r] * z;
  }
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return loss / static_cast<double>(labels_.size()) + 0.5 * l2_ * penalty;
}

double LogisticRegressionModel::weight(const FeatureId& id) const {
  const auto pos = index_.find(id);
  return pos < 0 ? 0.0 : weights_[static_cast<std::size_t>(pos)];
}

double LogisticRegressionModel::decision_value(const FeatureVector& v) const {
  thread_local std::vector<std::uint32_t> indices;
  thread_local std::vector<double> values;
  index_.project(v, indices, values);
  return kernels::gather_dot(indices, values, weights_) + bias_;
}

Prediction LogisticRegressionModel::predict(const FeatureVector& v) const {
  const double p = sigmoid(decision_value(v));
  return Prediction{p >= 0.5 ? Label::IR : Label::OR, p};
}

LogisticRegressionModel LogisticRegressionModel::from_parts(std::vector<FeatureId> features,
                                                            std::vector<double> weights,
                                                            double bias, LogRegParams params,
                                                            int epochs_run, bool converged) {
  if (features.size() != weights.size()) {
    throw ValidationError("logistic regression weight count differs from feature count");
  }
  if (!std::is_sorted(features.begin(), features.end())) {
    throw ValidationError("logistic regression features must be sorted");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw ValidationError("non-finite logistic regression weight");
  }
  LogisticRegressionModel m;
  m.index_ = FeatureIndex(std::move(features));
  m.weights_ = std::move(weights);
  m.bias_ = bias;
  m.params_ = params;
  m.epochs_run_ = epochs_run;
  m.converged_ = converged;
  return m;
}

LogisticRegressionModel train_logreg(std::span<const LabeledVector> data,
                                     const LogRegParams& params) {
  if (data.empty()) throw ValidationError("cannot train logistic regression on empty data");
  const bool has_ir = std::any_of(data.begin(), data.end(),
                                  [](const LabeledVector& ex) { return ex.label == Label::IR; });
  const bool has_or = std::any_of(data.begin(), data.end(),
                                  [](const LabeledVector& ex) { return ex.label == Label::OR; });
  if (!has_ir || !has_or) {
    throw ValidationError("logistic regression needs at least one IR and one OR example");
  }
  if (!(params.learning_rate > 0.0) || !(params.l2 >= 0.0) || params.max_epochs <= 0 ||
      !(params.tolerance >= 0.0)) {
    throw ValidationError("invalid logistic regression hyperparameters");
  }

  const LogRegObjective objective(data, params.l2);
  const std::size_t dim = objective.index().size();
  std::vector<double> weights(dim, 0.0);
  std::vector<double> grad(dim, 0.0);
  double bias = 0.0;
  double grad_bias = 0.0;

  LogisticRegressionModel m;
  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    const double loss = objective.data_gradient(weights, bias, grad, grad_bias);
    if (!std::isfinite(loss)) {
      throw Error("logistic regression loss became non-finite at epoch " + std::to_string(epoch) +
                  " (learning rate too high?)");
    }
    const double bias_step = params.learning_rate * grad_bias;
    bias -= bias_step;
    const double largest =
        std::max(kernels::regularized_step(weights, grad, params.learning_rate, params.l2),
                 std::fabs(bias_step));
    m.epochs_run_ = epoch;
    if (!std::isfinite(largest) || !std::isfinite(bias)) {
      throw Error("logistic regression parameters became non-finite at epoch " +
                  std::to_string(epoch) + " (learning rate too high?)");
    }
    if (largest < params.tolerance) {
      m.converged_ = true;
      break;
    }
  }
  m.index_ = objective.index();
  m.weights_ = std::move(weights);
  m.bias_ = bias;
  m.params_ = params;
  return m;
}

std::vector<RankedFeature> top_features(const LogisticRegressionModel& model, int k,
                                        FeatureClass cls) {
  if (k <= 0) throw std::invalid_argument("top_features needs k > 0");
  std::vector<RankedFeature> ranked;
  const auto& features = model.features();
  const auto weights = model.weights();
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].cls == cls) ranked.push_back({features[i], weights[i]});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.id.key < b.id.key;
  });
  if (ranked.size() > static_cast<std::size_t>(k)) ranked.resize(static_cast<std::size_t>(k));
  return ranked;
}

Prediction predict(const AnyModel& model, const FeatureVector& v) {
  return std::visit([&](const auto& m) { return m.predict(v); }, model);
}

}  // namespace crisisloc
