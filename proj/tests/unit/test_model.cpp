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

#include "doctest.h"

#include <cmath>
#include <map>

#include "crisisloc/model.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace crisisloc;

namespace {

FeatureVector vec(std::initializer_list<std::pair<const char*, std::uint32_t>> items) {
  FeatureVector v;
  for (const auto& [k, n] : items) v.add(FeatureClass::Unigram, k, n);
  return v;
}

FeatureId uni(const char* k) { return FeatureId{FeatureClass::Unigram, k}; }

std::vector<LabeledVector> random_training(Rng& rng, int max_examples, int dims, int max_features) {
  std::vector<LabeledVector> data;
  const int n = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_examples - 1)));
  for (int i = 0; i < n; ++i) {
    const Label label = i == 0 ? Label::IR : i == 1 ? Label::OR : (rng() & 1 ? Label::IR : Label::OR);
    data.push_back({testing::random_vector(rng, dims, 3, max_features), label});
  }
  return data;
}

std::vector<LabeledVector> separable_toy() {
  std::vector<LabeledVector> data;
  for (int i = 0; i < 10; ++i) data.push_back({vec({{"a", 1}}), Label::IR});
  for (int i = 0; i < 10; ++i) data.push_back({vec({{"b", 1}}), Label::OR});
  return data;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("naive bayes hand example") {
  const std::vector<LabeledVector> data{{vec({{"x", 1}}), Label::IR}, {vec({{"y", 1}}), Label::OR}};
  const auto m = train_naive_bayes(data, 1.0);
  CHECK(std::exp(m.log_prior(Label::IR)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(m.log_prior(Label::OR)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(m.log_likelihood(Label::IR, uni("x"))) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(m.log_likelihood(Label::OR, uni("x"))) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(m.log_likelihood(Label::IR, uni("zzz")), std::out_of_range);
  CHECK(m.vocabulary().size() == 2);
  CHECK(m.document_count(Label::IR) == 1);

  const auto p = m.predict(vec({{"x", 1}}));
  CHECK(p.label == Label::IR);
  CHECK(std::fabs(p.score - std::log(2.0)) < 1e-12);
  const auto empty = m.predict(FeatureVector{});
  CHECK(empty.score == 0.0);
  CHECK(empty.label == Label::IR);
  CHECK(m.predict(vec({{"y", 2}})).label == Label::OR);
  CHECK(m.predict(vec({{"unseen", 5}})).score == 0.0);
  m.check_normalization();
}

TEST_CASE("naive bayes errors") {
  CHECK_THROWS_AS(train_naive_bayes(std::vector<LabeledVector>{}), ValidationError);
  const std::vector<LabeledVector> one{{vec({{"x", 1}}), Label::IR}};
  CHECK_THROWS_AS(train_naive_bayes(one), ValidationError);
  const std::vector<LabeledVector> two{{vec({{"x", 1}}), Label::IR}, {vec({{"y", 1}}), Label::OR}};
  CHECK_THROWS_AS(train_naive_bayes(two, 0.0), ValidationError);
  CHECK_THROWS_AS(train_naive_bayes(two, -1.0), ValidationError);
}

TEST_CASE("naive bayes matches the brute-force oracle") {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto data = random_training(rng, 6, 6, 5);
    const double alpha = trial % 3 == 0 ? 0.5 : 1.0;
    const auto m = train_naive_bayes(data, alpha);
    m.check_normalization();
    for (int q = 0; q < 3; ++q) {
      const auto x = testing::random_vector(rng, 8, 3, 5);
      CHECK(std::fabs(m.predict(x).score - testing::brute_nb_score(data, x, alpha)) < 1e-9);
    }
  }
}

TEST_CASE("naive bayes under uniform duplication") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = random_training(rng, 8, 10, 6);
    std::vector<LabeledVector> tripled;
    for (int r = 0; r < 3; ++r) tripled.insert(tripled.end(), data.begin(), data.end());
    const auto base = train_naive_bayes(data, 1.0);
    const auto same = train_naive_bayes(tripled, 3.0);
    const auto sharper = train_naive_bayes(tripled, 1.0);
    REQUIRE(same.vocabulary() == base.vocabulary());
    for (auto label : {Label::IR, Label::OR}) {
      CHECK(std::fabs(same.log_prior(label) - base.log_prior(label)) < 1e-12);
      CHECK(std::fabs(sharper.log_prior(label) - base.log_prior(label)) < 1e-12);
      const auto a = base.log_likelihoods(label);
      const auto b = same.log_likelihoods(label);
      const auto c = sharper.log_likelihoods(label);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-12);
      // With alpha fixed, the smoothed estimate moves toward the raw frequency.
      std::map<FeatureId, double> counts;
      double total = 0;
      for (const auto& ex : data) {
        if (ex.label != label) continue;
        for (const auto& [id, n] : ex.vector.counts()) {
          counts[id] += n;
          total += n;
        }
      }
      if (total == 0) continue;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double raw = counts[base.vocabulary()[i]] / total;
        CHECK(std::fabs(std::exp(c[i]) - raw) <= std::fabs(std::exp(a[i]) - raw) + 1e-12);
      }
    }
  }
}

TEST_CASE("balanced duplication leaves the model unchanged") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = random_training(rng, 8, 10, 6);
    std::vector<LabeledVector> doubled = data;
    doubled.insert(doubled.end(), data.begin(), data.end());
    // Doubling data doubles counts; with doubled alpha the tables coincide.
    const auto a = train_naive_bayes(data, 1.0);
    const auto b = train_naive_bayes(doubled, 2.0);
    CHECK(std::fabs(a.log_prior(Label::OR) - b.log_prior(Label::OR)) < 1e-12);
    for (auto label : {Label::IR, Label::OR}) {
      const auto la = a.log_likelihoods(label);
      const auto lb = b.log_likelihoods(label);
      REQUIRE(la.size() == lb.size());
      for (std::size_t i = 0; i < la.size(); ++i) CHECK(std::fabs(la[i] - lb[i]) < 1e-12);
    }
  }
}

TEST_CASE("select-all baseline") {
  const auto p = select_all_baseline(vec({{"x", 1}}));
  CHECK(p.label == Label::IR);
  CHECK(std::isinf(p.score));
  CHECK(select_all_baseline(FeatureVector{}).label == Label::IR);
}

TEST_CASE("logistic regression separable signs and top features") {
  LogRegParams params;
  params.learning_rate = 0.5;
  params.max_epochs = 2000;
  const auto m = train_logreg(separable_toy(), params);
  CHECK(m.weight(uni("a")) > 0.0);
  CHECK(m.weight(uni("b")) < 0.0);
  CHECK(m.weight(uni("never")) == 0.0);
  CHECK(m.predict(vec({{"a", 1}})).label == Label::IR);
  CHECK(m.predict(vec({{"b", 1}})).label == Label::OR);
  CHECK(m.predict(vec({{"a", 1}})).score > 0.5);

  const auto top = top_features(m, 1, FeatureClass::Unigram);
  REQUIRE(top.size() == 1);
  CHECK(top[0].id.key == "a");
  const auto full = top_features(m, 10, FeatureClass::Unigram);
  REQUIRE(full.size() == 2);
  CHECK(full[1].id.key == "b");
  CHECK(top_features(m, 5, FeatureClass::Bigram).empty());
  CHECK_THROWS_AS(top_features(m, 0, FeatureClass::Unigram), std::invalid_argument);
}

TEST_CASE("logistic regression on identical vectors recovers the label logit") {
  std::vector<LabeledVector> data;
  for (int i = 0; i < 30; ++i) data.push_back({vec({{"x", 1}}), Label::IR});
  for (int i = 0; i < 10; ++i) data.push_back({vec({{"x", 1}}), Label::OR});
  LogRegParams params;
  params.learning_rate = 0.5;
  params.l2 = 0.1;
  params.max_epochs = 20000;
  params.tolerance = 1e-10;
  const auto m = train_logreg(data, params);
  CHECK(std::fabs(m.weight(uni("x"))) < 0.05);
  CHECK(std::fabs(m.bias() - std::log(3.0)) < 0.05);
}

TEST_CASE("logistic regression gradient agrees with finite differences") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto data = random_training(rng, 12, 8, 5);
    const double l2 = trial % 2 ? 0.0 : 0.05;
    const LogRegObjective obj(data, l2);
    std::vector<double> w(obj.index().size());
    for (auto& x : w) x = uniform_unit(rng) * 2.0 - 1.0;
    const double b = uniform_unit(rng) - 0.5;
    std::vector<double> g(w.size());
    double gb = 0.0;
    obj.gradient(w, b, g, gb);
    const double h = 1e-6;
    auto rel = [](double a, double n) { return std::fabs(a - n) / std::max(std::fabs(a) + std::fabs(n), 1e-6); };
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      const double numeric = (obj.loss(wp, b) - obj.loss(wm, b)) / (2 * h);
      CHECK(rel(g[i], numeric) < 1e-4);
    }
    const double numeric_b = (obj.loss(w, b + h) - obj.loss(w, b - h)) / (2 * h);
    CHECK(rel(gb, numeric_b) < 1e-4);
  }
}

TEST_CASE("logistic regression errors") {
  CHECK_THROWS_AS(train_logreg(std::vector<LabeledVector>{}), ValidationError);
  const std::vector<LabeledVector> one{{vec({{"x", 1}}), Label::OR}};
  CHECK_THROWS_AS(train_logreg(one), ValidationError);
}

TEST_CASE("model files round trip") {
  Rng rng(2);
  const auto data = random_training(rng, 30, 12, 6);
  const auto nb = train_naive_bayes(data, 0.7);
  LogRegParams params;
  params.max_epochs = 50;
  const auto lr = train_logreg(data, params);
  const FeatureClassSet classes{FeatureClass::Unigram, FeatureClass::Bigram};

  for (const AnyModel& model : {AnyModel(nb), AnyModel(lr)}) {
    const std::string text = model_to_json(ModelFile{model, classes});
    const auto back = model_from_json(text);
    CHECK(back.feature_classes == classes);
    CHECK(back.model.index() == model.index());
    CHECK(model_to_json(back) == text);
    for (int q = 0; q < 50; ++q) {
      const auto x = testing::random_vector(rng, 14, 3, 6);
      const auto a = predict(model, x);
      const auto b = predict(back.model, x);
      CHECK(a.label == b.label);
      CHECK(a.score == b.score);
    }
  }
  CHECK_THROWS_AS(model_from_json("{"), ParseError);
  CHECK_THROWS(model_from_json(R"({"version":99})"));
}

}
