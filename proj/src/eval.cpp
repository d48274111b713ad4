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

#include "crisisloc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "crisisloc/parallel.hpp"
#include "crisisloc/random.hpp"
#include "json.hpp"

namespace crisisloc {

using nlohmann::json;

Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("prediction and truth lengths differ");
  }
  if (truth.empty()) throw std::invalid_argument("cannot compute metrics on no instances");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == Label::IR;
    const bool t = truth[i] == Label::IR;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
    tn += !p && !t;
  }
  Metrics m;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(truth.size());
  if (tp + fp == 0) {
    m.precision_undefined = true;
  } else {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    m.recall_undefined = true;
  } else {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  if (m.precision + m.recall == 0.0) {
    m.f1_undefined = true;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

double roc_auc(std::span<const double> scores, std::span<const Label> truth) {
  if (scores.size() != truth.size()) throw std::invalid_argument("score and truth lengths differ");
  std::vector<std::size_t> order = iota_indices(scores.size());
  for (double s : scores) {
    if (std::isnan(s)) throw std::invalid_argument("NaN score passed to roc_auc");
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Walk tie groups in ascending score order; each IR beats every OR seen in
  // earlier groups and ties half of the OR in its own group.
  double wins = 0.0;
  std::size_t or_below = 0;
  std::size_t n_ir = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t group_ir = 0, group_or = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (truth[order[j]] == Label::IR ? group_ir : group_or) += 1;
      ++j;
    }
    wins += static_cast<double>(group_ir) * static_cast<double>(or_below) +
            0.5 * static_cast<double>(group_ir) * static_cast<double>(group_or);
    or_below += group_or;
    n_ir += group_ir;
    i = j;
  }
  const std::size_t n_or = or_below;
  if (n_ir == 0 || n_or == 0) throw ValidationError("roc_auc needs both IR and OR instances");
  return wins / (static_cast<double>(n_ir) * static_cast<double>(n_or));
}

namespace {

SampleIndices compose(std::size_t ir_size, std::size_t or_size, std::size_t take_ir,
                      std::size_t take_or, std::uint64_t seed) {
  Rng rng(seed);
  auto ir = iota_indices(ir_size);
  auto orp = iota_indices(or_size);
  shuffle_in_place(ir, rng);
  shuffle_in_place(orp, rng);
  ir.resize(take_ir);
  orp.resize(take_or);
  std::sort(ir.begin(), ir.end());
  std::sort(orp.begin(), orp.end());
  return SampleIndices{std::move(ir), std::move(orp), {}};
}

}  // namespace

SampleIndices balanced_indices(std::size_t ir_size, std::size_t or_size, std::uint64_t seed) {
  if (ir_size == 0) throw ValidationError("balanced sampling needs at least one IR instance");
  if (or_size == 0) throw ValidationError("balanced sampling needs at least one OR instance");
  const std::size_t n = std::min(ir_size, or_size);
  auto out = compose(ir_size, or_size, n, n, seed);
  if (or_size < ir_size) {
    out.warnings.push_back("OR pool (" + std::to_string(or_size) + ") smaller than IR (" +
                           std::to_string(ir_size) + "); IR downsampled");
  }
  return out;
}

SampleIndices ratio_indices(std::size_t ir_size, std::size_t or_size, double ratio,
                            std::uint64_t seed, std::size_t max_instances) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ValidationError("IR ratio must lie strictly between 0 and 1, got " + format_double(ratio));
  }
  const double by_ir = std::floor(static_cast<double>(ir_size) / ratio + 1e-9);
  const double by_or = std::floor(static_cast<double>(or_size) / (1.0 - ratio) + 1e-9);
  auto total = static_cast<std::size_t>(std::min(by_ir, by_or));
  if (max_instances > 0) total = std::min(total, max_instances);
  std::size_t take_ir = std::min(ir_size, static_cast<std::size_t>(std::llround(ratio * total)));
  std::size_t take_or = std::min(or_size, total - std::min(total, take_ir));
  if (take_ir < 2 || take_or < 2) {
    throw ValidationError("IR ratio " + format_double(ratio) + " is infeasible for pools of " +
                          std::to_string(ir_size) + " IR and " + std::to_string(or_size) + " OR");
  }
  return compose(ir_size, or_size, take_ir, take_or, seed);
}

std::vector<int> stratified_folds(std::span<const Label> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  if (labels.size() < static_cast<std::size_t>(folds)) {
    throw ValidationError("cannot split " + std::to_string(labels.size()) + " instances into " +
                          std::to_string(folds) + " folds");
  }
  std::vector<std::size_t> ir, orp;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == Label::IR ? ir : orp).push_back(i);

  Rng rng(seed);
  shuffle_in_place(ir, rng);
  shuffle_in_place(orp, rng);
  std::vector<int> fold_of(labels.size(), -1);
  const auto f = static_cast<std::size_t>(folds);
  for (std::size_t k = 0; k < ir.size(); ++k) fold_of[ir[k]] = static_cast<int>(k % f);
  for (std::size_t k = 0; k < orp.size(); ++k) {
    fold_of[orp[k]] = static_cast<int>((ir.size() + k) % f);
  }

  // Every training split (all folds but one) must see both labels.
  std::vector<std::size_t> ir_in(f, 0), or_in(f, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::IR ? ir_in : or_in)[static_cast<std::size_t>(fold_of[i])] += 1;
  }
  for (std::size_t k = 0; k < f; ++k) {
    if (ir.size() - ir_in[k] == 0 || orp.size() - or_in[k] == 0) {
      throw ValidationError("fold " + std::to_string(k) +
                            " leaves a single-label training split (need >= 2 instances per label)");
    }
  }
  return fold_of;
}

FeatureTable FeatureTable::build(std::span<const TaggedTweet> tweets, std::span<const Label> labels,
                                 FeatureClassSet classes, int threads) {
  if (tweets.size() != labels.size()) throw std::invalid_argument("tweets and labels differ in length");
  FeatureTable t;
  t.labels_.assign(labels.begin(), labels.end());
  t.per_class_.resize(tweets.size());

  FeatureClassSet available = classes;
  for (const auto& tw : tweets) {
    for (auto c : classes.members()) {
      if (!class_available(tw, c)) {
        available = FeatureClassSet(static_cast<std::uint8_t>(available.mask() &
                                                              ~(1u << static_cast<int>(c))));
      }
    }
  }
  t.available_ = available;
  const auto members = available.members();
  parallel_for(tweets.size(), threads, [&](std::size_t i) {
    for (auto c : members) t.per_class_[i][static_cast<std::size_t>(c)] = extract_class(tweets[i], c);
  });
  return t;
}

FeatureVector FeatureTable::vector(std::size_t i, FeatureClassSet classes) const {
  if (!classes.subset_of(available_)) {
    throw ValidationError("feature classes " + classes.name() + " not available (have " +
                          available_.name() + ")");
  }
  FeatureVector v;
  for (auto c : classes.members()) v.merge(per_class_[i][static_cast<std::size_t>(c)]);
  return v;
}

std::vector<LabeledVector> FeatureTable::labeled_vectors(FeatureClassSet classes) const {
  std::vector<LabeledVector> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back({vector(i, classes), labels_[i]});
  return out;
}

namespace {

Metrics mean_metrics(const std::vector<CvReading>& readings) {
  Metrics mean;
  if (readings.empty()) return mean;
  for (const auto& r : readings) {
    mean.accuracy += r.metrics.accuracy;
    mean.precision += r.metrics.precision;
    mean.recall += r.metrics.recall;
    mean.f1 += r.metrics.f1;
    mean.precision_undefined |= r.metrics.precision_undefined;
    mean.recall_undefined |= r.metrics.recall_undefined;
    mean.f1_undefined |= r.metrics.f1_undefined;
  }
  const double n = static_cast<double>(readings.size());
  mean.accuracy /= n;
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  return mean;
}

}  // namespace

CvReport cross_validate(const FeatureTable& data, FeatureClassSet classes,
                        const CvOptions& options) {
  if (classes.empty()) throw ValidationError("cross-validation needs at least one feature class");
  if (options.repeats < 1) throw ValidationError("cross-validation needs at least one repeat");
  const auto vectors = data.labeled_vectors(classes);
  const auto labels = data.labels();

  std::vector<std::vector<int>> assignments;
  for (int r = 0; r < options.repeats; ++r) {
    assignments.push_back(stratified_folds(labels, options.folds, options.seed + static_cast<std::uint64_t>(r)));
  }

  const auto tasks = static_cast<std::size_t>(options.repeats * options.folds);
  std::vector<CvReading> readings(tasks);
  parallel_for(tasks, options.threads, [&](std::size_t task) {
    const int repeat = static_cast<int>(task / static_cast<std::size_t>(options.folds));
    const int fold = static_cast<int>(task % static_cast<std::size_t>(options.folds));
    const auto& fold_of = assignments[static_cast<std::size_t>(repeat)];
    std::vector<LabeledVector> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (fold_of[i] == fold) {
        test.push_back(i);
      } else {
        train.push_back(vectors[i]);
      }
    }
    const auto model = train_naive_bayes(train, options.alpha);
    std::vector<Label> predicted, truth;
    for (auto i : test) {
      predicted.push_back(model.predict(vectors[i].vector).label);
      truth.push_back(vectors[i].label);
    }
    readings[task] = CvReading{repeat, fold, test.size(), compute_metrics(predicted, truth)};
  });

  CvReport report;
  report.classes = classes;
  report.seed = options.seed;
  report.repeats = options.repeats;
  report.folds = options.folds;
  report.readings = std::move(readings);
  report.mean = mean_metrics(report.readings);
  return report;
}

CombinationReport enumerate_combinations(const FeatureTable& data, const CvOptions& options) {
  CombinationReport report;
  const auto available = data.available();
  for (auto c : kAllFeatureClasses) {
    if (!available.contains(c)) report.unavailable.push_back(c);
  }
  std::vector<FeatureClassSet> subsets;
  for (unsigned mask = 1; mask < 64; ++mask) {
    const FeatureClassSet s(static_cast<std::uint8_t>(mask));
    if (s.subset_of(available)) subsets.push_back(s);
  }
  if (subsets.empty()) throw ValidationError("no feature class is available for every instance");

  CvOptions inner = options;
  inner.threads = 1;
  report.entries.resize(subsets.size());
  parallel_for(subsets.size(), options.threads, [&](std::size_t i) {
    report.entries[i] = CombinationEntry{subsets[i], cross_validate(data, subsets[i], inner)};
  });

  report.ranking = iota_indices(report.entries.size());
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](std::size_t a, std::size_t b) {
    return report.entries[a].report.mean.f1 > report.entries[b].report.mean.f1;
  });
  return report;
}

ImbalanceSweep imbalance_sweep(std::span<const TaggedTweet> ir, std::span<const TaggedTweet> or_pool,
                               FeatureClassSet classes, const ImbalanceOptions& options) {
  if (!(options.test_fraction > 0.0 && options.test_fraction < 1.0)) {
    throw ValidationError("test fraction must lie strictly between 0 and 1");
  }
  if (options.ratios.empty()) throw ValidationError("imbalance sweep needs at least one ratio");
  ImbalanceSweep sweep;
  sweep.classes = classes;
  double auc_sum = 0.0;
  for (std::size_t r = 0; r < options.ratios.size(); ++r) {
    const double ratio = options.ratios[r];
    const std::uint64_t seed = options.seed + r;
    const auto picked = ratio_indices(ir.size(), or_pool.size(), ratio, seed, options.max_instances);

    // Stratified train/test split; each side keeps at least one of each label.
    Rng rng(seed ^ 0x9E3779B97F4A7C15ull);
    auto split = [&](std::vector<std::size_t> idx) {
      shuffle_in_place(idx, rng);
      auto n_test = static_cast<std::size_t>(std::llround(options.test_fraction * idx.size()));
      n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
      std::vector<std::size_t> test(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
      std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
      return std::pair{std::move(train), std::move(test)};
    };
    const auto [ir_train, ir_test] = split(picked.ir);
    const auto [or_train, or_test] = split(picked.or_pool);

    auto vec = [&](const TaggedTweet& t) {
      return vectorize(t, classes, MissingLayerPolicy::Fail).vector;
    };
    std::vector<LabeledVector> train;
    for (auto i : ir_train) train.push_back({vec(ir[i]), Label::IR});
    for (auto i : or_train) train.push_back({vec(or_pool[i]), Label::OR});
    const auto model = train_naive_bayes(train, options.alpha);

    std::vector<double> scores;
    std::vector<Label> truth;
    for (auto i : ir_test) {
      scores.push_back(model.predict(vec(ir[i])).score);
      truth.push_back(Label::IR);
    }
    for (auto i : or_test) {
      scores.push_back(model.predict(vec(or_pool[i])).score);
      truth.push_back(Label::OR);
    }
    ImbalancePoint point{ratio,         ir_train.size(), or_train.size(),
                         ir_test.size(), or_test.size(),  roc_auc(scores, truth)};
    auc_sum += point.auc;
    sweep.points.push_back(point);
  }
  sweep.summary_auc = auc_sum / static_cast<double>(sweep.points.size());
  return sweep;
}

std::vector<CloudEntry> bigram_cloud(std::span<const TaggedTweet> tweets, int k) {
  if (k <= 0) throw std::invalid_argument("bigram cloud size must be positive");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : tweets) {
    const auto& toks = t.tokens();
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) ++counts[toks[i] + " " + toks[i + 1]];
  }
  std::vector<CloudEntry> cloud;
  cloud.reserve(counts.size());
  for (const auto& [bigram, n] : counts) cloud.push_back({bigram, n});
  std::stable_sort(cloud.begin(), cloud.end(),
                   [](const CloudEntry& a, const CloudEntry& b) { return a.count > b.count; });
  if (cloud.size() > static_cast<std::size_t>(k)) cloud.resize(static_cast<std::size_t>(k));
  return cloud;
}

namespace {

json metrics_json(const Metrics& m) {
  return json{{"accuracy", m.accuracy},
              {"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"precision_undefined", m.precision_undefined},
              {"recall_undefined", m.recall_undefined},
              {"f1_undefined", m.f1_undefined}};
}

std::string metrics_csv(const Metrics& m) {
  return format_double(m.accuracy) + "," + format_double(m.precision) + "," +
         format_double(m.recall) + "," + format_double(m.f1) + "," +
         (m.precision_undefined ? "1" : "0") + "," + (m.recall_undefined ? "1" : "0") + "," +
         (m.f1_undefined ? "1" : "0");
}

json cv_json(const CvReport& r) {
  json readings = json::array();
  for (const auto& x : r.readings) {
    json row = metrics_json(x.metrics);
    row["repeat"] = x.repeat;
    row["fold"] = x.fold;
    row["test_size"] = x.test_size;
    readings.push_back(std::move(row));
  }
  return json{{"classes", r.classes.name()}, {"seed", r.seed},         {"repeats", r.repeats},
              {"folds", r.folds},            {"readings", readings},   {"mean", metrics_json(r.mean)}};
}

}  // namespace

std::string metrics_csv_header() {
  return "accuracy,precision,recall,f1,precision_undefined,recall_undefined,f1_undefined";
}

std::string cv_report_csv(const CvReport& report) {
  std::string out = "classes,repeat,fold,test_size," + metrics_csv_header() + "\n";
  for (const auto& r : report.readings) {
    out += report.classes.name() + "," + std::to_string(r.repeat) + "," + std::to_string(r.fold) +
           "," + std::to_string(r.test_size) + "," + metrics_csv(r.metrics) + "\n";
  }
  return out;
}

std::string cv_report_json(const CvReport& report) {
  json doc = cv_json(report);
  doc["schema_version"] = 1;
  return doc.dump(1) + "\n";
}

std::string combination_report_csv(const CombinationReport& report) {
  std::string out = "rank,classes,class_count," + metrics_csv_header() + "\n";
  for (std::size_t rank = 0; rank < report.ranking.size(); ++rank) {
    const auto& e = report.entries[report.ranking[rank]];
    out += std::to_string(rank + 1) + "," + e.classes.name() + "," +
           std::to_string(e.classes.size()) + "," + metrics_csv(e.report.mean) + "\n";
  }
  return out;
}

std::string combination_report_json(const CombinationReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) entries.push_back(cv_json(e.report));
  json ranking = json::array();
  for (auto i : report.ranking) ranking.push_back(report.entries[i].classes.name());
  json unavailable = json::array();
  for (auto c : report.unavailable) unavailable.push_back(feature_class_name(c));
  json doc{{"schema_version", 1},
           {"entries", entries},
           {"ranking", ranking},
           {"unavailable_classes", unavailable}};
  return doc.dump(1) + "\n";
}

std::string imbalance_sweep_csv(const ImbalanceSweep& sweep) {
  std::string out = "classes,ratio,train_ir,train_or,test_ir,test_or,auc\n";
  for (const auto& p : sweep.points) {
    out += sweep.classes.name() + "," + format_double(p.ratio) + "," + std::to_string(p.train_ir) +
           "," + std::to_string(p.train_or) + "," + std::to_string(p.test_ir) + "," +
           std::to_string(p.test_or) + "," + format_double(p.auc) + "\n";
  }
  return out;
}

std::string imbalance_sweep_json(const ImbalanceSweep& sweep) {
  json points = json::array();
  for (const auto& p : sweep.points) {
    points.push_back(json{{"ratio", p.ratio},
                          {"train_ir", p.train_ir},
                          {"train_or", p.train_or},
                          {"test_ir", p.test_ir},
                          {"test_or", p.test_or},
                          {"auc", p.auc}});
  }
  json doc{{"schema_version", 1},
           {"classes", sweep.classes.name()},
           {"points", points},
           {"summary_auc", sweep.summary_auc}};
  return doc.dump(1) + "\n";
}

std::string bigram_cloud_json(const std::vector<CloudEntry>& cloud) {
  json arr = json::array();
  for (const auto& e : cloud) arr.push_back(json{{"bigram", e.bigram}, {"count", e.count}});
  return arr.dump(1) + "\n";
}

}  // namespace crisisloc
