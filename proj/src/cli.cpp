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

#include "crisisloc/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "crisisloc/config.hpp"
#include "crisisloc/divergence.hpp"
#include "crisisloc/eval.hpp"
#include "crisisloc/ingest.hpp"
#include "crisisloc/model.hpp"
#include "crisisloc/text.hpp"
#include "json.hpp"

namespace crisisloc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string output_dir;
};

struct Context {
  RunConfig config;
  fs::path out;
  std::vector<std::string> warnings;
  std::ostream* stdout_ = nullptr;

  fs::path path(std::string_view name) const { return out / std::string(name); }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << content;
  if (!f) throw IoError("write failed for " + path.string());
}

void write_tweets(const fs::path& path, const std::vector<RawTweet>& tweets) {
  std::string content;
  for (const auto& t : tweets) content += tweet_to_json_line(t) + "\n";
  write_file(path, content);
}

void emit_summary(Context& ctx, std::string_view name, json summary) {
  summary["schema_version"] = kSchemaVersion;
  summary["warnings"] = ctx.warnings;
  const std::string text = summary.dump(1) + "\n";
  write_file(ctx.path(std::string(name) + "_summary.json"), text);
  *ctx.stdout_ << text;
}

std::string add_warnings(const std::string& report, const std::vector<std::string>& warnings) {
  json doc = json::parse(report);
  doc["warnings"] = warnings;
  return doc.dump(1) + "\n";
}

void note_skipped(Context& ctx, const fs::path& file, const std::vector<SkippedRecord>& skipped) {
  for (const auto& s : skipped) {
    ctx.warnings.push_back(file.filename().string() + " line " + std::to_string(s.line) + ": " +
                           s.reason);
  }
}

RecordSet read_partition(Context& ctx, std::string_view name) {
  const fs::path p = ctx.path(name);
  if (!fs::exists(p)) throw IoError(p.string() + " not found; run the partition command first");
  auto records = read_records(p);
  note_skipped(ctx, p, records.skipped);
  return records;
}

std::vector<TaggedTweet> prepare_all(Context& ctx, const std::vector<RawTweet>& raw) {
  std::vector<TaggedTweet> out;
  out.reserve(raw.size());
  for (const auto& t : raw) {
    try {
      out.push_back(prepare_tweet(t, ctx.config.fill_ark_tags));
    } catch (const AlignmentError& e) {
      ctx.warnings.push_back(std::string("skipped: ") + e.what());
    }
  }
  return out;
}

struct Pools {
  std::vector<TaggedTweet> ir;
  std::vector<TaggedTweet> or_pool;
};

Pools load_pools(Context& ctx) {
  Pools p;
  p.ir = prepare_all(ctx, read_partition(ctx, "ir.jsonl").tweets);
  p.or_pool = prepare_all(ctx, read_partition(ctx, "or.jsonl").tweets);
  if (p.ir.empty()) throw ValidationError("IR partition is empty");
  if (p.or_pool.empty()) throw ValidationError("OR partition is empty");
  return p;
}

struct Sample {
  std::vector<TaggedTweet> tweets;
  std::vector<Label> labels;
};

Sample sample_pools(Context& ctx, const Pools& pools, bool balance) {
  Sample s;
  if (balance) {
    auto b = balanced_sample<TaggedTweet>(pools.ir, pools.or_pool, ctx.config.seed);
    for (auto& w : b.warnings) ctx.warnings.push_back(std::move(w));
    for (auto& item : b.items) {
      s.tweets.push_back(std::move(item.item));
      s.labels.push_back(item.label);
    }
    return s;
  }
  for (const auto& t : pools.ir) {
    s.tweets.push_back(t);
    s.labels.push_back(Label::IR);
  }
  for (const auto& t : pools.or_pool) {
    s.tweets.push_back(t);
    s.labels.push_back(Label::OR);
  }
  return s;
}

// Narrows the configured classes to those every tweet can supply.
FeatureClassSet usable_classes(Context& ctx, std::span<const TaggedTweet> tweets,
                               FeatureClassSet wanted) {
  FeatureClassSet usable;
  for (auto c : wanted.members()) {
    const bool ok = std::all_of(tweets.begin(), tweets.end(),
                                [&](const TaggedTweet& t) { return class_available(t, c); });
    if (ok) {
      usable.insert(c);
    } else {
      ctx.warnings.push_back(std::string(feature_class_name(c)) +
                             " dropped: tag layers missing on some tweets");
    }
  }
  if (usable.empty()) throw ValidationError("none of " + wanted.name() + " is available on this data");
  return usable;
}

std::vector<LabeledVector> to_vectors(const Sample& s, FeatureClassSet classes) {
  std::vector<LabeledVector> out;
  out.reserve(s.tweets.size());
  for (std::size_t i = 0; i < s.tweets.size(); ++i) {
    out.push_back({vectorize(s.tweets[i], classes, MissingLayerPolicy::Fail).vector, s.labels[i]});
  }
  return out;
}

void cmd_partition(Context& ctx) {
  const auto& c = ctx.config;
  auto corpus = load_corpus(c.input, c.primary_region().region, c.crisis, c.pre_crisis);
  note_skipped(ctx, c.input, corpus.skipped);
  for (const auto& id : corpus.misaligned_tags) {
    ctx.warnings.push_back("tweet " + id + ": tag layer length differs from token count");
  }
  const std::map<PartitionLabel, std::string> files = {
      {PartitionLabel::IR, "ir.jsonl"},
      {PartitionLabel::OR, "or.jsonl"},
      {PartitionLabel::PC_IR, "pc_ir.jsonl"},
      {PartitionLabel::PC_OR, "pc_or.jsonl"},
      {PartitionLabel::UNASSIGNED, "unassigned.jsonl"}};
  json counts = json::object();
  for (auto label : kAllPartitions) {
    write_tweets(ctx.path(files.at(label)), corpus.group(label));
    counts[std::string(partition_name(label))] = corpus.count(label);
  }
  write_tweets(ctx.path("unlabeled.jsonl"), corpus.unlabeled);
  counts["unlabeled"] = corpus.unlabeled.size();

  json summary{{"command", "partition"},
               {"input", c.input.string()},
               {"lines", corpus.lines},
               {"skipped", corpus.skipped.size()},
               {"duplicate_ids", corpus.duplicate_ids},
               {"counts", counts}};
  const auto ratio = corpus.imbalance_ratio();
  summary["imbalance_ratio"] = ratio ? json(*ratio) : json(nullptr);
  emit_summary(ctx, "partition", std::move(summary));
}

void write_matrix(Context& ctx, const std::string& stem, const DivergenceMatrix& m) {
  write_file(ctx.path(stem + ".csv"), matrix_to_csv(m));
  DivergenceMatrix normalized = m;
  normalized.values = m.normalized_values;
  write_file(ctx.path(stem + "_normalized.csv"), matrix_to_csv(normalized));
  write_file(ctx.path(stem + ".json"), matrix_to_json(m));
  for (const auto& w : m.warnings) ctx.warnings.push_back(stem + ": " + w);
}

void cmd_divergence(Context& ctx, const std::string& mode) {
  const auto& c = ctx.config;
  auto records = read_records(c.input);
  note_skipped(ctx, c.input, records.skipped);
  json summary{{"command", "divergence"}, {"mode", mode}};

  if (mode == "hourly") {
    if (!c.hourly_day) throw ValidationError("hourly divergence needs divergence.day in the config");
    HourlyOptions opts{*c.hourly_day, c.first_hour, c.last_hour, c.timezone_offset};
    const auto m = hourly_divergence_matrix(records.tweets, c.primary_region().region, opts);
    write_matrix(ctx, "divergence_hourly", m);
    summary["labels"] = m.labels;
    emit_summary(ctx, "divergence", std::move(summary));
    return;
  }

  auto run = [&](const TimeWindow& window, const std::string& stem) {
    std::vector<std::pair<std::string, std::vector<TaggedTweet>>> groups;
    for (const auto& r : c.regions) groups.emplace_back(r.name, std::vector<TaggedTweet>{});
    for (const auto& t : records.tweets) {
      if (!t.geo || !window.contains(t.created_at)) continue;
      for (std::size_t i = 0; i < c.regions.size(); ++i) {
        if (c.regions[i].region.contains(*t.geo)) {
          groups[i].second.push_back(attach_tags(t.id, tokenize(t.text)));
        }
      }
    }
    const auto m = regional_divergence_matrix(groups);
    write_matrix(ctx, stem, m);
    summary[stem] = m.labels;
  };
  run(c.crisis, "divergence_regional_crisis");
  if (c.pre_crisis) run(*c.pre_crisis, "divergence_regional_pre_crisis");
  emit_summary(ctx, "divergence", std::move(summary));
}

void cmd_train(Context& ctx, bool no_balance) {
  const auto& c = ctx.config;
  const auto pools = load_pools(ctx);
  const bool balance = c.balance && !no_balance;
  const auto sample = sample_pools(ctx, pools, balance);
  const auto classes = usable_classes(ctx, sample.tweets, c.feature_classes);
  const auto data = to_vectors(sample, classes);

  ModelFile file{NaiveBayesModel{}, classes};
  std::size_t vocabulary = 0;
  if (c.model_kind == ModelKind::NaiveBayes) {
    auto m = train_naive_bayes(data, c.alpha);
    vocabulary = m.vocabulary().size();
    file.model = std::move(m);
  } else {
    auto m = train_logreg(data, c.logreg);
    vocabulary = m.features().size();
    if (!m.converged()) ctx.warnings.push_back("logistic regression hit max_epochs before converging");
    file.model = std::move(m);
  }
  write_file(ctx.path("model.json"), model_to_json(file));

  const auto n_ir = static_cast<std::size_t>(std::count(sample.labels.begin(), sample.labels.end(), Label::IR));
  emit_summary(ctx, "train",
               json{{"command", "train"},
                    {"model_kind", model_kind_name(c.model_kind)},
                    {"feature_classes", classes.name()},
                    {"balanced", balance},
                    {"seed", c.seed},
                    {"vocabulary_size", vocabulary},
                    {"class_counts", {{"IR", n_ir}, {"OR", sample.labels.size() - n_ir}}}});
}

void cmd_evaluate(Context& ctx, const std::string& mode) {
  const auto& c = ctx.config;
  const auto pools = load_pools(ctx);
  CvOptions cv{c.cv_repeats, c.cv_folds, c.seed, c.alpha, c.threads};
  json summary{{"command", "evaluate"}, {"mode", mode}, {"seed", c.seed}};

  if (mode == "imbalance") {
    std::vector<TaggedTweet> all = pools.ir;
    all.insert(all.end(), pools.or_pool.begin(), pools.or_pool.end());
    const auto classes = usable_classes(ctx, all, c.feature_classes);
    ImbalanceOptions opts{c.imbalance_ratios, c.test_fraction, c.alpha, c.seed, c.max_instances};
    const auto sweep = imbalance_sweep(pools.ir, pools.or_pool, classes, opts);
    write_file(ctx.path("imbalance.csv"), imbalance_sweep_csv(sweep));
    write_file(ctx.path("imbalance.json"), add_warnings(imbalance_sweep_json(sweep), ctx.warnings));
    summary["feature_classes"] = classes.name();
    summary["summary_auc"] = sweep.summary_auc;
    emit_summary(ctx, "evaluate", std::move(summary));
    return;
  }

  const auto sample = sample_pools(ctx, pools, c.balance);
  summary["instances"] = sample.tweets.size();
  if (mode == "single") {
    const auto classes = usable_classes(ctx, sample.tweets, c.feature_classes);
    const auto table = FeatureTable::build(sample.tweets, sample.labels, classes, c.threads);
    const auto report = cross_validate(table, classes, cv);
    write_file(ctx.path("cv_report.csv"), cv_report_csv(report));
    write_file(ctx.path("cv_report.json"), add_warnings(cv_report_json(report), ctx.warnings));
    summary["feature_classes"] = classes.name();
    summary["readings"] = report.readings.size();
    summary["mean_f1"] = report.mean.f1;
  } else {
    const auto table = FeatureTable::build(sample.tweets, sample.labels, FeatureClassSet::all(), c.threads);
    const auto report = enumerate_combinations(table, cv);
    for (auto cls : report.unavailable) {
      ctx.warnings.push_back(std::string(feature_class_name(cls)) +
                             " excluded: tag layers missing on some tweets");
    }
    write_file(ctx.path("combinations.csv"), combination_report_csv(report));
    write_file(ctx.path("combinations.json"), add_warnings(combination_report_json(report), ctx.warnings));
    summary["combinations"] = report.entries.size();
    summary["best"] = report.entries[report.ranking.front()].classes.name();
  }
  emit_summary(ctx, "evaluate", std::move(summary));
}

ModelFile read_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model " + path.string() + "; run the train command first");
  std::ostringstream text;
  text << in.rdbuf();
  return model_from_json(text.str());
}

void cmd_classify(Context& ctx, const std::string& model_path, const std::string& input_path) {
  const auto& c = ctx.config;
  const auto file = read_model(model_path.empty() ? ctx.path("model.json") : fs::path(model_path));
  fs::path input = ctx.path("unlabeled.jsonl");
  if (!input_path.empty()) {
    input = input_path;
  } else if (c.unlabeled_input) {
    input = *c.unlabeled_input;
  }
  auto records = read_records(input);
  note_skipped(ctx, input, records.skipped);

  std::string lines;
  std::size_t n_ir = 0, n = 0;
  for (const auto& t : records.tweets) {
    TaggedTweet tagged;
    try {
      tagged = prepare_tweet(t, c.fill_ark_tags);
    } catch (const AlignmentError& e) {
      ctx.warnings.push_back(std::string("skipped: ") + e.what());
      continue;
    }
    const auto v = vectorize(tagged, file.feature_classes, MissingLayerPolicy::Fail).vector;
    const auto p = predict(file.model, v);
    json row = json::parse(tweet_to_json_line(t));
    row["label"] = label_name(p.label);
    row["score"] = p.score;
    lines += row.dump() + "\n";
    n_ir += p.label == Label::IR;
    ++n;
  }
  write_file(ctx.path("classified.jsonl"), lines);
  emit_summary(ctx, "classify",
               json{{"command", "classify"},
                    {"input", input.string()},
                    {"feature_classes", file.feature_classes.name()},
                    {"classified", n},
                    {"classified_ir", n_ir},
                    {"classified_or", n - n_ir}});
}

void cmd_top_features(Context& ctx, int k) {
  const auto& c = ctx.config;
  const auto pools = load_pools(ctx);
  const auto sample = sample_pools(ctx, pools, c.balance);
  const auto classes = usable_classes(ctx, sample.tweets, c.feature_classes);
  const auto model = train_logreg(to_vectors(sample, classes), c.logreg);
  if (!model.converged()) ctx.warnings.push_back("logistic regression hit max_epochs before converging");

  std::string csv = "class,rank,feature,weight\n";
  for (auto cls : classes.members()) {
    const auto top = top_features(model, k, cls);
    for (std::size_t r = 0; r < top.size(); ++r) {
      std::string key = top[r].id.key;
      if (key.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : key) {
          if (ch == '"') quoted += '"';
          quoted += ch;
        }
        key = quoted + "\"";
      }
      csv += std::string(feature_class_name(cls)) + "," + std::to_string(r + 1) + "," + key + "," +
             format_double(top[r].weight) + "\n";
    }
  }
  write_file(ctx.path("top_features.csv"), csv);
  emit_summary(ctx, "top_features",
               json{{"command", "top-features"},
                    {"k", k},
                    {"feature_classes", classes.name()},
                    {"epochs_run", model.epochs_run()},
                    {"converged", model.converged()}});
}

void cmd_cloud(Context& ctx, int k, const std::string& classified_path) {
  const auto geo_ir = prepare_all(ctx, read_partition(ctx, "ir.jsonl").tweets);
  const fs::path classified = classified_path.empty() ? ctx.path("classified.jsonl") : fs::path(classified_path);
  std::ifstream in(classified, std::ios::binary);
  if (!in) throw IoError("cannot open " + classified.string() + "; run the classify command first");

  std::vector<TaggedTweet> combined = geo_ir;
  std::size_t added = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json row = json::parse(line);
      if (row.value("label", "") != "IR") continue;
      combined.push_back(prepare_tweet(parse_tweet_record(line), ctx.config.fill_ark_tags));
      ++added;
    } catch (const std::exception& e) {
      ctx.warnings.push_back(classified.filename().string() + " line " + std::to_string(lineno) +
                             ": " + e.what());
    }
  }
  write_file(ctx.path("cloud_geotagged.json"), bigram_cloud_json(bigram_cloud(geo_ir, k)));
  write_file(ctx.path("cloud_combined.json"), bigram_cloud_json(bigram_cloud(combined, k)));
  emit_summary(ctx, "cloud",
               json{{"command", "cloud"},
                    {"k", k},
                    {"geotagged_ir", geo_ir.size()},
                    {"model_added", added}});
}

void cmd_tag(Context& ctx, const std::string& input_path) {
  const fs::path input = input_path.empty() ? ctx.config.input : fs::path(input_path);
  auto records = read_records(input);
  note_skipped(ctx, input, records.skipped);
  std::size_t filled = 0;
  std::string lines;
  for (auto& t : records.tweets) {
    if (!t.ark_tags) {
      const auto tokens = tokenize(t.text);
      t.ark_tags = fallback_ark_tag(tokens);
      ++filled;
    }
    lines += tweet_to_json_line(t) + "\n";
  }
  write_file(ctx.path("tagged.jsonl"), lines);
  emit_summary(ctx, "tag",
               json{{"command", "tag"},
                    {"input", input.string()},
                    {"records", records.tweets.size()},
                    {"filled", filled}});
}

void cmd_features(Context& ctx, const std::string& input_path) {
  const fs::path input = input_path.empty() ? ctx.config.input : fs::path(input_path);
  auto records = read_records(input);
  note_skipped(ctx, input, records.skipped);
  std::map<FeatureClass, std::size_t> missing;
  std::string lines;
  for (const auto& tagged : prepare_all(ctx, records.tweets)) {
    auto r = vectorize(tagged, ctx.config.feature_classes);
    for (auto cls : r.skipped) ++missing[cls];
    json features = json::object();
    for (const auto& [id, n] : r.vector.counts()) features[id.qualified()] = n;
    lines += json{{"id", tagged.id()}, {"features", features}}.dump() + "\n";
  }
  for (const auto& [cls, n] : missing) {
    ctx.warnings.push_back(std::string(feature_class_name(cls)) + " skipped on " + std::to_string(n) +
                           " tweets with missing tag layers");
  }
  write_file(ctx.path("features.jsonl"), lines);
  emit_summary(ctx, "features",
               json{{"command", "features"},
                    {"input", input.string()},
                    {"feature_classes", ctx.config.feature_classes.name()},
                    {"records", records.tweets.size()}});
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inside-region crisis tweet classification"};
  app.name("crisisloc");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "Run configuration (JSON)")->required();
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { g.seed = v; },
                                         "Override the configured seed");
  app.add_option_function<int>("--threads", [&](const int& v) { g.threads = v; },
                               "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--output-dir", g.output_dir, "Override the configured output directory");

  auto* partition = app.add_subcommand("partition", "Split geotagged tweets into IR/OR/PC-IR/PC-OR");

  std::string divergence_mode = "hourly";
  auto* divergence = app.add_subcommand("divergence", "Jensen-Shannon divergence matrices");
  divergence->add_option("mode", divergence_mode, "hourly or regional")
      ->check(CLI::IsMember({"hourly", "regional"}));

  bool no_balance = false;
  auto* train = app.add_subcommand("train", "Train a model on the IR/OR partitions");
  train->add_flag("--no-balance", no_balance, "Train on all partition tweets without downsampling");

  std::string evaluate_mode = "single";
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validation and imbalance reports");
  evaluate->add_option("mode", evaluate_mode, "single, combos or imbalance")
      ->check(CLI::IsMember({"single", "combos", "imbalance"}));

  std::string model_path, classify_input;
  auto* classify = app.add_subcommand("classify", "Label non-geotagged tweets with a trained model");
  classify->add_option("--model", model_path, "Model file (default: <output-dir>/model.json)");
  classify->add_option("--input", classify_input, "Tweets to classify (JSON Lines)");

  std::optional<int> top_k;
  auto* top = app.add_subcommand("top-features", "Highest-weighted logistic regression features per class");
  top->add_option_function<int>("-k,--k", [&](const int& v) { top_k = v; }, "Features per class")
      ->check(CLI::PositiveNumber);

  std::optional<int> cloud_k;
  std::string classified_path;
  auto* cloud = app.add_subcommand("cloud", "Bigram clouds before and after adding classified tweets");
  cloud->add_option_function<int>("-k,--k", [&](const int& v) { cloud_k = v; }, "Bigrams per cloud")
      ->check(CLI::PositiveNumber);
  cloud->add_option("--classified", classified_path, "Output of the classify command");

  std::string tag_input;
  auto* tag = app.add_subcommand("tag", "Fill missing ARK tags with the rule-based tagger");
  tag->add_option("--input", tag_input, "Tweets to tag (default: configured input)");

  std::string features_input;
  auto* features = app.add_subcommand("features", "Dump feature vectors as JSON Lines");
  features->add_option("--input", features_input, "Tweets to vectorize (default: configured input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    Context ctx;
    ctx.stdout_ = &out;
    ctx.config = load_config(g.config);
    if (g.seed) ctx.config.seed = *g.seed;
    if (g.threads) ctx.config.threads = *g.threads;
    if (!g.output_dir.empty()) ctx.config.output_dir = g.output_dir;
    validate_config(ctx.config);
    ctx.out = ctx.config.output_dir;
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw IoError("cannot create " + ctx.out.string() + ": " + ec.message());

    if (*partition) {
      cmd_partition(ctx);
    } else if (*divergence) {
      cmd_divergence(ctx, divergence_mode);
    } else if (*train) {
      cmd_train(ctx, no_balance);
    } else if (*evaluate) {
      cmd_evaluate(ctx, evaluate_mode);
    } else if (*classify) {
      cmd_classify(ctx, model_path, classify_input);
    } else if (*top) {
      cmd_top_features(ctx, top_k.value_or(ctx.config.top_k));
    } else if (*cloud) {
      cmd_cloud(ctx, cloud_k.value_or(ctx.config.cloud_k), classified_path);
    } else if (*tag) {
      cmd_tag(ctx, tag_input);
    } else if (*features) {
      cmd_features(ctx, features_input);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace crisisloc
