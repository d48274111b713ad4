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

#include <string>

#include "crisisloc/model.hpp"
#include "json.hpp"

namespace crisisloc {

using nlohmann::json;

namespace {

json class_list(FeatureClassSet classes) {
  json out = json::array();
  for (auto c : classes.members()) out.push_back(feature_class_name(c));
  return out;
}

json feature_list(const std::vector<FeatureId>& features) {
  json out = json::array();
  for (const auto& f : features) out.push_back(f.qualified());
  return out;
}

std::vector<FeatureId> parse_features(const json& arr) {
  std::vector<FeatureId> out;
  out.reserve(arr.size());
  for (const auto& f : arr) out.push_back(FeatureId::parse_qualified(f.get<std::string>()));
  return out;
}

json nb_to_json(const NaiveBayesModel& m) {
  json doc;
  doc["alpha"] = m.alpha();
  doc["class_counts"] = {{"IR", m.document_count(Label::IR)}, {"OR", m.document_count(Label::OR)}};
  doc["class_log_priors"] = {{"IR", m.log_prior(Label::IR)}, {"OR", m.log_prior(Label::OR)}};
  doc["vocabulary"] = feature_list(m.vocabulary());
  const auto ir = m.log_likelihoods(Label::IR);
  const auto orr = m.log_likelihoods(Label::OR);
  doc["feature_log_likelihood"] = {{"IR", std::vector<double>(ir.begin(), ir.end())},
                                   {"OR", std::vector<double>(orr.begin(), orr.end())}};
  return doc;
}

json logreg_to_json(const LogisticRegressionModel& m) {
  json doc;
  doc["bias"] = m.bias();
  doc["features"] = feature_list(m.features());
  doc["weights"] = std::vector<double>(m.weights().begin(), m.weights().end());
  const auto& p = m.params();
  doc["hyperparameters"] = {{"learning_rate", p.learning_rate},
                            {"l2", p.l2},
                            {"max_epochs", p.max_epochs},
                            {"tolerance", p.tolerance}};
  doc["epochs_run"] = m.epochs_run();
  doc["converged"] = m.converged();
  return doc;
}

}  // namespace

std::string model_to_json(const ModelFile& file) {
  json doc = std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        json body;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          body = nb_to_json(m);
          body["kind"] = "nb";
        } else {
          body = logreg_to_json(m);
          body["kind"] = "logreg";
        }
        return body;
      },
      file.model);
  doc["version"] = kModelFormatVersion;
  doc["feature_classes"] = class_list(file.feature_classes);
  return doc.dump(1) + "\n";
}

ModelFile model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw ParseError("unsupported model file version " + doc.at("version").dump());
    }
    FeatureClassSet classes;
    for (const auto& c : doc.at("feature_classes")) {
      classes.insert(parse_feature_class(c.get<std::string>()));
    }
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "nb") {
      const auto& ll = doc.at("feature_log_likelihood");
      auto model = NaiveBayesModel::from_tables(
          doc.at("alpha").get<double>(),
          {doc.at("class_counts").at("IR").get<std::size_t>(),
           doc.at("class_counts").at("OR").get<std::size_t>()},
          {doc.at("class_log_priors").at("IR").get<double>(),
           doc.at("class_log_priors").at("OR").get<double>()},
          parse_features(doc.at("vocabulary")),
          {ll.at("IR").get<std::vector<double>>(), ll.at("OR").get<std::vector<double>>()});
      return ModelFile{std::move(model), classes};
    }
    if (kind == "logreg") {
      const auto& hp = doc.at("hyperparameters");
      LogRegParams params{hp.at("learning_rate").get<double>(), hp.at("l2").get<double>(),
                          hp.at("max_epochs").get<int>(), hp.at("tolerance").get<double>()};
      auto model = LogisticRegressionModel::from_parts(
          parse_features(doc.at("features")), doc.at("weights").get<std::vector<double>>(),
          doc.at("bias").get<double>(), params, doc.at("epochs_run").get<int>(),
          doc.at("converged").get<bool>());
      return ModelFile{std::move(model), classes};
    }
    throw ParseError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace crisisloc
