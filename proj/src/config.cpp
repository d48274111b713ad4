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

#include "crisisloc/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace crisisloc {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view model_kind_name(ModelKind kind) {
  return kind == ModelKind::NaiveBayes ? "nb" : "logreg";
}

const NamedRegion& RunConfig::primary_region() const {
  for (const auto& r : regions) {
    if (r.primary) return r;
  }
  throw ValidationError("config has no primary region");
}

namespace {

void require_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get(const json& obj, const char* key, std::string_view where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
void get_opt(const json& obj, const char* key, std::string_view where, T& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

TimeWindow parse_window(const json& obj, std::string_view where) {
  require_keys(obj, where, {"start", "end"});
  try {
    return TimeWindow::make(parse_rfc3339(get<std::string>(obj, "start", where)),
                            parse_rfc3339(get<std::string>(obj, "end", where)));
  } catch (const ParseError& e) {
    throw ValidationError(std::string(where) + ": " + e.what());
  }
}

std::chrono::year_month_day parse_day(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    throw ValidationError("divergence.day must be YYYY-MM-DD, got '" + text + "'");
  }
  const std::chrono::year_month_day day{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!day.ok()) throw ValidationError("divergence.day is not a calendar date: " + text);
  return day;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(doc, "config",
               {"schema_version", "input", "unlabeled_input", "output_dir", "seed", "threads",
                "timezone_offset_minutes", "regions", "windows", "feature_classes", "model",
                "balance", "fill_ark_tags", "cv", "imbalance", "divergence", "top_k", "cloud_k"});
  if (doc.contains("schema_version") && doc["schema_version"] != 1) {
    throw ValidationError("unsupported config schema_version");
  }

  RunConfig c;
  c.input = resolve(base_dir, get<std::string>(doc, "input", "config"));
  if (doc.contains("unlabeled_input")) {
    c.unlabeled_input = resolve(base_dir, get<std::string>(doc, "unlabeled_input", "config"));
  }
  if (doc.contains("output_dir")) {
    c.output_dir = resolve(base_dir, get<std::string>(doc, "output_dir", "config"));
  }
  get_opt(doc, "seed", "config", c.seed);
  get_opt(doc, "threads", "config", c.threads);
  get_opt(doc, "balance", "config", c.balance);
  get_opt(doc, "fill_ark_tags", "config", c.fill_ark_tags);
  get_opt(doc, "top_k", "config", c.top_k);
  get_opt(doc, "cloud_k", "config", c.cloud_k);
  int offset = 0;
  get_opt(doc, "timezone_offset_minutes", "config", offset);
  if (offset < -14 * 60 || offset > 14 * 60) throw ValidationError("timezone offset out of range");
  c.timezone_offset = std::chrono::minutes{offset};

  const json& regions = doc.at("regions");
  if (!regions.is_array()) throw ValidationError("regions must be an array");
  for (const auto& r : regions) {
    require_keys(r, "region", {"name", "lat", "lon", "radius_km", "primary"});
    NamedRegion nr;
    nr.name = get<std::string>(r, "name", "region");
    get_opt(r, "primary", "region", nr.primary);
    nr.region = Region::make(GeoPoint::make(get<double>(r, "lat", "region"), get<double>(r, "lon", "region")),
                             get<double>(r, "radius_km", "region"));
    c.regions.push_back(std::move(nr));
  }

  if (!doc.contains("windows")) throw ValidationError("config.windows is required");
  const json& windows = doc["windows"];
  require_keys(windows, "windows", {"crisis", "pre_crisis"});
  c.crisis = parse_window(windows.at("crisis"), "windows.crisis");
  if (windows.contains("pre_crisis")) c.pre_crisis = parse_window(windows["pre_crisis"], "windows.pre_crisis");

  if (doc.contains("feature_classes")) {
    const json& fc = doc["feature_classes"];
    try {
      if (fc.is_string()) {
        c.feature_classes = FeatureClassSet::parse(fc.get<std::string>());
      } else if (fc.is_array()) {
        FeatureClassSet s;
        for (const auto& name : fc) s.insert(parse_feature_class(name.get<std::string>()));
        c.feature_classes = s;
      } else {
        throw ValidationError("feature_classes must be a string or an array");
      }
    } catch (const json::exception& e) {
      throw ValidationError(std::string("feature_classes: ") + e.what());
    }
    if (c.feature_classes.empty()) throw ValidationError("feature_classes is empty");
  }

  if (doc.contains("model")) {
    const json& m = doc["model"];
    require_keys(m, "model", {"kind", "alpha", "learning_rate", "l2", "max_epochs", "tolerance"});
    if (m.contains("kind")) {
      const auto kind = get<std::string>(m, "kind", "model");
      if (kind == "nb") {
        c.model_kind = ModelKind::NaiveBayes;
      } else if (kind == "logreg") {
        c.model_kind = ModelKind::LogReg;
      } else {
        throw ValidationError("model.kind must be 'nb' or 'logreg', got '" + kind + "'");
      }
    }
    get_opt(m, "alpha", "model", c.alpha);
    get_opt(m, "learning_rate", "model", c.logreg.learning_rate);
    get_opt(m, "l2", "model", c.logreg.l2);
    get_opt(m, "max_epochs", "model", c.logreg.max_epochs);
    get_opt(m, "tolerance", "model", c.logreg.tolerance);
  }

  if (doc.contains("cv")) {
    require_keys(doc["cv"], "cv", {"repeats", "folds"});
    get_opt(doc["cv"], "repeats", "cv", c.cv_repeats);
    get_opt(doc["cv"], "folds", "cv", c.cv_folds);
  }

  if (doc.contains("imbalance")) {
    const json& im = doc["imbalance"];
    require_keys(im, "imbalance", {"ratios", "test_fraction", "max_instances"});
    get_opt(im, "ratios", "imbalance", c.imbalance_ratios);
    get_opt(im, "test_fraction", "imbalance", c.test_fraction);
    get_opt(im, "max_instances", "imbalance", c.max_instances);
  }

  if (doc.contains("divergence")) {
    const json& dv = doc["divergence"];
    require_keys(dv, "divergence", {"day", "first_hour", "last_hour"});
    if (dv.contains("day")) c.hourly_day = parse_day(get<std::string>(dv, "day", "divergence"));
    get_opt(dv, "first_hour", "divergence", c.first_hour);
    get_opt(dv, "last_hour", "divergence", c.last_hour);
  }

  validate_config(c);
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

void validate_config(const RunConfig& c) {
  const auto primaries = std::count_if(c.regions.begin(), c.regions.end(),
                                       [](const NamedRegion& r) { return r.primary; });
  if (primaries != 1) {
    throw ValidationError("config needs exactly one primary region, found " + std::to_string(primaries));
  }
  std::set<std::string> names;
  for (const auto& r : c.regions) {
    if (r.name.empty()) throw ValidationError("region name is empty");
    if (!names.insert(r.name).second) throw ValidationError("duplicate region name '" + r.name + "'");
  }

  std::vector<fs::path> paths = {c.input.lexically_normal(), c.output_dir.lexically_normal()};
  if (c.unlabeled_input) paths.push_back(c.unlabeled_input->lexically_normal());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      if (paths[i] == paths[j]) {
        throw ValidationError("config paths must be distinct: " + paths[i].string());
      }
    }
  }

  if (c.threads < 1) throw ValidationError("threads must be >= 1");
  if (c.cv_repeats < 1) throw ValidationError("cv.repeats must be >= 1");
  if (c.cv_folds < 2) throw ValidationError("cv.folds must be >= 2");
  if (!(c.alpha > 0.0)) throw ValidationError("model.alpha must be > 0");
  if (!(c.logreg.learning_rate > 0.0)) throw ValidationError("model.learning_rate must be > 0");
  if (c.logreg.l2 < 0.0) throw ValidationError("model.l2 must be >= 0");
  if (c.logreg.max_epochs < 1) throw ValidationError("model.max_epochs must be >= 1");
  if (c.first_hour < 0 || c.last_hour > 23 || c.first_hour > c.last_hour) {
    throw ValidationError("divergence hours must satisfy 0 <= first_hour <= last_hour <= 23");
  }
  if (c.top_k < 1) throw ValidationError("top_k must be >= 1");
  if (c.cloud_k < 1) throw ValidationError("cloud_k must be >= 1");
  for (double r : c.imbalance_ratios) {
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("imbalance ratios must lie strictly in (0, 1)");
  }
}

}  // namespace crisisloc
