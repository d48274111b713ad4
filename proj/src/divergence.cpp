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

#include "crisisloc/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace crisisloc {

TokenDistribution word_distribution(std::span<const TaggedTweet> tweets) {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& t : tweets) {
    for (const auto& tok : t.tokens()) {
      ++counts[tok];
      ++total;
    }
  }
  if (total == 0) throw ValidationError("cannot build a word distribution without tokens");
  TokenDistribution d;
  d.total_tokens = total;
  const double denom = static_cast<double>(total);
  for (const auto& [tok, n] : counts) {
    d.probs.emplace_hint(d.probs.end(), tok, static_cast<double>(n) / denom);
  }
  return d;
}

double js_divergence(const TokenDistribution& p, const TokenDistribution& q) {
  // Walk the union support in key order; each term is symmetric in (p, q) and
  // the order of accumulation does not depend on argument order.
  auto a = p.probs.begin();
  auto b = q.probs.begin();
  double shared = 0.0;
  double only = 0.0;
  bool overlap = false;
  while (a != p.probs.end() || b != q.probs.end()) {
    if (b == q.probs.end() || (a != p.probs.end() && a->first < b->first)) {
      only += a->second;
      ++a;
    } else if (a == p.probs.end() || b->first < a->first) {
      only += b->second;
      ++b;
    } else {
      overlap = true;
      const double pi = a->second;
      const double qi = b->second;
      const double m = 0.5 * (pi + qi);
      shared += pi * std::log2(pi / m) + qi * std::log2(qi / m);
      ++a;
      ++b;
    }
  }
  // Mass outside the shared support contributes p_i * log2(p_i / (p_i / 2)).
  if (!overlap) return 1.0;
  const double jsd = 0.5 * (shared + only);
  return std::clamp(jsd, 0.0, 1.0);
}

namespace {

void normalize(DivergenceMatrix& m) {
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& row : m.values) {
    for (double v : row) {
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  m.normalized_values = m.values;
  for (auto& row : m.normalized_values) {
    for (double& v : row) v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
  }
}

}  // namespace

DivergenceMatrix divergence_matrix(std::vector<std::pair<std::string, TokenDistribution>> groups) {
  DivergenceMatrix m;
  const std::size_t n = groups.size();
  m.values.assign(n, std::vector<double>(n, 0.0));
  for (const auto& g : groups) m.labels.push_back(g.first);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = js_divergence(groups[i].second, groups[j].second);
      m.values[i][j] = d;
      m.values[j][i] = d;
    }
  }
  normalize(m);
  return m;
}

DivergenceMatrix hourly_divergence_matrix(std::span<const RawTweet> tweets, const Region& region,
                                          const HourlyOptions& options) {
  using namespace std::chrono;
  if (options.first_hour < 0 || options.last_hour > 23 || options.first_hour > options.last_hour) {
    throw ValidationError("hour range must satisfy 0 <= first <= last <= 23");
  }
  if (!options.day.ok()) throw ValidationError("invalid day for hourly divergence");
  const sys_days day{options.day};

  const int hours_in_range = options.last_hour - options.first_hour + 1;
  std::vector<std::vector<TaggedTweet>> per_hour(static_cast<std::size_t>(hours_in_range));
  for (const auto& t : tweets) {
    if (!t.geo || !region.contains(*t.geo)) continue;
    const auto local = t.created_at + options.utc_offset;
    if (floor<days>(local) != day) continue;
    const int hour = static_cast<int>(floor<hours>(local - day).count());
    if (hour < options.first_hour || hour > options.last_hour) continue;
    per_hour[static_cast<std::size_t>(hour - options.first_hour)].push_back(
        attach_tags(t.id, tokenize(t.text)));
  }

  std::vector<std::pair<std::string, TokenDistribution>> groups;
  std::vector<std::string> warnings;
  for (int h = options.first_hour; h <= options.last_hour; ++h) {
    char label[8];
    std::snprintf(label, sizeof label, "%02d:00", h);
    const auto& bucket = per_hour[static_cast<std::size_t>(h - options.first_hour)];
    std::size_t tokens = 0;
    for (const auto& t : bucket) tokens += t.size();
    if (tokens == 0) {
      warnings.push_back(std::string("hour ") + label + " has no tokens; dropped");
      continue;
    }
    groups.emplace_back(label, word_distribution(bucket));
  }
  auto m = divergence_matrix(std::move(groups));
  m.warnings = std::move(warnings);
  return m;
}

DivergenceMatrix regional_divergence_matrix(
    const std::vector<std::pair<std::string, std::vector<TaggedTweet>>>& groups) {
  std::vector<std::pair<std::string, TokenDistribution>> dists;
  std::vector<std::string> warnings;
  for (const auto& [name, tweets] : groups) {
    std::size_t tokens = 0;
    for (const auto& t : tweets) tokens += t.size();
    if (tokens == 0) {
      warnings.push_back("group '" + name + "' has no tokens; dropped");
      continue;
    }
    dists.emplace_back(name, word_distribution(tweets));
  }
  if (dists.empty()) throw ValidationError("regional divergence needs a group with tokens");
  auto m = divergence_matrix(std::move(dists));
  m.warnings = std::move(warnings);
  return m;
}

std::string matrix_to_csv(const DivergenceMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    if (i) out += ',';
    out += m.labels[i];
  }
  out += '\n';
  for (const auto& row : m.values) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::string matrix_to_json(const DivergenceMatrix& m) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["labels"] = m.labels;
  doc["values"] = m.values;
  doc["normalized_values"] = m.normalized_values;
  doc["warnings"] = m.warnings;
  return doc.dump(1) + "\n";
}

}  // namespace crisisloc
