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

#include "crisisloc/ingest.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <unordered_set>

#include "crisisloc/text.hpp"
#include "json.hpp"

namespace crisisloc {

using nlohmann::json;

GeoPoint GeoPoint::make(double lat, double lon) {
  if (!(lat >= -90.0 && lat <= 90.0)) {
    throw ValidationError("latitude out of range: " + format_double(lat));
  }
  if (!(lon >= -180.0 && lon <= 180.0)) {
    throw ValidationError("longitude out of range: " + format_double(lon));
  }
  return GeoPoint{lat, lon};
}

Region Region::make(GeoPoint epicenter, double radius_km) {
  if (!(radius_km > 0.0) || !std::isfinite(radius_km)) {
    throw ValidationError("region radius must be positive, got " + format_double(radius_km));
  }
  return Region{GeoPoint::make(epicenter.lat, epicenter.lon), radius_km};
}

bool Region::contains(GeoPoint p) const { return haversine_km(p, epicenter) <= radius_km; }

TimeWindow TimeWindow::make(Instant start, Instant end) {
  if (!(start < end)) {
    throw ValidationError("time window start " + format_rfc3339(start) +
                          " is not before end " + format_rfc3339(end));
  }
  return TimeWindow{start, end};
}

std::string_view partition_name(PartitionLabel label) {
  switch (label) {
    case PartitionLabel::IR: return "IR";
    case PartitionLabel::OR: return "OR";
    case PartitionLabel::PC_IR: return "PC_IR";
    case PartitionLabel::PC_OR: return "PC_OR";
    case PartitionLabel::UNASSIGNED: return "UNASSIGNED";
  }
  return "UNASSIGNED";
}

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw ParseError(std::string("missing required field '") + key + "'");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::vector<std::string>> optional_tags(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<std::string> tags;
  tags.reserve(it->size());
  for (const auto& t : *it) {
    if (!t.is_string()) throw ParseError(std::string("field '") + key + "' must hold strings");
    tags.push_back(t.get<std::string>());
  }
  return tags;
}

double require_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

RawTweet parse_tweet_record(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("record is not a JSON object");

  RawTweet tweet;
  tweet.id = require_string(doc, "id");
  tweet.text = require_string(doc, "text");
  if (tweet.text.empty()) throw ValidationError("empty text");
  tweet.created_at = parse_rfc3339(require_string(doc, "created_at"));

  if (auto it = doc.find("geo"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError("field 'geo' must be an object");
    tweet.geo = GeoPoint::make(require_number(*it, "lat"), require_number(*it, "lon"));
  }
  tweet.ark_tags = optional_tags(doc, "ark_tags");
  tweet.ptb_tags = optional_tags(doc, "ptb_tags");
  tweet.chunk_tags = optional_tags(doc, "chunk_tags");
  return tweet;
}

std::string tweet_to_json_line(const RawTweet& tweet) {
  json doc = json::object();
  doc["id"] = tweet.id;
  doc["text"] = tweet.text;
  doc["created_at"] = format_rfc3339(tweet.created_at);
  if (tweet.geo) doc["geo"] = {{"lat", tweet.geo->lat}, {"lon", tweet.geo->lon}};
  if (tweet.ark_tags) doc["ark_tags"] = *tweet.ark_tags;
  if (tweet.ptb_tags) doc["ptb_tags"] = *tweet.ptb_tags;
  if (tweet.chunk_tags) doc["chunk_tags"] = *tweet.chunk_tags;
  return doc.dump();
}

double haversine_km(GeoPoint a, GeoPoint b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  double h = s1 * s1 + std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * s2 * s2;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

PartitionLabel assign_partition(const RawTweet& tweet, const Region& region,
                                const TimeWindow& crisis,
                                const std::optional<TimeWindow>& pre_crisis) {
  if (!tweet.geo) {
    throw ValidationError("tweet '" + tweet.id + "' has no geo-coordinates");
  }
  const bool inside = region.contains(*tweet.geo);
  if (crisis.contains(tweet.created_at)) {
    return inside ? PartitionLabel::IR : PartitionLabel::OR;
  }
  if (pre_crisis && pre_crisis->contains(tweet.created_at)) {
    return inside ? PartitionLabel::PC_IR : PartitionLabel::PC_OR;
  }
  return PartitionLabel::UNASSIGNED;
}

std::optional<double> PartitionedCorpus::imbalance_ratio() const {
  const auto ir = count(PartitionLabel::IR);
  const auto total = ir + count(PartitionLabel::OR);
  if (total == 0) return std::nullopt;
  return static_cast<double>(ir) / static_cast<double>(total);
}

std::vector<RawTweet> PartitionedCorpus::geotagged() const {
  std::vector<RawTweet> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  return all;
}

namespace {

bool tags_align(const RawTweet& tweet) {
  if (!tweet.ark_tags && !tweet.ptb_tags && !tweet.chunk_tags) return true;
  const std::size_t n = tokenize(tweet.text).size();
  auto ok = [n](const std::optional<std::vector<std::string>>& layer) {
    return !layer || layer->size() == n;
  };
  return ok(tweet.ark_tags) && ok(tweet.ptb_tags) && ok(tweet.chunk_tags);
}

// Calls on_record for each well-formed, non-duplicate record.
template <typename OnRecord>
void scan_records(std::istream& in, std::size_t& lines, std::size_t& duplicates,
                  std::vector<SkippedRecord>& skipped, OnRecord on_record) {
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    ++lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      skipped.push_back({lines, "blank line"});
      continue;
    }
    RawTweet tweet;
    try {
      tweet = parse_tweet_record(line);
    } catch (const Error& e) {
      skipped.push_back({lines, e.what()});
      continue;
    }
    if (!seen.insert(tweet.id).second) {
      ++duplicates;
      skipped.push_back({lines, "duplicate id '" + tweet.id + "'"});
      continue;
    }
    on_record(std::move(tweet));
  }
}

}  // namespace

PartitionedCorpus partition_records(std::istream& in, const Region& region,
                                    const TimeWindow& crisis,
                                    const std::optional<TimeWindow>& pre_crisis) {
  PartitionedCorpus corpus;
  scan_records(in, corpus.lines, corpus.duplicate_ids, corpus.skipped, [&](RawTweet tweet) {
    if (!tags_align(tweet)) corpus.misaligned_tags.push_back(tweet.id);
    if (!tweet.geo) {
      corpus.unlabeled.push_back(std::move(tweet));
      return;
    }
    const auto label = assign_partition(tweet, region, crisis, pre_crisis);
    corpus.group(label).push_back(std::move(tweet));
  });
  return corpus;
}

PartitionedCorpus load_corpus(const std::filesystem::path& path, const Region& region,
                              const TimeWindow& crisis,
                              const std::optional<TimeWindow>& pre_crisis) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path.string() + "'");
  return partition_records(in, region, crisis, pre_crisis);
}

RecordSet read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path.string() + "'");
  RecordSet set;
  std::size_t duplicates = 0;
  scan_records(in, set.lines, duplicates, set.skipped,
               [&](RawTweet tweet) { set.tweets.push_back(std::move(tweet)); });
  return set;
}

}  // namespace crisisloc
