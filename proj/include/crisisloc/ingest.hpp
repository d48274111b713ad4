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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crisisloc/common.hpp"

namespace crisisloc {

// Mean Earth radius used for all great-circle distances.
inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  // Throws ValidationError unless lat in [-90, 90] and lon in [-180, 180].
  static GeoPoint make(double lat, double lon);
};

// Geographic disc: epicenter plus a strictly positive radius in km.
struct Region {
  GeoPoint epicenter;
  double radius_km = 0.0;

  static Region make(GeoPoint epicenter, double radius_km);
  bool contains(GeoPoint p) const;
};

// Half-open interval [start, end) of UTC instants.
struct TimeWindow {
  Instant start;
  Instant end;

  static TimeWindow make(Instant start, Instant end);
  bool contains(Instant t) const { return start <= t && t < end; }
};

struct RawTweet {
  std::string id;
  std::string text;
  Instant created_at;
  std::optional<GeoPoint> geo;
  std::optional<std::vector<std::string>> ark_tags;
  std::optional<std::vector<std::string>> ptb_tags;
  std::optional<std::vector<std::string>> chunk_tags;
};

enum class PartitionLabel : std::uint8_t { IR, OR, PC_IR, PC_OR, UNASSIGNED };

inline constexpr std::array<PartitionLabel, 5> kAllPartitions = {
    PartitionLabel::IR, PartitionLabel::OR, PartitionLabel::PC_IR, PartitionLabel::PC_OR,
    PartitionLabel::UNASSIGNED};

std::string_view partition_name(PartitionLabel label);

// Parses one JSON Lines record. Unknown fields are ignored. Throws ParseError
// on malformed JSON or missing/ill-typed fields and ValidationError on
// out-of-range coordinates or an empty text.
RawTweet parse_tweet_record(std::string_view line);

// Serializes a tweet back to the JSON Lines schema (canonical key order).
std::string tweet_to_json_line(const RawTweet& tweet);

double haversine_km(GeoPoint a, GeoPoint b);

// Throws ValidationError when the tweet has no geo-coordinates.
PartitionLabel assign_partition(const RawTweet& tweet, const Region& region,
                                const TimeWindow& crisis,
                                const std::optional<TimeWindow>& pre_crisis);

struct SkippedRecord {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct PartitionedCorpus {
  // Indexed by PartitionLabel.
  std::array<std::vector<RawTweet>, 5> groups;
  // Non-geotagged tweets: the classification targets.
  std::vector<RawTweet> unlabeled;
  std::vector<SkippedRecord> skipped;
  std::size_t lines = 0;
  std::size_t duplicate_ids = 0;
  // Ids of records whose tag layers do not align with their tokenization.
  // They are kept; alignment is enforced when tags are attached.
  std::vector<std::string> misaligned_tags;

  const std::vector<RawTweet>& group(PartitionLabel label) const {
    return groups[static_cast<std::size_t>(label)];
  }
  std::vector<RawTweet>& group(PartitionLabel label) {
    return groups[static_cast<std::size_t>(label)];
  }
  std::size_t count(PartitionLabel label) const { return group(label).size(); }

  // |IR| / (|IR| + |OR|), or nullopt when both are empty.
  std::optional<double> imbalance_ratio() const;

  // Every geotagged tweet that was given a label, in input order per group.
  std::vector<RawTweet> geotagged() const;
};

// Partitions records read from a stream. Malformed records are skipped and
// reported; they never abort the load.
PartitionedCorpus partition_records(std::istream& in, const Region& region,
                                    const TimeWindow& crisis,
                                    const std::optional<TimeWindow>& pre_crisis);

// Throws IoError when the file cannot be opened.
PartitionedCorpus load_corpus(const std::filesystem::path& path, const Region& region,
                              const TimeWindow& crisis,
                              const std::optional<TimeWindow>& pre_crisis);

// Reads every well-formed record without partitioning.
struct RecordSet {
  std::vector<RawTweet> tweets;
  std::vector<SkippedRecord> skipped;
  std::size_t lines = 0;
};
RecordSet read_records(const std::filesystem::path& path);

}  // namespace crisisloc
