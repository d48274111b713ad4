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

#include <sstream>

#include "crisisloc/ingest.hpp"
#include "oracles.hpp"
#include "crisisloc/random.hpp"

using namespace crisisloc;

namespace {

const Region kBoston = Region::make(GeoPoint::make(42.35, -71.08), 19.0);
const TimeWindow kCrisis = TimeWindow::make(parse_rfc3339("2013-04-15T14:48:00-04:00"),
                                            parse_rfc3339("2013-04-16T00:00:00-04:00"));
const TimeWindow kPreCrisis = TimeWindow::make(parse_rfc3339("2013-04-09T10:00:00-04:00"),
                                               parse_rfc3339("2013-04-09T14:48:00-04:00"));

RawTweet geo_tweet(std::string id, const char* when, double lat, double lon) {
  RawTweet t;
  t.id = std::move(id);
  t.text = "x";
  t.created_at = parse_rfc3339(when);
  t.geo = GeoPoint::make(lat, lon);
  return t;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("parse_tweet_record with and without geo") {
  const auto a = parse_tweet_record(
      R"({"id":"1","text":"in boston","created_at":"2013-04-15T19:30:00Z","geo":{"lat":42.35,"lon":-71.08}})");
  CHECK(a.id == "1");
  CHECK(a.text == "in boston");
  REQUIRE(a.geo);
  CHECK(a.geo->lat == 42.35);
  CHECK(a.geo->lon == -71.08);

  const auto b = parse_tweet_record(
      R"({"id":"2","text":"storm warning","created_at":"2012-10-30T01:00:00Z","extra":[1,2]})");
  CHECK_FALSE(b.geo);
  CHECK(b.created_at == parse_rfc3339("2012-10-30T01:00:00Z"));
}

TEST_CASE("parse_tweet_record rejects invalid records") {
  CHECK_THROWS_AS(parse_tweet_record(
                      R"({"id":"3","text":"x","created_at":"2013-04-15T19:30:00Z","geo":{"lat":95.0,"lon":0.0}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_tweet_record(R"({"id":"3","text":"x"})"), ParseError);
  CHECK_THROWS_AS(parse_tweet_record(R"({"text":"x","created_at":"2013-04-15T19:30:00Z"})"), ParseError);
  CHECK_THROWS_AS(parse_tweet_record(R"({"id":"3","text":"","created_at":"2013-04-15T19:30:00Z"})"), ValidationError);
  CHECK_THROWS_AS(parse_tweet_record(R"({"id":"3","text":"x","created_at":"yesterday"})"), ParseError);
  CHECK_THROWS_AS(parse_tweet_record("{not json"), ParseError);
  CHECK_THROWS_AS(parse_tweet_record("[1,2]"), ParseError);
}

TEST_CASE("tag layers survive parse and serialization") {
  const std::string line =
      R"({"id":"7","text":"i'm safe","created_at":"2013-04-15T19:30:00Z","ark_tags":["L","A"],"ptb_tags":["PRP","JJ"],"chunk_tags":["B-NP","B-ADJP"]})";
  const auto t = parse_tweet_record(line);
  REQUIRE(t.ark_tags);
  CHECK(*t.ark_tags == std::vector<std::string>{"L", "A"});
  const auto again = parse_tweet_record(tweet_to_json_line(t));
  CHECK(again.ark_tags == t.ark_tags);
  CHECK(again.ptb_tags == t.ptb_tags);
  CHECK(again.chunk_tags == t.chunk_tags);
  CHECK(again.created_at == t.created_at);
}

TEST_CASE("geo and region validation") {
  CHECK_THROWS_AS(GeoPoint::make(-90.5, 0), ValidationError);
  CHECK_THROWS_AS(GeoPoint::make(0, 180.5), ValidationError);
  CHECK_THROWS_AS(Region::make(GeoPoint::make(0, 0), 0.0), ValidationError);
  CHECK_THROWS_AS(TimeWindow::make(kCrisis.end, kCrisis.start), ValidationError);
}

TEST_CASE("haversine known distances") {
  const GeoPoint boston = GeoPoint::make(42.35, -71.08);
  const GeoPoint nyc = GeoPoint::make(40.75, -73.99);
  CHECK(haversine_km(boston, boston) == 0.0);
  // Epicenter to epicenter.
  CHECK(std::abs(haversine_km(boston, nyc) - 300.46) < 0.01);
  CHECK(std::abs(haversine_km(boston, nyc) - testing::law_of_cosines_km(boston, nyc)) < 1.0);
  // City centres.
  const GeoPoint boston_hall = GeoPoint::make(42.3601, -71.0589);
  const GeoPoint nyc_hall = GeoPoint::make(40.7128, -74.0060);
  CHECK(std::abs(haversine_km(boston_hall, nyc_hall) - 306.0) < 1.0);
  CHECK(std::abs(haversine_km(GeoPoint::make(0, 0), GeoPoint::make(0, 180)) - 20015.1) < 1.0);
}

TEST_CASE("haversine is symmetric and agrees with the law of cosines") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const GeoPoint a = GeoPoint::make(uniform_unit(rng) * 180 - 90, uniform_unit(rng) * 360 - 180);
    const GeoPoint b = GeoPoint::make(uniform_unit(rng) * 180 - 90, uniform_unit(rng) * 360 - 180);
    CHECK(haversine_km(a, b) == haversine_km(b, a));
    CHECK(haversine_km(a, b) >= 0.0);
    CHECK(std::abs(haversine_km(a, b) - testing::law_of_cosines_km(a, b)) < 1.0);
  }
}

TEST_CASE("assign_partition examples") {
  CHECK(assign_partition(geo_tweet("a", "2013-04-15T15:30:00-04:00", 42.35, -71.08), kBoston, kCrisis,
                         kPreCrisis) == PartitionLabel::IR);
  CHECK(assign_partition(geo_tweet("b", "2013-04-09T12:00:00-04:00", 42.35, -71.08), kBoston, kCrisis,
                         kPreCrisis) == PartitionLabel::PC_IR);
  CHECK(assign_partition(geo_tweet("c", "2013-04-15T15:30:00-04:00", 40.75, -73.99), kBoston, kCrisis,
                         kPreCrisis) == PartitionLabel::OR);
  CHECK(assign_partition(geo_tweet("d", "2013-04-09T12:00:00-04:00", 40.75, -73.99), kBoston, kCrisis,
                         kPreCrisis) == PartitionLabel::PC_OR);
  CHECK(assign_partition(geo_tweet("e", "2013-04-12T12:00:00-04:00", 42.35, -71.08), kBoston, kCrisis,
                         kPreCrisis) == PartitionLabel::UNASSIGNED);
  CHECK(assign_partition(geo_tweet("f", "2013-04-09T12:00:00-04:00", 42.35, -71.08), kBoston, kCrisis,
                         std::nullopt) == PartitionLabel::UNASSIGNED);
  RawTweet no_geo;
  no_geo.id = "g";
  no_geo.created_at = kCrisis.start;
  CHECK_THROWS_AS(assign_partition(no_geo, kBoston, kCrisis, kPreCrisis), ValidationError);
}

TEST_CASE("windows are half-open") {
  CHECK(assign_partition(geo_tweet("s", "2013-04-15T14:48:00-04:00", 42.35, -71.08), kBoston, kCrisis,
                         std::nullopt) == PartitionLabel::IR);
  CHECK(assign_partition(geo_tweet("e", "2013-04-16T00:00:00-04:00", 42.35, -71.08), kBoston, kCrisis,
                         std::nullopt) == PartitionLabel::UNASSIGNED);
}

TEST_CASE("disc boundary is inclusive") {
  const GeoPoint center = GeoPoint::make(10.0, 20.0);
  const GeoPoint edge = GeoPoint::make(10.0, 20.1);
  const Region exact = Region::make(center, haversine_km(center, edge));
  CHECK(exact.contains(edge));
  CHECK_FALSE(Region::make(center, std::nextafter(exact.radius_km, 0.0)).contains(edge));
}

TEST_CASE("partition_records: three-record corpus") {
  std::istringstream in(
      R"({"id":"1","text":"in boston","created_at":"2013-04-15T19:30:00Z","geo":{"lat":42.35,"lon":-71.08}})"
      "\n"
      R"({"id":"2","text":"in nyc","created_at":"2013-04-15T19:30:00Z","geo":{"lat":40.75,"lon":-73.99}})"
      "\n"
      R"({"id":"3","text":"storm warning","created_at":"2013-04-15T19:30:00Z"})"
      "\n");
  const auto c = partition_records(in, kBoston, kCrisis, kPreCrisis);
  CHECK(c.count(PartitionLabel::IR) == 1);
  CHECK(c.count(PartitionLabel::OR) == 1);
  CHECK(c.count(PartitionLabel::PC_IR) == 0);
  CHECK(c.count(PartitionLabel::PC_OR) == 0);
  CHECK(c.unlabeled.size() == 1);
  CHECK(c.lines == 3);
  REQUIRE(c.imbalance_ratio());
  CHECK(*c.imbalance_ratio() == 0.5);
}

TEST_CASE("partition_records: empty input") {
  std::istringstream in("");
  const auto c = partition_records(in, kBoston, kCrisis, kPreCrisis);
  for (auto label : kAllPartitions) CHECK(c.count(label) == 0);
  CHECK(c.unlabeled.empty());
  CHECK(c.lines == 0);
  CHECK_FALSE(c.imbalance_ratio());
}

TEST_CASE("partition_records: bad lines are skipped and accounted for") {
  std::istringstream in(
      R"({"id":"1","text":"a","created_at":"2013-04-15T19:30:00Z","geo":{"lat":42.35,"lon":-71.08}})"
      "\n"
      "garbage\n"
      "\n"
      R"({"id":"1","text":"dup","created_at":"2013-04-15T19:30:00Z"})"
      "\n"
      R"({"id":"4","text":"b","created_at":"2013-04-15T19:30:00Z","geo":{"lat":99,"lon":0}})"
      "\n"
      R"({"id":"5","text":"one two","created_at":"2013-04-15T19:30:00Z","ark_tags":["N"]})"
      "\n");
  const auto c = partition_records(in, kBoston, kCrisis, kPreCrisis);
  CHECK(c.lines == 6);
  CHECK(c.duplicate_ids == 1);
  CHECK(c.skipped.size() == 4);
  CHECK(c.misaligned_tags == std::vector<std::string>{"5"});
  std::size_t total = c.unlabeled.size() + c.skipped.size();
  for (auto label : kAllPartitions) total += c.count(label);
  CHECK(total == c.lines);
  CHECK(c.skipped[0].line == 2);
}

TEST_CASE("partition_records: labels do not depend on record order") {
  Rng rng(5);
  std::vector<std::string> lines;
  for (int i = 0; i < 60; ++i) {
    RawTweet t = geo_tweet(std::to_string(i), i % 2 ? "2013-04-15T16:00:00-04:00" : "2013-04-09T11:00:00-04:00",
                           42.35 + (uniform_unit(rng) - 0.5), -71.08 + (uniform_unit(rng) - 0.5));
    lines.push_back(tweet_to_json_line(t));
  }
  auto labels_of = [&](const std::vector<std::string>& ls) {
    std::string text;
    for (const auto& l : ls) text += l + "\n";
    std::istringstream in(text);
    const auto c = partition_records(in, kBoston, kCrisis, kPreCrisis);
    std::map<std::string, PartitionLabel> out;
    for (auto label : kAllPartitions) {
      for (const auto& t : c.group(label)) out[t.id] = label;
    }
    return out;
  };
  const auto forward = labels_of(lines);
  shuffle_in_place(lines, rng);
  CHECK(labels_of(lines) == forward);
  CHECK(forward.size() == 60);
}

TEST_CASE("load_corpus reports unreadable files") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl", kBoston, kCrisis, std::nullopt), IoError);
}

}
