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

#include "crisisloc/common.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace crisisloc {

std::string_view label_name(Label label) {
  return label == Label::IR ? "IR" : "OR";
}

Label parse_label(std::string_view name) {
  if (name == "IR") return Label::IR;
  if (name == "OR") return Label::OR;
  throw ParseError("unknown label '" + std::string(name) + "'");
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  int digits(int count) {
    int value = 0;
    for (int i = 0; i < count; ++i) {
      if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9') fail("expected digit");
      value = value * 10 + (text_[pos_++] - '0');
    }
    return value;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(std::string_view options, char* matched = nullptr) {
    if (pos_ < text_.size() && options.find(text_[pos_]) != std::string_view::npos) {
      if (matched) *matched = text_[pos_];
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek_digit() const {
    return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9';
  }
  bool done() const { return pos_ == text_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("invalid RFC-3339 timestamp '" + std::string(text_) + "': " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Instant parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  Cursor c(text);
  const int y = c.digits(4);
  c.expect('-');
  const int mo = c.digits(2);
  c.expect('-');
  const int d = c.digits(2);
  if (!c.accept("Tt ")) c.fail("expected 'T'");
  const int hh = c.digits(2);
  c.expect(':');
  const int mm = c.digits(2);
  c.expect(':');
  const int ss = c.digits(2);
  int millis = 0;
  if (c.accept(".")) {
    if (!c.peek_digit()) c.fail("empty fraction");
    int scale = 100;
    while (c.peek_digit()) {
      millis += c.digits(1) * scale;
      scale /= 10;
    }
  }
  int offset_minutes = 0;
  char sign = 0;
  if (c.accept("Zz")) {
  } else if (c.accept("+-", &sign)) {
    const int oh = c.digits(2);
    c.expect(':');
    const int om = c.digits(2);
    if (oh > 23 || om > 59) c.fail("offset out of range");
    offset_minutes = (oh * 60 + om) * (sign == '-' ? -1 : 1);
  } else {
    c.fail("missing zone designator");
  }
  if (!c.done()) c.fail("trailing characters");

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) c.fail("invalid calendar date");
  // 60 admits a leap second, folded onto the next second.
  if (hh > 23 || mm > 59 || ss > 60) c.fail("time of day out of range");

  const auto local = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
  return time_point_cast<milliseconds>(local - minutes{offset_minutes});
}

std::string format_rfc3339(Instant t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss tod{t - day_point};
  std::array<char, 40> buf{};
  int n = std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02d",
                        static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                        static_cast<unsigned>(ymd.day()), static_cast<int>(tod.hours().count()),
                        static_cast<int>(tod.minutes().count()),
                        static_cast<int>(tod.seconds().count()));
  std::string out(buf.data(), static_cast<std::size_t>(n));
  const auto ms = tod.subseconds().count();
  if (ms != 0) {
    std::snprintf(buf.data(), buf.size(), ".%03d", static_cast<int>(ms));
    out += buf.data();
  }
  out += 'Z';
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

}  // namespace crisisloc
