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

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crisisloc {

// Base for every error the library raises on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Binary training/prediction label. IR is the positive class everywhere.
enum class Label : std::uint8_t { IR, OR };

std::string_view label_name(Label label);
Label parse_label(std::string_view name);

// UTC instant with millisecond resolution.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

// Accepts RFC-3339 date-times ("2013-04-15T14:48:00-04:00", "...Z",
// optional fractional seconds) and returns the UTC instant.
Instant parse_rfc3339(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ", with ".mmm" when milliseconds are set.
std::string format_rfc3339(Instant t);

// Formats a double with the shortest round-trip representation.
std::string format_double(double value);

}  // namespace crisisloc
