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

#include <algorithm>
#include <string>
#include <string_view>
#include <unordered_set>

#include "crisisloc/text.hpp"

namespace crisisloc {
namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet& prepositions() {
  static const WordSet s = {
      "in",      "on",     "at",     "of",      "for",     "to",      "from",    "with",
      "by",      "about",  "into",   "near",    "over",    "under",   "after",   "before",
      "during",  "through", "across", "around", "between", "without", "within",  "along",
      "against", "toward", "towards", "upon",   "off",     "behind",  "inside",  "outside",
      "past",    "since",  "until",  "via",     "while",   "as",      "than",    "per",
      "amid",    "despite", "beside", "beneath", "among",  "onto",    "throughout", "if",
      "because", "though", "although", "unless", "whether", "till",   "unto",    "of"};
  return s;
}

const WordSet& determiners() {
  static const WordSet s = {"the",   "a",     "an",    "this",  "that",    "these",
                            "those", "my",    "your",  "his",   "her",     "its",
                            "our",   "their", "some",  "any",   "every",   "each",
                            "no",    "all",   "both",  "another", "either", "neither",
                            "ur",    "da",    "tha",   "teh"};
  return s;
}

// Nominal + verbal contractions.
const WordSet& contractions() {
  static const WordSet s = {
      "i'm",     "im",      "it's",    "there's", "that's",  "he's",    "she's",   "what's",
      "where's", "who's",   "here's",  "how's",   "when's",  "why's",   "let's",   "i'll",
      "you'll",  "we'll",   "they'll", "he'll",   "she'll",  "it'll",   "that'll", "there'll",
      "who'll",  "i'd",     "you'd",   "he'd",    "she'd",   "we'd",    "they'd",  "you're",
      "we're",   "they're", "i've",    "you've",  "we've",   "they've", "ima",     "imma",
      "youre",   "theyre",  "thats",   "whats",   "hes",     "shes"};
  return s;
}

const WordSet& pronouns() {
  static const WordSet s = {"i",   "me",    "you",  "u",    "he",   "him",  "she",
                            "we",  "us",    "they", "them", "it",   "myself", "yourself",
                            "himself", "herself", "itself", "ourselves", "themselves",
                            "who", "what",  "which", "whom", "everyone", "everybody",
                            "someone", "somebody", "anyone", "nobody", "something",
                            "nothing", "everything", "anything", "ya", "yall", "y'all"};
  return s;
}

const WordSet& conjunctions() {
  static const WordSet s = {"and", "or", "but", "nor", "&", "n", "plus", "yet"};
  return s;
}

const WordSet& interjections() {
  static const WordSet s = {"omg", "lol", "wow",  "oh",    "ah",    "yes",  "no",   "yeah",
                            "ok",  "okay", "please", "thanks", "thank", "haha", "hey", "wtf",
                            "smh", "lmao", "damn", "ugh",   "hi",    "hello", "yay",  "rip",
                            "oops", "whoa", "aw", "aww", "amen"};
  return s;
}

const WordSet& verbs() {
  static const WordSet s = {
      "is",     "am",    "are",    "was",    "were",   "be",     "been",   "being",  "have",
      "has",    "had",   "do",     "does",   "did",    "will",   "would",  "can",    "could",
      "should", "may",   "might",  "must",   "shall",  "get",    "gets",   "got",    "go",
      "goes",   "went",  "gone",   "say",    "says",   "said",   "see",    "saw",    "seen",
      "know",   "knew",  "known",  "think",  "thought", "make",  "made",   "take",   "took",
      "taken",  "come",  "came",   "hear",   "heard",  "stay",   "pray",   "hope",   "need",
      "want",   "feel",  "felt",   "love",   "run",    "ran",    "tell",   "told",   "let",
      "keep",   "kept",  "leave",  "left",   "help",   "call",   "look",   "watch",  "find",
      "found",  "give",  "gave",   "send",   "sent",   "hit",    "lost",   "lose",   "stop",
      "evacuate", "flood", "blew",  "shut",   "wait",   "check",  "hold",   "held",   "bring",
      "brought", "cant", "can't",  "don't",  "dont",   "didn't", "won't",  "isn't",  "aren't",
      "wasn't", "ain't", "shouldn't", "couldn't", "wouldn't", "doesn't", "haven't", "hasn't"};
  return s;
}

const WordSet& adverbs() {
  static const WordSet s = {"not",    "very",    "so",     "too",     "just",   "now",
                            "here",   "there",   "still",  "also",    "really", "never",
                            "always", "already", "again",  "soon",    "back",   "up",
                            "out",    "away",    "ever",   "even",    "only",   "well",
                            "then",   "today",   "tonight", "tomorrow", "yesterday", "down",
                            "almost", "maybe",   "why",    "how",     "when",   "where",
                            "around", "everywhere", "somewhere", "once", "later", "forever",
                            "otherwise", "else", "together", "ago"};
  return s;
}

const WordSet& adjectives() {
  static const WordSet s = {
      "safe",     "good",     "bad",     "great",     "sad",      "scary",   "crazy",
      "terrible", "horrible", "awful",   "fine",      "sure",     "happy",   "big",
      "small",    "new",      "old",     "more",      "many",     "much",    "last",
      "first",    "next",     "other",   "same",      "whole",    "real",    "free",
      "dead",     "injured",  "hurt",    "wet",       "dark",     "strong",  "high",
      "low",      "long",     "short",   "able",      "afraid",   "alive",   "ready",
      "sorry",    "unreal",   "insane",  "devastating", "heartbreaking", "surreal", "quiet",
      "loud",     "huge",     "little",  "best",      "worst",    "better",  "worse",
      "crowded",  "empty",    "local",   "open",      "closed",   "cold",    "hot",
      "true",     "sick",     "tired",   "nice",      "late",     "early",   "ok",
      "okay",     "bloody",   "flooded", "ridiculous", "amazing",  "several", "few"};
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_ascii_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x7B && c <= 0x7E);
}

bool punctuation_only(std::string_view t) {
  // Multi-byte punctuation (curly quotes, ellipsis) starts with 0xE2 0x80.
  if (t.size() == 3 && static_cast<unsigned char>(t[0]) == 0xE2 &&
      static_cast<unsigned char>(t[1]) == 0x80) {
    return true;
  }
  return std::all_of(t.begin(), t.end(),
                     [](char c) { return is_ascii_punct(static_cast<unsigned char>(c)); });
}

bool numeric(std::string_view t) {
  bool digit = false;
  std::size_t i = 0;
  for (; i < t.size(); ++i) {
    const char c = t[i];
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c == '.' || c == ',' || c == ':' || c == '/' || c == '-' || c == '$' || c == '%') {
    } else {
      break;
    }
  }
  if (!digit) return false;
  const auto tail = t.substr(i);
  return tail.empty() || tail == "st" || tail == "nd" || tail == "rd" || tail == "th" ||
         tail == "k" || tail == "am" || tail == "pm";
}

// Curly apostrophes are looked up as ASCII ones.
std::string normalize_apostrophes(std::string_view t) {
  std::string out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i + 2 < t.size() && static_cast<unsigned char>(t[i]) == 0xE2 &&
        static_cast<unsigned char>(t[i + 1]) == 0x80 &&
        static_cast<unsigned char>(t[i + 2]) == 0x99) {
      out += '\'';
      i += 2;
    } else {
      out += t[i];
    }
  }
  return out;
}

std::string tag_one(std::string_view raw) {
  if (raw.size() > 1 && raw[0] == '@') return "@";
  if (raw.size() > 1 && raw[0] == '#') return "#";
  if (is_url(raw)) return "U";
  if (punctuation_only(raw)) return "!";

  const std::string word = normalize_apostrophes(raw);
  const std::string_view w = word;
  if (prepositions().contains(w)) return "P";
  if (determiners().contains(w)) return "D";
  if (contractions().contains(w)) return "L";
  if (numeric(w)) return "$";
  if (pronouns().contains(w)) return "O";
  if (conjunctions().contains(w)) return "&";
  if (interjections().contains(w)) return "!";

  if (verbs().contains(w)) return "V";
  if (adjectives().contains(w)) return "A";
  if (adverbs().contains(w)) return "R";
  if (w.size() > 3 && ends_with(w, "ly")) return "R";
  if (w.size() > 4 && ends_with(w, "ing")) return "V";
  if (w.size() > 3 && ends_with(w, "ed")) return "V";
  for (std::string_view suffix : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ical"}) {
    if (w.size() > suffix.size() + 2 && ends_with(w, suffix)) return "A";
  }
  return "N";
}

}  // namespace

std::vector<std::string> fallback_ark_tag(std::span<const std::string> tokens) {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(tag_one(t));
  return tags;
}

}  // namespace crisisloc
