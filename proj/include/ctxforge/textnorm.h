/*
 * Copyright 2026 The ctxforge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ctxforge {

// Lowercase word tokens with no punctuation, digits or whitespace.
using TokenList = std::vector<std::string>;

/// Normalizes raw transcript text into tokens.
///
/// Steps, in order: Unicode lowercasing; dash punctuation becomes a space;
/// every decimal digit run is spelled out in English words; punctuation
/// (Unicode P* plus `~^$|<>=+`) is deleted; the result is split on
/// whitespace. Apostrophes are deleted rather than split ("don't" -> "dont").
/// Total and idempotent: normalize(join(normalize(x))) == normalize(x).
TokenList normalize(std::string_view text);

/// Spells out the digit runs of a single token.
///
/// "42" -> [forty, two]; "3.14" -> [three, point, one, four];
/// "21st" -> [twenty, first]; "4k" -> [four, k]. Cardinals are written
/// without "and" or hyphens and cover values below 10^12; longer runs, and
/// runs with a leading zero, are read digit by digit. Tokens without digits
/// come back unchanged as a single element.
TokenList number_to_words(std::string_view token);

// Cardinal English for n < 10^12, space separated ("one hundred one").
std::string cardinal_words(std::uint64_t n);

// True when `token` is a single normalized token, i.e. normalize(token) == {token}.
bool is_normalized_token(std::string_view token);

std::string join(const TokenList& tokens, std::string_view sep = " ");

/// Exact-match stopword set. Members are stored normalized.
class StopwordSet {
 public:
  StopwordSet() = default;
  StopwordSet(std::initializer_list<std::string_view> words);

  /// Reads one word per line; blank lines and lines starting with '#' are
  /// ignored. Throws IoError if the file cannot be opened.
  static StopwordSet load(const std::filesystem::path& path);

  void insert(std::string_view word);
  bool contains(const std::string& word) const { return words_.count(word) != 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::unordered_set<std::string> words_;
};

// Order-preserving removal of every stopword.
TokenList filter_stopwords(const TokenList& tokens, const StopwordSet& stop);

}  // namespace ctxforge
