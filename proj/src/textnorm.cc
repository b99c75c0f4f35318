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

#include "ctxforge/textnorm.h"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <array>
#include <fstream>

#include <spdlog/spdlog.h>

#include "ctxforge/error.h"

namespace ctxforge {
namespace {

constexpr std::array<std::string_view, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
constexpr std::array<std::string_view, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};

constexpr std::uint64_t kCardinalLimit = 1'000'000'000'000ULL;
constexpr std::size_t kMaxCardinalDigits = 12;

bool is_digit(UChar32 c) { return u_isdigit(c) != 0; }

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) || u_isWhitespace(c); }

bool is_punct(UChar32 c) {
  if (u_ispunct(c)) return true;
  switch (c) {
    case U'~': case U'^': case U'$': case U'|':
    case U'<': case U'>': case U'=': case U'+':
      return true;
    default:
      return false;
  }
}

bool is_dash(UChar32 c) { return u_charType(c) == U_DASH_PUNCTUATION; }

std::u32string to_u32(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
    out.push_back(static_cast<char32_t>(s.char32At(i)));
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  std::array<std::uint8_t, U8_MAX_LENGTH> buf{};
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf.data(), len, static_cast<UChar32>(c));
  out.append(reinterpret_cast<const char*>(buf.data()), static_cast<std::size_t>(len));
}

std::u32string lowercase_u32(std::string_view text) {
  auto us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  us.toLower(icu::Locale::getRoot());
  return to_u32(us);
}

void append_ascii(std::u32string& out, std::string_view s) {
  for (char c : s) out.push_back(static_cast<char32_t>(c));
}

std::string below_thousand(unsigned n) {
  std::string out;
  if (n >= 100) {
    out += kOnes[n / 100];
    out += " hundred";
    n %= 100;
    if (n == 0) return out;
    out += ' ';
  }
  if (n < 20) {
    out += kOnes[n];
  } else {
    out += kTens[n / 10];
    if (n % 10 != 0) {
      out += ' ';
      out += kOnes[n % 10];
    }
  }
  return out;
}

std::string ordinal_of(std::string_view word) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kIrregular = {{
      {"one", "first"}, {"two", "second"}, {"three", "third"}, {"five", "fifth"},
      {"eight", "eighth"}, {"nine", "ninth"}, {"twelve", "twelfth"}}};
  for (const auto& [card, ord] : kIrregular) {
    if (word == card) return std::string(ord);
  }
  if (!word.empty() && word.back() == 'y') {
    return std::string(word.substr(0, word.size() - 1)) + "ieth";
  }
  return std::string(word) + "th";
}

// Spells a run of ASCII digit characters.
std::string spell_digits(std::string_view digits) {
  std::string out;
  for (char d : digits) {
    if (!out.empty()) out += ' ';
    out += kOnes[static_cast<unsigned>(d - '0')];
  }
  return out;
}

std::string spell_integer(std::string_view digits) {
  if (digits.size() > kMaxCardinalDigits || (digits.size() > 1 && digits.front() == '0')) {
    return spell_digits(digits);
  }
  std::uint64_t value = 0;
  for (char d : digits) value = value * 10 + static_cast<std::uint64_t>(d - '0');
  return cardinal_words(value);
}

std::string make_ordinal(const std::string& words) {
  auto pos = words.rfind(' ');
  if (pos == std::string::npos) return ordinal_of(words);
  return words.substr(0, pos + 1) + ordinal_of(std::string_view(words).substr(pos + 1));
}

char ascii_digit(UChar32 c) { return static_cast<char>('0' + u_charDigitValue(c)); }

bool is_ordinal_suffix(UChar32 a, UChar32 b) {
  return (a == U's' && b == U't') || (a == U'n' && b == U'd') ||
         (a == U'r' && b == U'd') || (a == U't' && b == U'h');
}

// Replaces every digit run (with optional thousands groups, decimal part or
// ordinal suffix) by its spelled-out words, padded with spaces.
std::u32string expand_numbers(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    if (!is_digit(static_cast<UChar32>(s[i]))) {
      out.push_back(s[i++]);
      continue;
    }
    std::string integer;
    std::size_t j = i;
    while (j < n && is_digit(static_cast<UChar32>(s[j]))) integer += ascii_digit(static_cast<UChar32>(s[j++]));

    // "1,234,567": groups of exactly three digits after a 1-3 digit head.
    if (integer.size() <= 3 && integer.front() != '0') {
      while (j + 3 < n && s[j] == U',' && is_digit(static_cast<UChar32>(s[j + 1])) &&
             is_digit(static_cast<UChar32>(s[j + 2])) && is_digit(static_cast<UChar32>(s[j + 3])) &&
             (j + 4 >= n || !is_digit(static_cast<UChar32>(s[j + 4])))) {
        for (std::size_t k = j + 1; k <= j + 3; ++k) integer += ascii_digit(static_cast<UChar32>(s[k]));
        j += 4;
      }
    }

    std::string fraction;
    if (j + 1 < n && s[j] == U'.' && is_digit(static_cast<UChar32>(s[j + 1]))) {
      ++j;
      while (j < n && is_digit(static_cast<UChar32>(s[j]))) fraction += ascii_digit(static_cast<UChar32>(s[j++]));
    }

    bool ordinal = false;
    if (fraction.empty() && j + 1 < n && is_ordinal_suffix(static_cast<UChar32>(s[j]), static_cast<UChar32>(s[j + 1])) &&
        (j + 2 >= n || !u_isalpha(static_cast<UChar32>(s[j + 2])))) {
      ordinal = true;
      j += 2;
    }

    std::string words = spell_integer(integer);
    if (ordinal) words = make_ordinal(words);
    if (!fraction.empty()) {
      words += " point ";
      words += spell_digits(fraction);
    }
    out.push_back(U' ');
    append_ascii(out, words);
    out.push_back(U' ');
    i = j;
  }
  return out;
}

TokenList split_u32(const std::u32string& s) {
  TokenList tokens;
  std::string cur;
  for (char32_t c : s) {
    if (is_space(static_cast<UChar32>(c))) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      append_utf8(cur, c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

}  // namespace

std::string cardinal_words(std::uint64_t n) {
  if (n >= kCardinalLimit) {
    return spell_digits(std::to_string(n));
  }
  if (n == 0) return std::string(kOnes[0]);
  static constexpr std::array<std::pair<std::uint64_t, std::string_view>, 3> kScales = {{
      {1'000'000'000ULL, "billion"}, {1'000'000ULL, "million"}, {1'000ULL, "thousand"}}};
  std::string out;
  for (const auto& [scale, name] : kScales) {
    if (n >= scale) {
      if (!out.empty()) out += ' ';
      out += below_thousand(static_cast<unsigned>(n / scale));
      out += ' ';
      out += name;
      n %= scale;
    }
  }
  if (n > 0) {
    if (!out.empty()) out += ' ';
    out += below_thousand(static_cast<unsigned>(n));
  }
  return out;
}

TokenList number_to_words(std::string_view token) {
  auto us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(token.data(), static_cast<int32_t>(token.size())));
  const std::u32string chars = to_u32(us);
  bool has_digit = false;
  for (char32_t c : chars) has_digit = has_digit || is_digit(static_cast<UChar32>(c));
  if (!has_digit) return {std::string(token)};
  return split_u32(expand_numbers(chars));
}

TokenList normalize(std::string_view text) {
  std::u32string chars = lowercase_u32(text);
  for (auto& c : chars) {
    if (is_dash(static_cast<UChar32>(c))) c = U' ';
  }
  chars = expand_numbers(chars);
  std::erase_if(chars, [](char32_t c) { return is_punct(static_cast<UChar32>(c)); });
  return split_u32(chars);
}

bool is_normalized_token(std::string_view token) {
  const auto tokens = normalize(token);
  return tokens.size() == 1 && tokens.front() == token;
}

std::string join(const TokenList& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

StopwordSet::StopwordSet(std::initializer_list<std::string_view> words) {
  for (auto w : words) insert(w);
}

void StopwordSet::insert(std::string_view word) {
  auto tokens = normalize(word);
  if (tokens.size() != 1) {
    spdlog::warn("stopword '{}' does not normalize to a single token; ignored", word);
    return;
  }
  words_.insert(std::move(tokens.front()));
}

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file: " + path.string());
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    set.insert(std::string_view(line).substr(first, last - first + 1));
  }
  return set;
}

TokenList filter_stopwords(const TokenList& tokens, const StopwordSet& stop) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stop.contains(t)) out.push_back(t);
  }
  return out;
}

}  // namespace ctxforge
