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

// Seeded synthetic long-form corpus with planted rare words, used to make
// context effects measurable through the simulated recognizer.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "ctxforge/pipeline.h"
#include "ctxforge/vocab_store.h"

namespace ctxforge::testing {

inline const std::vector<std::string>& synthetic_stopwords() {
  static const std::vector<std::string> words = {
      "the", "a", "of", "and", "to", "in", "is", "it", "that", "we", "on", "for", "with", "as", "this"};
  return words;
}

inline const std::vector<std::string>& synthetic_common_words() {
  static const std::vector<std::string> words = {
      "people", "time", "year", "way", "day", "thing", "world", "life", "hand", "part",
      "child", "eye", "place", "work", "week", "case", "point", "number", "group", "problem",
      "fact", "know", "think", "make", "take", "see", "come", "look", "want", "give",
      "use", "find", "tell", "ask", "seem", "feel", "try", "leave", "call", "good",
      "new", "first", "last", "long", "great", "little", "own", "other", "old", "right"};
  return words;
}

// Lowercase pseudo-word of alternating consonant/vowel letters.
inline std::string pseudo_word(std::mt19937_64& rng, std::size_t len) {
  static const std::string consonants = "bcdfghjklmnprstvz";
  static const std::string vowels = "aeiou";
  std::string w;
  for (std::size_t i = 0; i < len; ++i) {
    const auto& pool = (i % 2 == 0) ? consonants : vowels;
    w += pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  }
  return w;
}

struct SyntheticCorpus {
  std::vector<Document> docs;
  std::vector<std::vector<std::string>> topic_words;  // per document
  std::vector<WordlistEntry> wordlist;                // topic words + distractors
};

/// `docs` documents of `segments` segments each. Every document owns
/// `topic_size` rare words; each segment mixes stopwords, common words and
/// `rare_per_segment` draws from its document's topic.
inline SyntheticCorpus make_synthetic_corpus(std::uint64_t seed, std::size_t docs = 10,
                                             std::size_t segments = 20, std::size_t topic_size = 12,
                                             std::size_t rare_per_segment = 5,
                                             std::size_t distractors = 3000) {
  std::mt19937_64 rng(seed);
  SyntheticCorpus out;
  std::set<std::string> used(synthetic_stopwords().begin(), synthetic_stopwords().end());
  used.insert(synthetic_common_words().begin(), synthetic_common_words().end());
  auto fresh_word = [&](std::size_t min_len, std::size_t max_len) {
    for (;;) {
      auto w = pseudo_word(rng, std::uniform_int_distribution<std::size_t>(min_len, max_len)(rng));
      if (used.insert(w).second) return w;
    }
  };

  for (std::size_t d = 0; d < docs; ++d) {
    std::vector<std::string> topic;
    for (std::size_t i = 0; i < topic_size; ++i) topic.push_back(fresh_word(6, 9));
    out.topic_words.push_back(topic);
  }

  const auto& stop = synthetic_stopwords();
  const auto& common = synthetic_common_words();
  for (std::size_t d = 0; d < docs; ++d) {
    Document doc;
    doc.doc_id = "doc" + std::to_string(d / 10) + std::to_string(d % 10);
    const auto& topic = out.topic_words[d];
    for (std::size_t s = 0; s < segments; ++s) {
      std::vector<std::string> tokens;
      for (std::size_t i = 0; i < 6; ++i) tokens.push_back(stop[rng() % stop.size()]);
      for (std::size_t i = 0; i < 9; ++i) tokens.push_back(common[rng() % common.size()]);
      for (std::size_t i = 0; i < rare_per_segment; ++i) tokens.push_back(topic[rng() % topic.size()]);
      std::shuffle(tokens.begin(), tokens.end(), rng);
      std::string text;
      for (const auto& t : tokens) {
        if (!text.empty()) text += ' ';
        text += t;
      }
      Segment seg;
      seg.doc_id = doc.doc_id;
      seg.index = s;
      seg.reference = text;
      seg.start_s = 10.0 * static_cast<double>(s);
      seg.end_s = seg.start_s.value() + 9.5;
      doc.segments.push_back(std::move(seg));
    }
    out.docs.push_back(std::move(doc));
  }

  for (const auto& topic : out.topic_words) {
    for (const auto& w : topic) out.wordlist.push_back({w, ""});
  }
  for (const auto& w : common) out.wordlist.push_back({w, ""});
  for (std::size_t i = 0; i < distractors; ++i) out.wordlist.push_back({fresh_word(5, 10), ""});
  std::shuffle(out.wordlist.begin(), out.wordlist.end(), rng);
  return out;
}

inline StopwordSet synthetic_stopword_set() {
  StopwordSet s;
  for (const auto& w : synthetic_stopwords()) s.insert(w);
  return s;
}

}  // namespace ctxforge::testing
