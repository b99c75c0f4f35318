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

#include <cstddef>
#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "ctxforge/textnorm.h"

namespace ctxforge {

/// The word list handed to the recognizer for one segment.
///
/// Always deduplicated (first occurrence wins), stopword-free and made of
/// normalized single tokens; the only way to build one is from tokens that
/// pass through `from_tokens`.
class ContextList {
 public:
  ContextList() = default;

  // Drops empty tokens, stopwords and repeats. Tokens must be normalized.
  static ContextList from_tokens(const TokenList& tokens, const StopwordSet& stop);

  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  bool contains(const std::string& word) const { return members_.count(word) != 0; }

  friend bool operator==(const ContextList& a, const ContextList& b) { return a.words_ == b.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> members_;
};

// Final transcripts of up to k preceding segments, oldest first.
class HistoryWindow {
 public:
  explicit HistoryWindow(std::size_t k) : k_(k) {}

  void push(std::string transcript);
  std::size_t k() const { return k_; }
  const std::deque<std::string>& transcripts() const { return transcripts_; }
  bool empty() const { return transcripts_.empty(); }

  // Oldest to newest, single-space separated.
  std::string joined() const;

 private:
  std::size_t k_;
  std::deque<std::string> transcripts_;
};

}  // namespace ctxforge
