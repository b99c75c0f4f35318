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

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ctxforge/vocab_store.h"

namespace ctxforge {

struct RankedWord {
  std::string word;
  double score = 0.0;
  std::size_t position = 0;  // index in the store

  friend bool operator==(const RankedWord&, const RankedWord&) = default;
};

// Descending score, ties by ascending store position. No duplicates.
struct Ranking {
  std::vector<RankedWord> items;

  std::vector<std::string> words() const;
  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  friend bool operator==(const Ranking&, const Ranking&) = default;
};

namespace detail {

// Shared scoring arithmetic. Every search path goes through these so that
// all of them produce bit-identical scores.
inline double dot(std::span<const float> u, std::span<const float> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += static_cast<double>(u[i]) * v[i];
  return acc;
}

inline double norm(std::span<const float> v) { return std::sqrt(dot(v, v)); }

inline double cosine_from_parts(double dot, double norm_u, double norm_v) {
  if (norm_u == 0.0 || norm_v == 0.0) return 0.0;
  return dot / (norm_u * norm_v);
}

}  // namespace detail

/// dot(u, v) / (|u| |v|), or 0.0 when either vector is zero.
/// Throws DimensionMismatch when the lengths differ.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

/// Exact flat cosine search over a VocabStore.
///
/// Row norms are computed once at construction. `top_n` splits the scan
/// across OpenMP threads, each keeping a bounded heap, and merges the
/// partial results; `top_n_serial` is the single-threaded reference path.
/// Both return identical rankings. The index borrows the store, which must
/// outlive it.
class FlatIndex {
 public:
  explicit FlatIndex(const VocabStore& store);

  const VocabStore& store() const { return store_; }

  Ranking top_n(std::span<const float> query, std::size_t n) const;
  Ranking top_n_serial(std::span<const float> query, std::size_t n) const;

 private:
  void check_query(std::span<const float> query, std::size_t n) const;
  Ranking materialize(std::vector<std::pair<double, std::size_t>> hits) const;

  const VocabStore& store_;
  std::vector<double> norms_;
};

// One-shot search; builds a temporary index.
Ranking top_n(const VocabStore& store, std::span<const float> query, std::size_t n);

}  // namespace ctxforge
