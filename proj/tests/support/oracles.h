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

// Independent reference computations used by the unit and acceptance
// suites. Nothing here calls into the code paths being checked, apart from
// the shared cosine primitive the rankings are defined over.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ctxforge/vector_index.h"
#include "ctxforge/vocab_store.h"

namespace ctxforge::testing {

// Minimal edit distance by enumerating every alignment (no memoization).
inline std::size_t brute_edit_distance(const std::vector<std::string>& a, std::size_t i,
                                       const std::vector<std::string>& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  const std::size_t sub = brute_edit_distance(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1);
  const std::size_t del = brute_edit_distance(a, i + 1, b, j) + 1;
  const std::size_t ins = brute_edit_distance(a, i, b, j + 1) + 1;
  return std::min({sub, del, ins});
}

inline std::size_t brute_edit_distance(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
  return brute_edit_distance(a, 0, b, 0);
}

// Every sequence over `alphabet` with length in [min_len, max_len].
inline std::vector<std::vector<std::string>> all_sequences(const std::vector<std::string>& alphabet,
                                                           std::size_t min_len, std::size_t max_len) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::vector<std::string>> frontier{{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) out.insert(out.end(), frontier.begin(), frontier.end());
    std::vector<std::vector<std::string>> next;
    for (const auto& s : frontier) {
      for (const auto& w : alphabet) {
        auto t = s;
        t.push_back(w);
        next.push_back(std::move(t));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

// Full scan, full stable sort by descending cosine: ties keep store order.
inline std::vector<std::size_t> brute_ranking(const VocabStore& store, std::span<const float> query,
                                              std::size_t n) {
  std::vector<double> scores(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) scores[i] = cosine_similarity(query, store.vector(i));
  std::vector<std::size_t> order(store.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(n, order.size()));
  return order;
}

/// Random store with Gaussian rows. Roughly `dup_share` of the rows copy an
/// earlier row so that exact score ties occur, and every 50th row is zero.
inline VocabStore random_store(std::mt19937_64& rng, std::size_t count, std::size_t dim,
                               double dup_share = 0.05) {
  std::normal_distribution<float> gauss;
  std::uniform_real_distribution<double> coin;
  VocabStore store(dim);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0 && coin(rng) < dup_share) {
      auto src = store.vector(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
      v.assign(src.begin(), src.end());
    } else if (i % 50 == 49) {
      std::fill(v.begin(), v.end(), 0.0f);
    } else {
      for (auto& x : v) x = gauss(rng);
    }
    store.add("w" + std::to_string(i), "", v);
  }
  return store;
}

inline std::vector<float> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> gauss;
  std::vector<float> v(dim);
  for (auto& x : v) x = gauss(rng);
  return v;
}

}  // namespace ctxforge::testing
