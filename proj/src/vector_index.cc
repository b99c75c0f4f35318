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

#include "ctxforge/vector_index.h"

#include <algorithm>
#include <stdexcept>

#include <omp.h>

namespace ctxforge {
namespace {

using Hit = std::pair<double, std::size_t>;  // (score, position)

// Strict "ranks before" order: higher score first, then lower position.
bool ranks_before(const Hit& a, const Hit& b) {
  if (a.first != b.first) return a.first > b.first;
  return a.second < b.second;
}

}  // namespace

std::vector<std::string> Ranking::words() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.word);
  return out;
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("cosine_similarity: dimensions " + std::to_string(u.size()) +
                            " and " + std::to_string(v.size()));
  }
  return detail::cosine_from_parts(detail::dot(u, v), detail::norm(u), detail::norm(v));
}

FlatIndex::FlatIndex(const VocabStore& store) : store_(store), norms_(store.size()) {
  const auto count = static_cast<std::ptrdiff_t>(store.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    norms_[static_cast<std::size_t>(i)] = detail::norm(store.vector(static_cast<std::size_t>(i)));
  }
}

void FlatIndex::check_query(std::span<const float> query, std::size_t n) const {
  if (n == 0) throw std::invalid_argument("top_n: n must be at least 1");
  if (query.size() != store_.dim()) {
    throw DimensionMismatch("top_n: query has dimension " + std::to_string(query.size()) +
                            ", store has " + std::to_string(store_.dim()));
  }
}

Ranking FlatIndex::materialize(std::vector<Hit> hits) const {
  Ranking out;
  out.items.reserve(hits.size());
  for (const auto& [score, pos] : hits) out.items.push_back({store_.word(pos), score, pos});
  return out;
}

Ranking FlatIndex::top_n_serial(std::span<const float> query, std::size_t n) const {
  check_query(query, n);
  const double qnorm = detail::norm(query);
  std::vector<Hit> hits(store_.size());
  for (std::size_t i = 0; i < store_.size(); ++i) {
    hits[i] = {detail::cosine_from_parts(detail::dot(query, store_.vector(i)), qnorm, norms_[i]), i};
  }
  const std::size_t keep = std::min(n, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                    ranks_before);
  hits.resize(keep);
  return materialize(std::move(hits));
}

Ranking FlatIndex::top_n(std::span<const float> query, std::size_t n) const {
  check_query(query, n);
  const double qnorm = detail::norm(query);
  const auto count = static_cast<std::ptrdiff_t>(store_.size());
  const std::size_t keep = std::min(n, store_.size());

  std::vector<std::vector<Hit>> partials(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    // Max-heap under ranks_before: the front is the worst hit kept so far.
    auto& heap = partials[static_cast<std::size_t>(omp_get_thread_num())];
    heap.reserve(keep);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto pos = static_cast<std::size_t>(i);
      const Hit hit{detail::cosine_from_parts(detail::dot(query, store_.vector(pos)), qnorm,
                                              norms_[pos]),
                    pos};
      if (heap.size() < keep) {
        heap.push_back(hit);
        std::push_heap(heap.begin(), heap.end(), ranks_before);
      } else if (keep > 0 && ranks_before(hit, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), ranks_before);
        heap.back() = hit;
        std::push_heap(heap.begin(), heap.end(), ranks_before);
      }
    }
  }

  std::vector<Hit> merged;
  for (auto& p : partials) merged.insert(merged.end(), p.begin(), p.end());
  std::partial_sort(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(keep),
                    merged.end(), ranks_before);
  merged.resize(keep);
  return materialize(std::move(merged));
}

Ranking top_n(const VocabStore& store, std::span<const float> query, std::size_t n) {
  return FlatIndex(store).top_n(query, n);
}

}  // namespace ctxforge
