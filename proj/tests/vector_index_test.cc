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

#include <doctest.h>

#include <random>

#include "ctxforge/vector_index.h"
#include "support/oracles.h"

using namespace ctxforge;
using ctxforge::testing::brute_ranking;
using ctxforge::testing::random_store;
using ctxforge::testing::random_vector;

namespace {

std::vector<std::size_t> positions(const Ranking& r) {
  std::vector<std::size_t> out;
  for (const auto& it : r.items) out.push_back(it.position);
  return out;
}

}  // namespace

TEST_CASE("cosine examples") {
  const std::vector<float> a{1, 0}, b{0, 1}, c{2, 0}, z{0, 0};
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, b) == doctest::Approx(0.0));
  CHECK(cosine_similarity(a, c) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, z) == 0.0);
  CHECK(cosine_similarity(z, z) == 0.0);
  CHECK_THROWS_AS(cosine_similarity(a, std::vector<float>{1, 2, 3}), DimensionMismatch);
}

TEST_CASE("top_n basic example") {
  VocabStore s(2);
  s.add("east", "", std::vector<float>{1, 0});
  s.add("north", "", std::vector<float>{0, 1});
  s.add("northeast", "", std::vector<float>{1, 1});
  const std::vector<float> q{1, 0.1f};
  auto r = top_n(s, q, 2);
  CHECK(r.words() == std::vector<std::string>{"east", "northeast"});
  CHECK(top_n(s, q, 10).size() == 3);
  CHECK_THROWS_AS(top_n(s, q, 0), std::invalid_argument);
  CHECK_THROWS_AS(top_n(s, std::vector<float>{1, 0, 0}, 1), DimensionMismatch);
}

TEST_CASE("ties break by store position") {
  VocabStore s(2);
  s.add("b", "", std::vector<float>{1, 1});
  s.add("a", "", std::vector<float>{2, 2});
  s.add("c", "", std::vector<float>{1, 1});
  FlatIndex idx(s);
  const std::vector<float> q{1, 1};
  CHECK(idx.top_n(q, 3).words() == std::vector<std::string>{"b", "a", "c"});
  CHECK(idx.top_n_serial(q, 3).words() == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("empty store gives empty ranking") {
  VocabStore s(3);
  FlatIndex idx(s);
  CHECK(idx.top_n(std::vector<float>{1, 2, 3}, 5).empty());
  CHECK(idx.top_n_serial(std::vector<float>{1, 2, 3}, 5).empty());
}

TEST_CASE("zero query ranks in store order") {
  std::mt19937_64 rng(1);
  auto s = random_store(rng, 30, 4);
  auto r = top_n(s, std::vector<float>(4, 0.0f), 30);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.items[i].position == i);
}

TEST_CASE("parallel and serial equal the brute-force ranking") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng() % 24;
    auto s = random_store(rng, rng() % 700, dim, 0.1);
    FlatIndex idx(s);
    for (int qi = 0; qi < 5; ++qi) {
      auto q = random_vector(rng, dim);
      for (std::size_t n : {1, 7, 100, 1000}) {
        auto par = idx.top_n(q, n);
        auto ser = idx.top_n_serial(q, n);
        REQUIRE(par == ser);
        REQUIRE(positions(par) == brute_ranking(s, q, n));
        for (const auto& it : par.items) {
          CHECK(it.word == s.word(it.position));
          CHECK(it.score == cosine_similarity(q, s.vector(it.position)));
        }
      }
    }
  }
}

TEST_CASE("prefix property: top n is the first n of top m") {
  std::mt19937_64 rng(7);
  auto s = random_store(rng, 400, 8, 0.1);
  FlatIndex idx(s);
  for (int qi = 0; qi < 10; ++qi) {
    auto q = random_vector(rng, 8);
    auto big = positions(idx.top_n(q, 200));
    for (std::size_t n : {1, 5, 50, 199}) {
      auto small = positions(idx.top_n(q, n));
      CHECK(std::equal(small.begin(), small.end(), big.begin()));
    }
  }
}

TEST_CASE("query scale invariance") {
  std::mt19937_64 rng(9);
  auto s = random_store(rng, 300, 16, 0.1);
  FlatIndex idx(s);
  for (int qi = 0; qi < 10; ++qi) {
    auto q = random_vector(rng, 16);
    auto base = positions(idx.top_n(q, 50));
    // Power-of-two factors scale exactly, so scores stay bit-identical.
    for (float k : {0.25f, 2.0f, 1024.0f}) {
      auto scaled = q;
      for (auto& x : scaled) x *= k;
      CHECK(positions(idx.top_n(scaled, 50)) == base);
    }
  }
}

TEST_CASE("scores are sorted descending") {
  std::mt19937_64 rng(3);
  auto s = random_store(rng, 500, 12);
  auto r = top_n(s, random_vector(rng, 12), 500);
  for (std::size_t i = 1; i < r.size(); ++i) {
    CHECK(r.items[i - 1].score >= r.items[i].score);
    if (r.items[i - 1].score == r.items[i].score) {
      CHECK(r.items[i - 1].position < r.items[i].position);
    }
  }
}
