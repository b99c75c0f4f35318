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

// Flat cosine search: OpenMP path against the serial reference.
//
//   ./build/bench/topn_bench --benchmark_filter=TopN

#include <random>

#include <benchmark/benchmark.h>

#include "ctxforge/vector_index.h"

namespace {

ctxforge::VocabStore random_store(std::size_t count, std::size_t dim) {
  std::mt19937_64 rng(42);
  std::normal_distribution<float> gauss;
  ctxforge::VocabStore store(dim);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& x : v) x = gauss(rng);
    store.add("w" + std::to_string(i), "", v);
  }
  return store;
}

std::vector<float> random_query(std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<float> gauss;
  std::vector<float> q(dim);
  for (auto& x : q) x = gauss(rng);
  return q;
}

void BM_TopN_Serial(benchmark::State& state) {
  const auto store = random_store(static_cast<std::size_t>(state.range(0)), 384);
  const ctxforge::FlatIndex index(store);
  const auto q = random_query(384);
  for (auto _ : state) benchmark::DoNotOptimize(index.top_n_serial(q, 250));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TopN_Parallel(benchmark::State& state) {
  const auto store = random_store(static_cast<std::size_t>(state.range(0)), 384);
  const ctxforge::FlatIndex index(store);
  const auto q = random_query(384);
  for (auto _ : state) benchmark::DoNotOptimize(index.top_n(q, 250));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_TopN_Serial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopN_Parallel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
