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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <spdlog/spdlog.h>

#include "ctxforge/cli.h"
#include "ctxforge/metrics.h"
#include "ctxforge/pipeline.h"
#include "ctxforge/report.h"
#include "ctxforge/vector_index.h"
#include "ctxforge/vocab_store.h"
#include "support/oracles.h"
#include "support/synthetic.h"
#include "support/unicode_fuzz.h"

namespace fs = std::filesystem;
using namespace ctxforge;
using namespace ctxforge::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome wer_oracle() {
  const auto t0 = Clock::now();
  const auto seqs = all_sequences({"a", "b", "c"}, 0, 5);
  std::size_t pairs = 0, mismatches = 0;
  for (const auto& r : seqs) {
    if (r.empty()) continue;
    for (const auto& h : seqs) {
      ++pairs;
      if (wer(r, h).errors() != brute_edit_distance(r, h)) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.2f s", secs)};
}

Outcome topn_exactness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1000);
  std::size_t checks = 0, mismatches = 0;
  for (int s = 0; s < 100; ++s) {
    auto store = random_store(rng, 1000, 16);
    FlatIndex index(store);
    for (int q = 0; q < 10; ++q) {
      auto query = random_vector(rng, 16);
      for (std::size_t n : {1, 10, 100}) {
        auto got = index.top_n(query, n);
        auto expect = brute_ranking(store, query, n);
        bool same = got.size() == expect.size();
        for (std::size_t i = 0; same && i < expect.size(); ++i) same = got.items[i].position == expect[i];
        ++checks;
        if (!same) ++mismatches;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 30.0,
          std::to_string(checks) + " rankings, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.2f s", secs)};
}

SimConfig sim(std::uint64_t seed) {
  SimConfig c;
  c.seed = seed;
  c.p_ctx = 0.95;
  c.p_base = 0.5;
  c.common_words.insert(synthetic_common_words().begin(), synthetic_common_words().end());
  return c;
}

Outcome structural_rows() {
  auto corpus = make_synthetic_corpus(77);
  auto stop = synthetic_stopword_set();
  SimulatedAsr asr(sim(77), stop);
  Collaborators collab{&asr, &stop};
  bool ok = true;
  std::string detail;
  for (auto mode : {Timing::kWall, Timing::kModeled}) {
    std::vector<MethodRun> runs{run_corpus(corpus.docs, Variant{Method::kOracle}, collab, {mode, {}}),
                                run_corpus(corpus.docs, Variant{Method::kNone}, collab, {mode, {}})};
    auto rep = evaluate_run(runs, corpus.docs, stop, mode);
    const auto& o = rep.rows[0];
    const auto& n = rep.rows[1];
    ok = ok && o.overlap_pct && *o.overlap_pct == 100.0 && o.count_ratio && *o.count_ratio == 1.0 &&
         n.time_ratio && *n.time_ratio == 1.0;
    detail += std::string(mode == Timing::kWall ? "wall" : "modeled") + ": overlap " +
              (o.overlap_pct ? fmt("%.17g", *o.overlap_pct) : "none") + ", count " +
              (o.count_ratio ? fmt("%.17g", *o.count_ratio) : "none") + ", none time " +
              (n.time_ratio ? fmt("%.17g", *n.time_ratio) : "none") + "; ";
  }
  return {ok, detail};
}

struct SweepMeans {
  double oracle = 0, rag100 = 0, rag250 = 0, none = 0;
};

// Mean WER (percent) over 20 seeded synthetic corpora.
const SweepMeans& sweep() {
  static const SweepMeans means = [] {
    SweepMeans m;
    constexpr int kSeeds = 20;
    for (int s = 0; s < kSeeds; ++s) {
      const auto seed = static_cast<std::uint64_t>(s);
      auto corpus = make_synthetic_corpus(seed);
      auto stop = synthetic_stopword_set();
      HashEmbedder emb(256);
      auto store = build_store(corpus.wordlist, emb);
      FlatIndex index(store);
      SimulatedAsr asr(sim(seed), stop);
      Collaborators collab{&asr, &stop, &index, &emb};
      TimingPolicy timing{Timing::kModeled, {}};
      std::vector<MethodRun> runs{
          run_corpus(corpus.docs, Variant{Method::kOracle}, collab, timing),
          run_corpus(corpus.docs, Variant{Method::kCbRag, 100, 5}, collab, timing),
          run_corpus(corpus.docs, Variant{Method::kCbRag, 250, 5}, collab, timing),
          run_corpus(corpus.docs, Variant{Method::kNone}, collab, timing)};
      auto rep = evaluate_run(runs, corpus.docs, stop, Timing::kModeled);
      m.oracle += 100.0 * rep.rows[0].wer / kSeeds;
      m.rag100 += 100.0 * rep.rows[1].wer / kSeeds;
      m.rag250 += 100.0 * rep.rows[2].wer / kSeeds;
      m.none += 100.0 * rep.rows[3].wer / kSeeds;
    }
    return m;
  }();
  return means;
}

Outcome method_ordering() {
  const auto t0 = Clock::now();
  const auto& m = sweep();
  const double secs = seconds_since(t0);
  const bool ok = m.oracle <= m.rag100 && m.rag100 <= m.none && m.rag100 - m.oracle >= 1.0 &&
                  m.none - m.rag100 >= 1.0 && secs < 120.0;
  return {ok, "Oracle " + fmt("%.2f", m.oracle) + " <= CB-RAG[100,5] " + fmt("%.2f", m.rag100) +
                  " <= None " + fmt("%.2f", m.none) + " (WER %), " + fmt("%.1f s", secs)};
}

Outcome c_monotonicity() {
  const auto& m = sweep();
  return {m.rag250 <= m.rag100 + 0.5,
          "c=250 " + fmt("%.2f", m.rag250) + " vs c=100 " + fmt("%.2f", m.rag100) + " + 0.5 (WER %)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ctxforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "ctxforge_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  fs::copy(CTXFORGE_DATA_DIR, root, fs::copy_options::recursive);
  const auto demo = root / "demo";
  const auto config = (demo / "run.toml").string();
  if (cli({"build-vocab", "--input", (demo / "wordlist.tsv").string(), "--out",
           (demo / "vocab.ctxemb").string(), "--config", config}) != 0) {
    return {false, "build-vocab failed"};
  }
  if (cli({"run", "--config", config, "--out", (root / "a").string()}) != 0 ||
      cli({"run", "--config", config, "--out", (root / "b").string()}) != 0) {
    return {false, "run failed"};
  }
  const auto a = slurp(root / "a" / "report.json");
  const auto b = slurp(root / "b" / "report.json");
  fs::remove_all(root);
  return {!a.empty() && a == b, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " bytes, " +
                                    (a == b ? "identical" : "different")};
}

Outcome normalization_fuzz() {
  std::mt19937_64 rng(10000);
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto text = random_unicode(rng, 60);
    const auto once = normalize(text);
    for (const auto& t : once) {
      if (!token_is_pure(t)) ++violations;
    }
    if (normalize(join(once)) != once) ++violations;
  }
  return {violations == 0, "10000 strings, " + std::to_string(violations) + " violations"};
}

Outcome store_round_trip() {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> gauss;
  VocabStore store(32);
  std::vector<float> v(32);
  for (int i = 0; i < 1000; ++i) {
    for (auto& x : v) x = gauss(rng);
    store.add("entry" + std::to_string(i), i % 2 ? "definition of entry " + std::to_string(i) : "", v);
  }
  const auto path = fs::temp_directory_path() / "ctxforge_acceptance.ctxemb";
  save_store(store, path);
  const auto back = load_store(path);
  fs::remove(path);
  const bool bits = back.size() == store.size() &&
                    std::memcmp(back.matrix().data(), store.matrix().data(),
                                store.matrix().size() * sizeof(float)) == 0;
  return {back == store && bits, std::to_string(back.size()) + " entries, dim " + std::to_string(back.dim())};
}

Outcome reduction_formula() {
  EvaluationReport rep;
  rep.timing = "modeled";
  ReportRow none;
  none.label = "No Context";
  none.baseline = true;
  none.wer = 0.189;
  ReportRow method;
  method.label = "Method";
  method.wer = 0.164;
  method.relative_reduction = relative_reduction(none.wer, method.wer);
  none.relative_reduction = 0.0;
  rep.rows = {none, method};
  const auto md = report_markdown(rep);
  const bool ok = md.find("| Method | 16.4% | -- | -- | -- | 13.2% |") != std::string::npos;
  return {ok, "relative reduction " + fmt("%.4f", *method.relative_reduction)};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"WER oracle equivalence (exhaustive, lengths <= 5)", wer_oracle},
      {"Top-N exactness (100 stores x 10 queries, n in {1,10,100})", topn_exactness},
      {"Structural rows (oracle overlap 100%, count 1.0; no-context time 1.0)", structural_rows},
      {"Method ordering Oracle <= CB-RAG[100,5] <= None, gaps >= 1 point", method_ordering},
      {"c-monotonicity (c=250 <= c=100 + 0.5 points)", c_monotonicity},
      {"Determinism (two runs, byte-identical report.json)", determinism},
      {"Normalization idempotence and token purity (10k fuzz)", normalization_fuzz},
      {"CTXEMB01 round trip (1000 entries, bitwise)", store_round_trip},
      {"Relative-reduction formula (18.9% vs 16.4% -> 13.2%)", reduction_formula},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s  [%s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
