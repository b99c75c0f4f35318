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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ctxforge/metrics.h"
#include "support/oracles.h"

namespace fs = std::filesystem;
using namespace ctxforge;
using Words = std::vector<std::string>;

namespace {

ContextList ctx(std::initializer_list<std::string> words) {
  return ContextList::from_tokens(TokenList(words), StopwordSet{});
}

VocabStore vocab_of(const Words& words) {
  VocabStore s(1);
  for (const auto& w : words) s.add(w, "", std::vector<float>{1});
  return s;
}

}  // namespace

TEST_CASE("wer examples") {
  auto same = wer({"a", "b"}, {"a", "b"});
  CHECK(same.errors() == 0);
  CHECK(same.wer == 0.0);

  auto sub = wer({"hello", "world"}, {"hello", "word"});
  CHECK(sub.substitutions == 1);
  CHECK(sub.wer == 0.5);

  auto del = wer({"a", "b", "c"}, {});
  CHECK(del.deletions == 3);
  CHECK(del.wer == 1.0);

  auto ins = wer({"a"}, {"a", "b", "c"});
  CHECK(ins.insertions == 2);
  CHECK(ins.wer == 2.0);

  CHECK_THROWS_AS(wer({}, {"a"}), UndefinedWerError);
}

TEST_CASE("alignment prefers substitution over insertion and deletion") {
  auto w = wer({"a"}, {"b", "c"});
  CHECK(w.substitutions == 1);
  CHECK(w.insertions == 1);
  CHECK(w.deletions == 0);

  auto v = wer({"a", "b"}, {"c"});
  CHECK(v.substitutions == 1);
  CHECK(v.deletions == 1);
  CHECK(v.insertions == 0);
}

TEST_CASE("align ops rebuild both sequences") {
  std::mt19937_64 rng(4);
  const Words alphabet{"a", "b", "c", "d"};
  for (int trial = 0; trial < 500; ++trial) {
    Words ref, hyp;
    for (std::size_t i = 1 + rng() % 8; i > 0; --i) ref.push_back(alphabet[rng() % 4]);
    for (std::size_t i = rng() % 8; i > 0; --i) hyp.push_back(alphabet[rng() % 4]);
    auto ops = align(ref, hyp);
    std::size_t ri = 0, hi = 0, s = 0, d = 0, in = 0;
    for (auto op : ops) {
      switch (op) {
        case EditOp::kMatch: REQUIRE(ref[ri++] == hyp[hi++]); break;
        case EditOp::kSubstitution: REQUIRE(ref[ri++] != hyp[hi++]); ++s; break;
        case EditOp::kDeletion: ++ri; ++d; break;
        case EditOp::kInsertion: ++hi; ++in; break;
      }
    }
    CHECK(ri == ref.size());
    CHECK(hi == hyp.size());
    auto w = wer(ref, hyp);
    CHECK(w.substitutions == s);
    CHECK(w.deletions == d);
    CHECK(w.insertions == in);
    CHECK(w.substitutions + w.deletions <= w.ref_len);
  }
}

TEST_CASE("wer equals brute-force edit distance, lengths up to 4") {
  auto seqs = ctxforge::testing::all_sequences({"a", "b", "c"}, 0, 4);
  std::size_t pairs = 0;
  for (const auto& r : seqs) {
    if (r.empty()) continue;
    for (const auto& h : seqs) {
      auto w = wer(r, h);
      REQUIRE(w.errors() == ctxforge::testing::brute_edit_distance(r, h));
      REQUIRE(w.wer == static_cast<double>(w.errors()) / r.size());
      ++pairs;
    }
  }
  CHECK(pairs == 120 * 121);
}

TEST_CASE("overlap_score") {
  CHECK(*overlap_score(ctx({"a", "b"}), ctx({"a", "b"})) == 100.0);
  CHECK(*overlap_score(ctx({"x"}), ctx({"a", "b"})) == 0.0);
  CHECK(*overlap_score(ctx({"a", "b"}), ctx({"b", "c", "d"})) == doctest::Approx(100.0 / 3));
  CHECK_FALSE(overlap_score(ctx({"a"}), ctx({})).has_value());
  CHECK(*overlap_score(ctx({"a", "b", "c", "z"}), ctx({"a", "c"})) == 100.0);
}

TEST_CASE("pooled overlap") {
  OverlapAccumulator acc;
  CHECK_FALSE(acc.value().has_value());
  acc.add(ctx({"a"}), ctx({"a", "b"}));
  acc.add(ctx({}), ctx({}));
  acc.add(ctx({"c", "d"}), ctx({"c", "d"}));
  CHECK(acc.segments() == 2);
  CHECK(*acc.value() == 75.0);
}

TEST_CASE("count_ratio") {
  const std::vector<std::size_t> a{10, 30}, o{10, 10}, z{0, 0};
  CHECK(*count_ratio(a, o) == 2.0);
  CHECK(*count_ratio(z, o) == 0.0);
  CHECK(*count_ratio(o, o) == 1.0);
  CHECK_FALSE(count_ratio(o, z).has_value());
  const std::vector<std::size_t> one{1};
  CHECK_THROWS_AS(count_ratio(one, o), std::invalid_argument);

  std::vector<ContextList> lists{ctx({"a", "b"}), ctx({"c"})};
  CHECK(*count_ratio(lists, lists) == 1.0);
}

TEST_CASE("time_ratio and relative reduction") {
  CHECK(time_ratio(3.0, 3.0) == 1.0);
  CHECK(time_ratio(2.0, 1.0) == 2.0);
  CHECK_THROWS_AS(time_ratio(1.0, 0.0), std::invalid_argument);
  CHECK(*relative_reduction(0.2, 0.1) == 0.5);
  CHECK(*relative_reduction(0.189, 0.164) == doctest::Approx(0.1322751));
  CHECK_FALSE(relative_reduction(0.0, 0.1).has_value());
}

TEST_CASE("entity types") {
  CHECK(parse_entity_type("PERSON") == EntityType::kPerson);
  CHECK(parse_entity_type("gpe") == EntityType::kGeopolitical);
  CHECK(parse_entity_type("Nationality-Religion-Political Groups") ==
        EntityType::kNationalityReligiousPolitical);
  CHECK(parse_entity_type("norp") == EntityType::kNationalityReligiousPolitical);
  CHECK_FALSE(parse_entity_type("DATE").has_value());
  for (auto t : {EntityType::kLocation, EntityType::kOrganization, EntityType::kGeopolitical,
                 EntityType::kProduct, EntityType::kPerson,
                 EntityType::kNationalityReligiousPolitical}) {
    CHECK(parse_entity_type(entity_type_name(t)) == t);
  }
}

TEST_CASE("read_entities") {
  const auto path = fs::temp_directory_path() / "ctxforge_entities.tsv";
  {
    std::ofstream(path) << "New York\tGPE\nEinstein\tPERSON\nMonday\tDATE\n\n";
  }
  auto e = read_entities(path);
  REQUIRE(e.size() == 2);
  CHECK(e[0].surface == "new york");
  CHECK(e[0].type == EntityType::kGeopolitical);
  CHECK(e[1].surface == "einstein");
  fs::remove(path);
}

TEST_CASE("oov and rare rates") {
  StopwordSet stop{"the"};
  const TokenList corpus{"the", "a", "b", "c", "d", "e", "f", "g", "h", "i", "a"};
  auto all = oov_and_rare_rates({"a", "b"}, {}, vocab_of({"a", "b"}), stop);
  CHECK(all.oov_pct == 0.0);
  CHECK(all.rare_pct == 0.0);

  auto r = oov_and_rare_rates(corpus, {}, vocab_of({"the", "a", "b", "c", "d", "e", "f", "g"}), stop);
  CHECK(r.unique_words == 10);
  CHECK(r.oov_words == 2);
  CHECK(r.oov_pct == 20.0);

  std::vector<EntityAnnotation> ents{{"h", EntityType::kPerson},
                                     {"a", EntityType::kLocation},
                                     {"the", EntityType::kOrganization},
                                     {"h", EntityType::kPerson}};
  auto q = oov_and_rare_rates(corpus, ents, vocab_of({"a"}), stop);
  CHECK(q.rare_entities == 2);
  CHECK(q.oov_entities == 1);
  CHECK(q.rare_pct == 20.0);
}

TEST_CASE("zipf table") {
  CHECK(zipf_table({}).empty());
  CHECK(zipf_table({"a", "a", "b"}) == std::vector<ZipfRow>{{1, "a", 2}, {2, "b", 1}});
  CHECK(zipf_table({"b", "a"}) == std::vector<ZipfRow>{{1, "a", 1}, {2, "b", 1}});
  std::ostringstream out;
  auto rows = zipf_table({"a", "a", "b"});
  write_zipf_csv(rows, out);
  CHECK(out.str() == "rank,word,frequency\n1,a,2\n2,b,1\n");
}
