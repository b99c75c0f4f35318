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

#include "ctxforge/metrics.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <spdlog/spdlog.h>

namespace ctxforge {

std::vector<EditOp> align(const TokenList& reference, const TokenList& hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [m, &d](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  std::vector<EditOp> ops;
  ops.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        ops.push_back(same ? EditOp::kMatch : EditOp::kSubstitution);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ops.push_back(EditOp::kDeletion);
      --i;
    } else {
      ops.push_back(EditOp::kInsertion);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

WerBreakdown wer(const TokenList& reference, const TokenList& hypothesis) {
  if (reference.empty()) throw UndefinedWerError("WER is undefined for an empty reference");
  WerBreakdown out;
  out.ref_len = reference.size();
  for (auto op : align(reference, hypothesis)) {
    switch (op) {
      case EditOp::kSubstitution: ++out.substitutions; break;
      case EditOp::kDeletion: ++out.deletions; break;
      case EditOp::kInsertion: ++out.insertions; break;
      case EditOp::kMatch: break;
    }
  }
  out.wer = static_cast<double>(out.errors()) / static_cast<double>(out.ref_len);
  return out;
}

namespace {

std::size_t hits(const ContextList& context, const ContextList& oracle) {
  std::size_t n = 0;
  for (const auto& w : oracle.words()) n += context.contains(w);
  return n;
}

}  // namespace

std::optional<double> overlap_score(const ContextList& context, const ContextList& oracle) {
  if (oracle.empty()) return std::nullopt;
  return 100.0 * static_cast<double>(hits(context, oracle)) / static_cast<double>(oracle.size());
}

void OverlapAccumulator::add(const ContextList& context, const ContextList& oracle) {
  if (oracle.empty()) return;
  hits_ += hits(context, oracle);
  total_ += oracle.size();
  ++segments_;
}

std::optional<double> OverlapAccumulator::value() const {
  if (total_ == 0) return std::nullopt;
  return 100.0 * static_cast<double>(hits_) / static_cast<double>(total_);
}

std::optional<double> count_ratio(std::span<const std::size_t> sizes,
                                  std::span<const std::size_t> oracle_sizes) {
  if (sizes.size() != oracle_sizes.size()) {
    throw std::invalid_argument("count_ratio: segment counts differ");
  }
  const auto total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  const auto oracle_total = std::accumulate(oracle_sizes.begin(), oracle_sizes.end(), std::size_t{0});
  if (oracle_total == 0) return std::nullopt;
  // Equal segment counts, so the ratio of means is the ratio of sums.
  return static_cast<double>(total) / static_cast<double>(oracle_total);
}

std::optional<double> count_ratio(std::span<const ContextList> contexts,
                                  std::span<const ContextList> oracle_contexts) {
  std::vector<std::size_t> a, b;
  for (const auto& c : contexts) a.push_back(c.size());
  for (const auto& c : oracle_contexts) b.push_back(c.size());
  return count_ratio(std::span<const std::size_t>(a), std::span<const std::size_t>(b));
}

double time_ratio(double method_elapsed_s, double baseline_elapsed_s) {
  if (!(baseline_elapsed_s > 0.0)) {
    throw std::invalid_argument("time_ratio: baseline time must be positive");
  }
  return method_elapsed_s / baseline_elapsed_s;
}

std::optional<double> relative_reduction(double wer_none, double wer_method) {
  if (wer_none == 0.0) return std::nullopt;
  return (wer_none - wer_method) / wer_none;
}

namespace {

struct TypeName {
  EntityType type;
  std::string_view name;
  std::string_view tag;
};

constexpr std::array<TypeName, 6> kTypeNames = {{
    {EntityType::kLocation, "Location", "loc"},
    {EntityType::kOrganization, "Organization", "org"},
    {EntityType::kGeopolitical, "Geopolitical", "gpe"},
    {EntityType::kProduct, "Product", "product"},
    {EntityType::kPerson, "Person", "person"},
    {EntityType::kNationalityReligiousPolitical, "Nationality-Religion-Political Groups", "norp"},
}};

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::optional<EntityType> parse_entity_type(std::string_view name) {
  const std::string key = lower_ascii(name);
  for (const auto& t : kTypeNames) {
    if (key == lower_ascii(t.name) || key == t.tag) return t.type;
  }
  return std::nullopt;
}

std::string_view entity_type_name(EntityType type) {
  for (const auto& t : kTypeNames) {
    if (t.type == type) return t.name;
  }
  return "unknown";
}

std::vector<EntityAnnotation> read_entities(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open entity file: " + path.string());
  std::vector<EntityAnnotation> out;
  std::size_t skipped = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tab = line.find('\t');
    if (line.empty() || tab == std::string::npos) {
      skipped += !line.empty();
      continue;
    }
    auto type = parse_entity_type(std::string_view(line).substr(tab + 1));
    auto surface = join(normalize(std::string_view(line).substr(0, tab)));
    if (!type || surface.empty()) {
      ++skipped;
      continue;
    }
    out.push_back({std::move(surface), *type});
  }
  if (skipped) spdlog::info("{}: skipped {} entity lines (malformed or non-rare type)", path.string(), skipped);
  return out;
}

CorpusRates oov_and_rare_rates(const TokenList& corpus, std::span<const EntityAnnotation> entities,
                               const VocabStore& vocab, const StopwordSet& stop) {
  CorpusRates r;
  const std::set<std::string> unique(corpus.begin(), corpus.end());
  r.unique_words = unique.size();
  for (const auto& w : unique) r.oov_words += !vocab.contains(w);

  std::set<std::string> rare;
  for (const auto& e : entities) {
    if (!stop.contains(e.surface)) rare.insert(e.surface);
  }
  r.rare_entities = rare.size();
  for (const auto& e : rare) r.oov_entities += !vocab.contains(e);

  if (r.unique_words > 0) {
    r.oov_pct = 100.0 * static_cast<double>(r.oov_words) / static_cast<double>(r.unique_words);
    r.rare_pct = 100.0 * static_cast<double>(r.rare_entities) / static_cast<double>(r.unique_words);
  }
  return r;
}

std::vector<ZipfRow> zipf_table(const TokenList& corpus) {
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& t : corpus) ++freq[t];
  std::vector<ZipfRow> rows;
  rows.reserve(freq.size());
  for (auto& [word, count] : freq) rows.push_back({0, word, count});
  std::sort(rows.begin(), rows.end(), [](const ZipfRow& a, const ZipfRow& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.word < b.word;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
  return rows;
}

void write_zipf_csv(std::span<const ZipfRow> rows, std::ostream& out) {
  out << "rank,word,frequency\n";
  for (const auto& r : rows) out << r.rank << ',' << r.word << ',' << r.frequency << '\n';
}

}  // namespace ctxforge
