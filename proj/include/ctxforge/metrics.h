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

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ctxforge/context_types.h"
#include "ctxforge/error.h"
#include "ctxforge/textnorm.h"
#include "ctxforge/vocab_store.h"

namespace ctxforge {

class UndefinedWerError : public Error {
 public:
  using Error::Error;
};

struct WerBreakdown {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;
  double wer = 0.0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
};

enum class EditOp { kMatch, kSubstitution, kDeletion, kInsertion };

/// Minimal unit-cost alignment of hypothesis against reference. Among
/// equal-cost paths the backtrace prefers match/substitution, then
/// deletion, then insertion.
std::vector<EditOp> align(const TokenList& reference, const TokenList& hypothesis);

/// Word error rate (S + D + I) / N. Throws UndefinedWerError when the
/// reference is empty.
WerBreakdown wer(const TokenList& reference, const TokenList& hypothesis);

/// Share of the oracle context recovered, in percent. No value when the
/// oracle is empty.
std::optional<double> overlap_score(const ContextList& context, const ContextList& oracle);

// Pooled overlap over many segments: sum of hits / sum of oracle sizes.
class OverlapAccumulator {
 public:
  void add(const ContextList& context, const ContextList& oracle);
  std::optional<double> value() const;
  std::size_t segments() const { return segments_; }

 private:
  std::size_t hits_ = 0;
  std::size_t total_ = 0;
  std::size_t segments_ = 0;
};

/// Mean context size over mean oracle size. No value when the oracle mean
/// is zero. Throws std::invalid_argument on a length mismatch.
std::optional<double> count_ratio(std::span<const std::size_t> sizes,
                                  std::span<const std::size_t> oracle_sizes);
std::optional<double> count_ratio(std::span<const ContextList> contexts,
                                  std::span<const ContextList> oracle_contexts);

// method / baseline. Throws std::invalid_argument unless baseline > 0.
double time_ratio(double method_elapsed_s, double baseline_elapsed_s);

// (wer_none - wer_method) / wer_none; no value when wer_none is zero.
std::optional<double> relative_reduction(double wer_none, double wer_method);

enum class EntityType {
  kLocation,
  kOrganization,
  kGeopolitical,
  kProduct,
  kPerson,
  kNationalityReligiousPolitical,
};

// Accepts the long names ("Person", "Nationality-Religion-Political Groups")
// and the usual NER tags (PERSON, ORG, GPE, LOC, PRODUCT, NORP), any case.
std::optional<EntityType> parse_entity_type(std::string_view name);
std::string_view entity_type_name(EntityType type);

struct EntityAnnotation {
  std::string surface;
  EntityType type;
};

/// Reads `surface<TAB>type` lines. Surfaces are normalized and joined with
/// single spaces; types outside the rare set are skipped.
std::vector<EntityAnnotation> read_entities(const std::filesystem::path& path);

struct CorpusRates {
  double oov_pct = 0.0;       // unique corpus words not in the vocabulary
  double rare_pct = 0.0;      // unique rare entities over unique corpus words
  std::size_t unique_words = 0;
  std::size_t oov_words = 0;
  std::size_t rare_entities = 0;
  std::size_t oov_entities = 0;  // rare entities not in the vocabulary
};

CorpusRates oov_and_rare_rates(const TokenList& corpus, std::span<const EntityAnnotation> entities,
                               const VocabStore& vocab, const StopwordSet& stop);

struct ZipfRow {
  std::size_t rank = 0;
  std::string word;
  std::size_t frequency = 0;

  friend bool operator==(const ZipfRow&, const ZipfRow&) = default;
};

// Descending frequency, ties in lexicographic order, ranks from 1.
std::vector<ZipfRow> zipf_table(const TokenList& corpus);

// `rank,word,frequency` header plus one line per row.
void write_zipf_csv(std::span<const ZipfRow> rows, std::ostream& out);

}  // namespace ctxforge
