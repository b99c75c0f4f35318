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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxforge/embedding.h"
#include "ctxforge/error.h"

namespace ctxforge {

class VocabFormatError : public Error {
 public:
  using Error::Error;
};
class BadMagicError : public VocabFormatError {
 public:
  using VocabFormatError::VocabFormatError;
};
class VersionMismatchError : public VocabFormatError {
 public:
  using VocabFormatError::VocabFormatError;
};
class TruncatedFileError : public VocabFormatError {
 public:
  using VocabFormatError::VocabFormatError;
};
class InvalidDimError : public VocabFormatError {
 public:
  using VocabFormatError::VocabFormatError;
};

/// The retrieval vocabulary: words, optional definitions and one embedding
/// per word, stored as a row-major matrix. Immutable once built.
class VocabStore {
 public:
  explicit VocabStore(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Appends an entry. Returns false (and stores nothing) if the word is
  // already present. Throws DimensionMismatch on a wrong vector length.
  bool add(std::string word, std::string definition, std::span<const float> vector);

  bool contains(std::string_view word) const;
  std::optional<std::size_t> find(std::string_view word) const;

  const std::string& word(std::size_t i) const { return words_[i]; }
  const std::string& definition(std::size_t i) const { return definitions_[i]; }
  std::span<const float> vector(std::size_t i) const {
    return {vectors_.data() + i * dim_, dim_};
  }
  std::span<const float> matrix() const { return vectors_; }

  // Entry order, text and vector bits all equal.
  friend bool operator==(const VocabStore& a, const VocabStore& b);

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<std::string> definitions_;
  std::vector<float> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct WordlistEntry {
  std::string word;
  std::string definition;
};

/// Reads a UTF-8 TSV of `word<TAB>definition` (definition optional). Words
/// are normalized; lines whose word is not a single token are skipped.
std::vector<WordlistEntry> read_wordlist(const std::filesystem::path& path);

// Text handed to the embedder for a vocabulary entry: "word: definition",
// or just the word when there is no definition.
std::string embedding_text(const WordlistEntry& entry);

/// Embeds every entry and L2-normalizes the result (zero vectors are kept).
/// Duplicate words keep their first occurrence. Words must already be
/// normalized single tokens.
VocabStore build_store(std::span<const WordlistEntry> wordlist, EmbeddingProvider& provider,
                       std::size_t batch_size = 256);

/// CTXEMB01 layout, little endian: magic "CTXEMB01", u32 dim, u64 count,
/// then per entry u32 len + word, u32 len + definition, dim x f32.
void save_store(const VocabStore& store, const std::filesystem::path& path);
VocabStore load_store(const std::filesystem::path& path);

inline bool contains(const VocabStore& store, std::string_view word) {
  return store.contains(word);
}

}  // namespace ctxforge
