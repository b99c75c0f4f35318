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

#include "ctxforge/vocab_store.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <spdlog/spdlog.h>

#include "ctxforge/textnorm.h"

namespace ctxforge {
namespace {

constexpr std::string_view kMagicStem = "CTXEMB";
constexpr std::string_view kVersion = "01";

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void bytes(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  void put(std::uint64_t v, int n) {
    std::array<char, 8> buf{};
    for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(buf.data(), n);
  }
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::uint64_t uint(int n, const char* what) {
    std::array<unsigned char, 8> buf{};
    read(reinterpret_cast<char*>(buf.data()), static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }

  std::string bytes(const char* what) {
    auto len = static_cast<std::size_t>(uint(4, what));
    std::string s(len, '\0');
    read(s.data(), len, what);
    return s;
  }

  void read(char* dst, std::size_t n, const char* what) {
    if (!in_.read(dst, static_cast<std::streamsize>(n))) {
      throw TruncatedFileError(path_ + ": truncated while reading " + what);
    }
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

VocabStore::VocabStore(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw InvalidDimError("vocabulary dimension must be positive");
}

bool VocabStore::add(std::string word, std::string definition, std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw DimensionMismatch("vector for '" + word + "' has " + std::to_string(vector.size()) +
                            " elements, store dim is " + std::to_string(dim_));
  }
  if (index_.count(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  definitions_.push_back(std::move(definition));
  vectors_.insert(vectors_.end(), vector.begin(), vector.end());
  return true;
}

bool VocabStore::contains(std::string_view word) const {
  return find(word).has_value();
}

std::optional<std::size_t> VocabStore::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const VocabStore& a, const VocabStore& b) {
  return a.dim_ == b.dim_ && a.words_ == b.words_ && a.definitions_ == b.definitions_ &&
         a.vectors_.size() == b.vectors_.size() &&
         std::memcmp(a.vectors_.data(), b.vectors_.data(), a.vectors_.size() * sizeof(float)) == 0;
}

std::vector<WordlistEntry> read_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open wordlist: " + path.string());
  std::vector<WordlistEntry> out;
  std::size_t skipped = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    auto tokens = normalize(std::string_view(line).substr(0, tab));
    if (tokens.size() != 1) {
      ++skipped;
      continue;
    }
    WordlistEntry e{std::move(tokens.front()), {}};
    if (tab != std::string::npos) e.definition = line.substr(tab + 1);
    out.push_back(std::move(e));
  }
  if (skipped) spdlog::warn("{}: skipped {} lines whose word is not a single token", path.string(), skipped);
  return out;
}

std::string embedding_text(const WordlistEntry& entry) {
  if (entry.definition.empty()) return entry.word;
  return entry.word + ": " + entry.definition;
}

VocabStore build_store(std::span<const WordlistEntry> wordlist, EmbeddingProvider& provider,
                       std::size_t batch_size) {
  if (batch_size == 0) batch_size = 1;
  VocabStore store(provider.dim());

  std::vector<const WordlistEntry*> unique;
  {
    std::unordered_map<std::string_view, bool> seen;
    for (const auto& e : wordlist) {
      if (!is_normalized_token(e.word)) {
        throw std::invalid_argument("build_store: '" + e.word + "' is not a normalized token");
      }
      if (seen.emplace(e.word, true).second) unique.push_back(&e);
    }
  }
  if (auto dups = wordlist.size() - unique.size()) {
    spdlog::info("build_store: dropped {} duplicate words (first occurrence kept)", dups);
  }

  std::vector<std::string> texts;
  for (std::size_t start = 0; start < unique.size(); start += batch_size) {
    const std::size_t stop = std::min(unique.size(), start + batch_size);
    texts.clear();
    for (std::size_t i = start; i < stop; ++i) texts.push_back(embedding_text(*unique[i]));
    auto vectors = provider.embed_batch(texts);
    if (vectors.size() != texts.size()) {
      throw EmbeddingResponseError("provider returned a wrong number of vectors");
    }
    for (std::size_t i = start; i < stop; ++i) {
      auto& v = vectors[i - start];
      l2_normalize(v);
      store.add(unique[i]->word, unique[i]->definition, v);
    }
  }
  return store;
}

void save_store(const VocabStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write vocabulary store: " + path.string());
  out.write(kMagicStem.data(), static_cast<std::streamsize>(kMagicStem.size()));
  out.write(kVersion.data(), static_cast<std::streamsize>(kVersion.size()));
  Writer w(out);
  w.u32(static_cast<std::uint32_t>(store.dim()));
  w.u64(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    w.bytes(store.word(i));
    w.bytes(store.definition(i));
    for (float x : store.vector(i)) w.u32(std::bit_cast<std::uint32_t>(x));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

VocabStore load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary store: " + path.string());
  Reader r(in, path.string());

  std::array<char, 8> magic{};
  r.read(magic.data(), magic.size(), "magic");
  const std::string_view got(magic.data(), magic.size());
  if (got.substr(0, kMagicStem.size()) != kMagicStem) {
    throw BadMagicError(path.string() + ": not a CTXEMB file");
  }
  if (got.substr(kMagicStem.size()) != kVersion) {
    throw VersionMismatchError(path.string() + ": unsupported version '" +
                               std::string(got.substr(kMagicStem.size())) + "'");
  }

  const auto dim = static_cast<std::uint32_t>(r.uint(4, "dim"));
  if (dim == 0) throw InvalidDimError(path.string() + ": dim must be positive");
  const std::uint64_t count = r.uint(8, "count");

  VocabStore store(dim);
  std::vector<float> vec(dim);
  std::vector<char> raw(static_cast<std::size_t>(dim) * 4);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string word = r.bytes("word");
    std::string definition = r.bytes("definition");
    r.read(raw.data(), raw.size(), "vector");
    for (std::size_t j = 0; j < dim; ++j) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(raw[j * 4 + b])) << (8 * b);
      }
      vec[j] = std::bit_cast<float>(bits);
    }
    if (!store.add(std::move(word), std::move(definition), vec)) {
      throw VocabFormatError(path.string() + ": duplicate word at entry " + std::to_string(i));
    }
  }
  return store;
}

}  // namespace ctxforge
