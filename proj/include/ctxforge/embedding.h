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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxforge/error.h"

namespace ctxforge {

using Vector = std::vector<float>;

class EmbeddingError : public Error {
 public:
  using Error::Error;
};
class EmbeddingTransportError : public EmbeddingError {
 public:
  using EmbeddingError::EmbeddingError;
};
class EmbeddingStatusError : public EmbeddingError {
 public:
  EmbeddingStatusError(int status, const std::string& what)
      : EmbeddingError(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};
class EmbeddingResponseError : public EmbeddingError {
 public:
  using EmbeddingError::EmbeddingError;
};
class DimensionDriftError : public EmbeddingError {
 public:
  using EmbeddingError::EmbeddingError;
};

/// Maps text to a fixed-dimension vector.
///
/// Implementations must return one vector per input in order, map the empty
/// string to the all-zero vector, and be deterministic per instance. They
/// must be safe to call from several threads at once.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() = 0;
  virtual std::vector<Vector> embed_batch(std::span<const std::string> texts) = 0;

  Vector embed(const std::string& text);
};

// In-place L2 normalization (accumulated in double). Zero stays zero.
void l2_normalize(std::span<float> v);

/// Deterministic character-trigram feature hashing.
///
/// The text is normalized and space-joined, padded with one '#' on each
/// side, and every code point trigram adds +-1 to bucket FNV-1a-64 % d,
/// the sign taken from bit 32 of the hash. The sum is L2-normalized.
Vector hash_embed(std::string_view text, std::size_t d);

class HashEmbedder final : public EmbeddingProvider {
 public:
  explicit HashEmbedder(std::size_t dim);
  std::size_t dim() override { return dim_; }
  std::vector<Vector> embed_batch(std::span<const std::string> texts) override;

 private:
  std::size_t dim_;
};

struct HttpEmbeddingOptions {
  std::string endpoint;                 // e.g. http://127.0.0.1:8080
  int timeout_ms = 30000;
  std::size_t max_chars = 10000;        // code points kept per text

  // Fills unset fields from CTX_EMBED_ENDPOINT / CTX_EMBED_TIMEOUT_MS; the
  // environment wins when set.
  static HttpEmbeddingOptions from_env(HttpEmbeddingOptions base);
};

/// Client for `POST {endpoint}/embed` with body {"texts": [...]} answering
/// {"dim": d, "vectors": [[...], ...]}.
class HttpEmbeddingClient final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingClient(HttpEmbeddingOptions options);
  std::size_t dim() override;
  std::vector<Vector> embed_batch(std::span<const std::string> texts) override;

 private:
  std::vector<Vector> post(const std::vector<std::string>& texts);

  HttpEmbeddingOptions options_;
  std::mutex dim_mu_;
  std::optional<std::size_t> dim_;
};

// Truncates UTF-8 text to its first `max_chars` code points.
std::string truncate_chars(std::string_view text, std::size_t max_chars);

/// Content-addressed cache in front of another provider.
///
/// Keys are FNV-1a-64 of the exact input string. When a sidecar path is
/// given, existing records are loaded at construction and new ones are
/// appended as (u64 key, u32 dim, dim x f32), little endian.
class CachedEmbeddingProvider final : public EmbeddingProvider {
 public:
  CachedEmbeddingProvider(std::shared_ptr<EmbeddingProvider> inner,
                          std::optional<std::filesystem::path> sidecar = std::nullopt);

  std::size_t dim() override { return inner_->dim(); }
  std::vector<Vector> embed_batch(std::span<const std::string> texts) override;

  // Number of embed_batch calls forwarded to the wrapped provider.
  std::uint64_t inner_calls() const { return inner_calls_.load(); }
  std::size_t cached() const;

 private:
  void load_sidecar();
  void append_sidecar(std::uint64_t key, const Vector& v);

  std::shared_ptr<EmbeddingProvider> inner_;
  std::optional<std::filesystem::path> sidecar_;
  mutable std::mutex mu_;
  std::unordered_map<std::uint64_t, Vector> cache_;
  std::atomic<std::uint64_t> inner_calls_{0};
};

}  // namespace ctxforge
