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

#include "ctxforge/embedding.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "ctxforge/fnv.h"
#include "ctxforge/textnorm.h"

namespace ctxforge {
namespace {

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string base;    // path prefix without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  auto scheme = url.find("://");
  auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  auto slash = url.find('/', host_start);
  Endpoint ep;
  ep.origin = url.substr(0, slash);
  if (slash != std::string::npos) {
    ep.base = url.substr(slash);
    while (!ep.base.empty() && ep.base.back() == '/') ep.base.pop_back();
  }
  return ep;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void write_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename T>
bool read_le(std::istream& in, T& v) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) return false;
  v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return true;
}

}  // namespace

Vector EmbeddingProvider::embed(const std::string& text) {
  auto out = embed_batch(std::span<const std::string>(&text, 1));
  return std::move(out.front());
}

void l2_normalize(std::span<float> v) {
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * x;
  if (sq == 0.0) return;
  const double norm = std::sqrt(sq);
  for (auto& x : v) x = static_cast<float>(x / norm);
}

Vector hash_embed(std::string_view text, std::size_t d) {
  if (d == 0) throw std::invalid_argument("hash_embed: dimension must be positive");
  std::vector<double> acc(d, 0.0);
  const std::string padded = "#" + join(normalize(text)) + "#";

  // Byte offsets of code point starts.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < padded.size();) {
    starts.push_back(i);
    i += utf8_length(static_cast<unsigned char>(padded[i]));
  }
  starts.push_back(padded.size());

  for (std::size_t c = 0; c + 3 < starts.size(); ++c) {
    std::string_view gram(padded.data() + starts[c], starts[c + 3] - starts[c]);
    const std::uint64_t h = fnv1a64(gram);
    const double sign = ((h >> 32) & 1U) ? -1.0 : 1.0;
    acc[h % d] += sign;
  }

  double sq = 0.0;
  for (double x : acc) sq += x * x;
  Vector out(d, 0.0f);
  if (sq == 0.0) return out;
  const double norm = std::sqrt(sq);
  for (std::size_t i = 0; i < d; ++i) out[i] = static_cast<float>(acc[i] / norm);
  return out;
}

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("HashEmbedder: dimension must be positive");
}

std::vector<Vector> HashEmbedder::embed_batch(std::span<const std::string> texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hash_embed(t, dim_));
  return out;
}

HttpEmbeddingOptions HttpEmbeddingOptions::from_env(HttpEmbeddingOptions base) {
  if (const char* ep = std::getenv("CTX_EMBED_ENDPOINT"); ep && *ep) base.endpoint = ep;
  if (const char* t = std::getenv("CTX_EMBED_TIMEOUT_MS"); t && *t) base.timeout_ms = std::atoi(t);
  return base;
}

std::string truncate_chars(std::string_view text, std::size_t max_chars) {
  std::size_t pos = 0;
  for (std::size_t n = 0; n < max_chars && pos < text.size(); ++n) {
    pos += utf8_length(static_cast<unsigned char>(text[pos]));
  }
  return std::string(text.substr(0, std::min(pos, text.size())));
}

HttpEmbeddingClient::HttpEmbeddingClient(HttpEmbeddingOptions options)
    : options_(std::move(options)) {
  if (options_.endpoint.empty()) {
    throw ConfigError("embedding endpoint is not set (CTX_EMBED_ENDPOINT)");
  }
}

std::size_t HttpEmbeddingClient::dim() {
  {
    std::lock_guard lock(dim_mu_);
    if (dim_) return *dim_;
  }
  post({});
  std::lock_guard lock(dim_mu_);
  return *dim_;
}

std::vector<Vector> HttpEmbeddingClient::post(const std::vector<std::string>& texts) {
  using nlohmann::json;
  const auto ep = split_endpoint(options_.endpoint);
  httplib::Client cli(ep.origin);
  const auto timeout = std::chrono::milliseconds(options_.timeout_ms);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  json body = {{"texts", texts}};
  auto res = cli.Post(ep.base + "/embed", body.dump(), "application/json");
  if (!res) {
    throw EmbeddingTransportError("embedding request to " + options_.endpoint +
                                  " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw EmbeddingStatusError(res->status, "embedding service returned HTTP " +
                                                std::to_string(res->status));
  }

  std::size_t dim = 0;
  std::vector<Vector> vectors;
  try {
    auto reply = json::parse(res->body);
    dim = reply.at("dim").get<std::size_t>();
    vectors = reply.at("vectors").get<std::vector<Vector>>();
  } catch (const json::exception& e) {
    throw EmbeddingResponseError(std::string("malformed embedding response: ") + e.what());
  }
  if (dim == 0) throw EmbeddingResponseError("embedding response reports dim 0");
  if (vectors.size() != texts.size()) {
    throw EmbeddingResponseError("embedding response has " + std::to_string(vectors.size()) +
                                 " vectors for " + std::to_string(texts.size()) + " texts");
  }
  for (const auto& v : vectors) {
    if (v.size() != dim) throw EmbeddingResponseError("embedding vector length differs from dim");
  }

  std::lock_guard lock(dim_mu_);
  if (dim_ && *dim_ != dim) {
    throw DimensionDriftError("embedding dimension changed from " + std::to_string(*dim_) +
                              " to " + std::to_string(dim));
  }
  dim_ = dim;
  return vectors;
}

std::vector<Vector> HttpEmbeddingClient::embed_batch(std::span<const std::string> texts) {
  std::vector<std::string> payload;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) continue;
    payload.push_back(truncate_chars(texts[i], options_.max_chars));
    slots.push_back(i);
  }
  std::vector<Vector> sent;
  if (!payload.empty()) sent = post(payload);
  const std::size_t d = payload.empty() ? (texts.empty() ? 0 : dim()) : sent.front().size();

  std::vector<Vector> out(texts.size(), Vector(d, 0.0f));
  for (std::size_t j = 0; j < slots.size(); ++j) out[slots[j]] = std::move(sent[j]);
  return out;
}

CachedEmbeddingProvider::CachedEmbeddingProvider(std::shared_ptr<EmbeddingProvider> inner,
                                                 std::optional<std::filesystem::path> sidecar)
    : inner_(std::move(inner)), sidecar_(std::move(sidecar)) {
  if (!inner_) throw std::invalid_argument("CachedEmbeddingProvider: null provider");
  if (sidecar_) load_sidecar();
}

void CachedEmbeddingProvider::load_sidecar() {
  std::ifstream in(*sidecar_, std::ios::binary);
  if (!in) return;
  std::size_t records = 0;
  for (;;) {
    std::uint64_t key = 0;
    std::uint32_t dim = 0;
    if (!read_le(in, key) || !read_le(in, dim)) break;
    Vector v(dim);
    bool ok = true;
    for (auto& x : v) {
      std::uint32_t bits = 0;
      if (!read_le(in, bits)) {
        ok = false;
        break;
      }
      x = std::bit_cast<float>(bits);
    }
    if (!ok) {
      spdlog::warn("embedding cache {}: ignoring truncated trailing record", sidecar_->string());
      break;
    }
    cache_.insert_or_assign(key, std::move(v));
    ++records;
  }
  spdlog::debug("embedding cache {}: loaded {} records", sidecar_->string(), records);
}

void CachedEmbeddingProvider::append_sidecar(std::uint64_t key, const Vector& v) {
  std::ofstream out(*sidecar_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to embedding cache: " + sidecar_->string());
  write_u64(out, key);
  write_u32(out, static_cast<std::uint32_t>(v.size()));
  for (float x : v) write_u32(out, std::bit_cast<std::uint32_t>(x));
}

std::size_t CachedEmbeddingProvider::cached() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

std::vector<Vector> CachedEmbeddingProvider::embed_batch(std::span<const std::string> texts) {
  std::vector<std::uint64_t> keys(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) keys[i] = fnv1a64(texts[i]);

  std::vector<std::string> misses;
  std::vector<std::uint64_t> miss_keys;
  {
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (cache_.count(keys[i])) continue;
      if (std::find(miss_keys.begin(), miss_keys.end(), keys[i]) != miss_keys.end()) continue;
      misses.push_back(texts[i]);
      miss_keys.push_back(keys[i]);
    }
  }

  if (!misses.empty()) {
    ++inner_calls_;
    auto fresh = inner_->embed_batch(misses);
    std::lock_guard lock(mu_);
    for (std::size_t j = 0; j < misses.size(); ++j) {
      auto [it, inserted] = cache_.try_emplace(miss_keys[j], std::move(fresh[j]));
      if (inserted && sidecar_) append_sidecar(miss_keys[j], it->second);
    }
  }

  std::lock_guard lock(mu_);
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (auto key : keys) out.push_back(cache_.at(key));
  return out;
}

}  // namespace ctxforge
