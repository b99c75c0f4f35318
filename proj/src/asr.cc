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

#include "ctxforge/asr.h"

#include <array>
#include <chrono>
#include <vector>

#include "ctxforge/fnv.h"

namespace ctxforge {
namespace {

void put_le(std::vector<std::uint8_t>& buf, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::size_t code_point_count(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xc0) != 0x80;
  return n;
}

std::size_t last_code_point_start(std::string_view s) {
  std::size_t i = s.size();
  while (i > 0) {
    --i;
    if ((static_cast<unsigned char>(s[i]) & 0xc0) != 0x80) return i;
  }
  return 0;
}

char next_vowel(char v) {
  switch (v) {
    case 'a': return 'e';
    case 'e': return 'i';
    case 'i': return 'o';
    case 'o': return 'u';
    default: return 'a';
  }
}

}  // namespace

void SimConfig::validate() const {
  if (!(0.0 <= p_base && p_base <= p_ctx && p_ctx <= 1.0)) {
    throw ConfigError("simulator requires 0 <= p_base <= p_ctx <= 1");
  }
}

std::uint64_t simulation_key(std::uint64_t seed, std::string_view doc_id, std::uint64_t index,
                             std::uint64_t position) {
  std::vector<std::uint8_t> buf;
  buf.reserve(28 + doc_id.size());
  put_le(buf, seed, 8);
  put_le(buf, doc_id.size(), 4);
  buf.insert(buf.end(), doc_id.begin(), doc_id.end());
  put_le(buf, index, 8);
  put_le(buf, position, 8);
  return fnv1a64(std::span<const std::uint8_t>(buf));
}

double unit_draw(std::uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

std::string corrupt_word(std::string_view word) {
  if (code_point_count(word) <= 1) return "a";
  std::string out(word);
  for (auto& c : out) {
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') {
      c = next_vowel(c);
      return out;
    }
  }
  out.resize(last_code_point_start(out));
  return out;
}

Hypothesis simulate_transcribe(const SimConfig& cfg, const StopwordSet& stop,
                               const Segment& segment, const ContextList& context) {
  if (!segment.reference) {
    throw MissingFieldError("simulated ASR needs reference_text for segment " +
                            segment.doc_id + "#" + std::to_string(segment.index));
  }
  const auto start = std::chrono::steady_clock::now();
  const TokenList tokens = normalize(*segment.reference);
  std::string text;
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    const auto& w = tokens[j];
    std::string emitted;
    if (stop.contains(w) || cfg.common_words.count(w)) {
      emitted = w;
    } else {
      const double u = unit_draw(simulation_key(cfg.seed, segment.doc_id, segment.index, j));
      const double p = context.contains(w) ? cfg.p_ctx : cfg.p_base;
      emitted = u < p ? w : corrupt_word(w);
    }
    if (!text.empty()) text += ' ';
    text += emitted;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(text), elapsed.count()};
}

SimulatedAsr::SimulatedAsr(SimConfig cfg, StopwordSet stop)
    : cfg_(std::move(cfg)), stop_(std::move(stop)) {
  cfg_.validate();
}

Hypothesis SimulatedAsr::transcribe(const Segment& segment, const ContextList& context) {
  return simulate_transcribe(cfg_, stop_, segment, context);
}

}  // namespace ctxforge
