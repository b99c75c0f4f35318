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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "ctxforge/context_types.h"
#include "ctxforge/error.h"
#include "ctxforge/textnorm.h"

namespace ctxforge {

class MissingFieldError : public Error {
 public:
  using Error::Error;
};

struct Segment {
  std::string doc_id;
  std::size_t index = 0;
  std::optional<std::string> audio_ref;
  std::optional<std::string> reference;
  std::optional<double> start_s;
  std::optional<double> end_s;
};

struct Hypothesis {
  std::string text;
  double elapsed_s = 0.0;
};

/// A recognizer conditioned on a context list. Real engines plug in by
/// implementing this interface.
class AsrAdapter {
 public:
  virtual ~AsrAdapter() = default;
  virtual Hypothesis transcribe(const Segment& segment, const ContextList& context) = 0;
};

struct SimConfig {
  std::uint64_t seed = 0;
  double p_ctx = 0.95;   // recognition probability for rare words in context
  double p_base = 0.5;   // recognition probability for rare words out of context
  std::unordered_set<std::string> common_words;

  // Throws ConfigError unless 0 <= p_base <= p_ctx <= 1.
  void validate() const;
};

// FNV-1a-64 over seed (u64 LE), doc_id (u32 LE length + bytes), segment
// index (u64 LE) and token position (u64 LE).
std::uint64_t simulation_key(std::uint64_t seed, std::string_view doc_id, std::uint64_t index,
                             std::uint64_t position);

// Uniform draw in [0, 1) from the top 53 bits of a key.
double unit_draw(std::uint64_t key);

/// Deterministic misrecognition: one-character words become "a"; otherwise
/// the first vowel rotates a->e->i->o->u->a; words without a vowel lose
/// their last character.
std::string corrupt_word(std::string_view word);

/// Simulated biased recognizer. Stopwords and common words are always
/// recognized; every other reference token survives with probability p_ctx
/// when in context and p_base otherwise, and is corrupted if not.
/// Throws MissingFieldError when the segment has no reference.
Hypothesis simulate_transcribe(const SimConfig& cfg, const StopwordSet& stop,
                               const Segment& segment, const ContextList& context);

class SimulatedAsr final : public AsrAdapter {
 public:
  SimulatedAsr(SimConfig cfg, StopwordSet stop);
  Hypothesis transcribe(const Segment& segment, const ContextList& context) override;
  const SimConfig& config() const { return cfg_; }

 private:
  SimConfig cfg_;
  StopwordSet stop_;
};

}  // namespace ctxforge
