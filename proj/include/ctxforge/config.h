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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctxforge/asr.h"
#include "ctxforge/error.h"

namespace ctxforge {

// Scalar values of the flat TOML subset accepted in run files.
using ConfigValue = std::variant<bool, std::int64_t, double, std::string>;

/// A parsed run file. Keys inside `[table]` sections are stored dotted
/// ("llm.model"); every `[[variant]]` header opens a new entry in
/// `variants`, whose keys are stored undotted.
struct ConfigDocument {
  std::map<std::string, ConfigValue> values;
  std::vector<std::map<std::string, ConfigValue>> variants;
};

/// Parses `key = value` lines with string, integer, float and boolean
/// values, `#` comments, `[table]` and `[[variant]]` headers. Throws
/// ConfigError with the line number on anything else.
ConfigDocument parse_config(std::string_view text);

enum class Method { kOracle, kNone, kCbRag, kCbLlm };

std::string_view method_name(Method m);  // "oracle", "none", "cb_rag", "cb_llm"
Method parse_method(std::string_view name);

struct Variant {
  Method method = Method::kNone;
  std::size_t c = 100;
  std::size_t k = 10;
  bool llm_fix = false;

  // Table-style row label, e.g. "CB-RAG [100, 10]" or "CB-LLM LLM_fix".
  std::string label() const;
  void validate() const;
  friend bool operator==(const Variant&, const Variant&) = default;
};

enum class Timing { kWall, kModeled };

/// Deterministic stand-in costs (seconds) used when timing is modeled.
struct CostModel {
  double asr_per_segment_s = 0.05;
  double asr_per_token_s = 0.01;
  double asr_per_context_word_s = 0.0005;
  double embed_per_call_s = 0.004;
  double search_per_entry_s = 2e-8;
  double llm_per_call_s = 0.6;
  double llm_per_output_word_s = 0.02;
};

struct EmbeddingSettings {
  std::string provider = "hash";  // hash | http
  std::size_t dim = 64;
  std::string endpoint;
  int timeout_ms = 30000;
  std::size_t max_chars = 10000;
  std::optional<std::filesystem::path> cache;
};

struct LlmSettings {
  std::string provider = "stub";  // stub | http
  std::string stub_mode = "echo";  // echo | fixed
  std::string stub_reply;
  std::string endpoint;
  std::string api_key;
  std::string model;
  double temperature = 0.0;
  int retries = 3;
  std::optional<std::filesystem::path> generation_prompt;
  std::optional<std::filesystem::path> correction_prompt;
};

struct AsrSettings {
  std::string adapter = "simulator";
  SimConfig sim;
  std::optional<std::filesystem::path> common_words;
};

struct RunConfig {
  std::vector<Variant> variants;  // at least one
  std::filesystem::path manifest;
  std::filesystem::path stopwords;
  std::optional<std::filesystem::path> store;
  std::filesystem::path output_dir = "out";
  EmbeddingSettings embedding;
  LlmSettings llm;
  AsrSettings asr;
  Timing timing = Timing::kModeled;
  CostModel cost;
  int threads = 0;  // 0: OpenMP default

  bool needs_store() const;
  void validate() const;
};

/// Builds a RunConfig from a parsed document. Relative paths resolve
/// against `base_dir`. Endpoint environment variables override the file.
RunConfig run_config_from(const ConfigDocument& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Reads a word-per-line file (blank and '#' lines ignored), normalizing words.
std::vector<std::string> read_word_file(const std::filesystem::path& path);

}  // namespace ctxforge
