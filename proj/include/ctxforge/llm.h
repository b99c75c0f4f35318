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
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxforge/context_types.h"
#include "ctxforge/error.h"

namespace ctxforge {

// System prompt for context generation.
inline constexpr std::string_view kGenerationPrompt =
    "You are the master of knowledge, with expertise in every domain. Given a sentence and "
    "based on your knowledge, provide a huge number of relevant words. Focus on names, "
    "locations, terminology, concepts. Provide only the words, comma-separated, without any "
    "other explanations.";

// System prompt for transcript correction.
inline constexpr std::string_view kCorrectionPrompt =
    "You are a master philologist and grammar expert. Using the provided conversation history "
    "for context, correct the given sentence by fixing typos, misspellings, grammar, or logical "
    "inconsistencies. Preserve the original intent. Respond with only the revised sentence, "
    "nothing else.";

struct Prompts {
  std::string generation{kGenerationPrompt};
  std::string correction{kCorrectionPrompt};

  // Replaces either prompt with the contents of a file when a path is given.
  static Prompts load(const std::optional<std::filesystem::path>& generation_file,
                      const std::optional<std::filesystem::path>& correction_file);
};

class LlmError : public Error {
 public:
  using Error::Error;
};
class LlmTransportError : public LlmError {
 public:
  using LlmError::LlmError;
};
class LlmStatusError : public LlmError {
 public:
  LlmStatusError(int status, const std::string& what) : LlmError(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};
class LlmResponseError : public LlmError {
 public:
  using LlmError::LlmError;
};

enum class Role { kSystem, kUser };

std::string_view role_name(Role role);

struct ChatMessage {
  Role role;
  std::string content;
};

struct ChatRequest {
  std::string model;                  // empty: client default
  std::vector<ChatMessage> messages;  // at least one
  std::optional<double> temperature;  // unset: client default

  // Throws std::invalid_argument when the request is malformed.
  void validate() const;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  // Returns the assistant message content.
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct HttpLlmOptions {
  std::string endpoint;
  std::string api_key;
  std::string model;
  double temperature = 0.0;
  int retries = 3;
  int backoff_ms = 250;  // doubled after each failed attempt
  int timeout_ms = 120000;

  // CTX_LLM_ENDPOINT, CTX_LLM_API_KEY, CTX_LLM_MODEL and CTX_LLM_TEMPERATURE
  // override the given values when set.
  static HttpLlmOptions from_env(HttpLlmOptions base);
};

/// Chat-completions client: POST {endpoint}/v1/chat/completions, reply read
/// from choices[0].message.content. Transport failures are retried with
/// exponential backoff; HTTP errors and malformed bodies are not.
class HttpLlmClient final : public LlmClient {
 public:
  explicit HttpLlmClient(HttpLlmOptions options);
  std::string complete(const ChatRequest& request) override;

 private:
  HttpLlmOptions options_;
};

/// Deterministic in-process client for tests and offline runs.
class StubLlm final : public LlmClient {
 public:
  // Receives the request and its zero-based call number.
  using Responder = std::function<std::string(const ChatRequest&, std::size_t)>;

  // Every call returns `reply`.
  static StubLlm fixed(std::string reply);
  // Call i returns replies[i]; the last reply repeats once the script runs out.
  static StubLlm scripted(std::vector<std::string> replies);
  // Returns the SENTENCE block of a correction request unchanged; for any
  // other request returns the user message words, comma separated.
  static StubLlm echo();

  explicit StubLlm(Responder responder);
  StubLlm(const StubLlm& other);

  std::string complete(const ChatRequest& request) override;

  std::size_t calls() const;
  // Recorded requests; empty when recording is off.
  std::vector<ChatRequest> requests() const;
  void set_recording(bool on) { recording_ = on; }

 private:
  Responder responder_;
  bool recording_ = true;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
  std::vector<ChatRequest> requests_;
};

/// Splits a reply on commas and newlines, trims whitespace, drops empties.
std::vector<std::string> parse_word_list(std::string_view reply);

// User message for a correction request: HISTORY, CONTEXT, SENTENCE blocks.
std::string correction_message(const std::string& hypothesis, const ContextList& context,
                               const HistoryWindow& history);

/// Asks the model to correct `hypothesis`. Any client error is logged and
/// the hypothesis is returned unchanged.
std::string fix_transcript(const std::string& hypothesis, const ContextList& context,
                           const HistoryWindow& history, LlmClient& llm,
                           const Prompts& prompts = {});

}  // namespace ctxforge
