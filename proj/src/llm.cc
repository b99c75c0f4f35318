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

#include "ctxforge/llm.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

namespace ctxforge {
namespace {

constexpr std::string_view kHistoryLabel = "HISTORY:\n";
constexpr std::string_view kContextLabel = "CONTEXT:\n";
constexpr std::string_view kSentenceLabel = "SENTENCE:\n";

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prompt file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

const ChatMessage* last_user_message(const ChatRequest& request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
    if (it->role == Role::kUser) return &*it;
  }
  return nullptr;
}

}  // namespace

Prompts Prompts::load(const std::optional<std::filesystem::path>& generation_file,
                      const std::optional<std::filesystem::path>& correction_file) {
  Prompts p;
  if (generation_file) p.generation = read_text(*generation_file);
  if (correction_file) p.correction = read_text(*correction_file);
  return p;
}

std::string_view role_name(Role role) {
  return role == Role::kSystem ? "system" : "user";
}

void ChatRequest::validate() const {
  if (messages.empty()) throw std::invalid_argument("chat request has no messages");
  if (temperature && *temperature < 0.0) {
    throw std::invalid_argument("chat request temperature must be non-negative");
  }
}

HttpLlmOptions HttpLlmOptions::from_env(HttpLlmOptions base) {
  if (const char* v = std::getenv("CTX_LLM_ENDPOINT"); v && *v) base.endpoint = v;
  if (const char* v = std::getenv("CTX_LLM_API_KEY"); v && *v) base.api_key = v;
  if (const char* v = std::getenv("CTX_LLM_MODEL"); v && *v) base.model = v;
  if (const char* v = std::getenv("CTX_LLM_TEMPERATURE"); v && *v) base.temperature = std::atof(v);
  return base;
}

HttpLlmClient::HttpLlmClient(HttpLlmOptions options) : options_(std::move(options)) {
  if (options_.endpoint.empty()) throw ConfigError("LLM endpoint is not set (CTX_LLM_ENDPOINT)");
  if (options_.retries < 0) options_.retries = 0;
}

std::string HttpLlmClient::complete(const ChatRequest& request) {
  using nlohmann::json;
  request.validate();

  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  const json body = {
      {"model", request.model.empty() ? options_.model : request.model},
      {"messages", messages},
      {"temperature", request.temperature.value_or(options_.temperature)},
  };

  std::string origin = options_.endpoint;
  std::string base;
  if (auto scheme = origin.find("://"); scheme != std::string::npos) {
    if (auto slash = origin.find('/', scheme + 3); slash != std::string::npos) {
      base = origin.substr(slash);
      origin.resize(slash);
      while (!base.empty() && base.back() == '/') base.pop_back();
    }
  }

  httplib::Client cli(origin);
  const auto timeout = std::chrono::milliseconds(options_.timeout_ms);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(options_.backoff_ms) * (1 << (attempt - 1)));
    }
    auto res = cli.Post(base + "/v1/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      spdlog::debug("LLM request attempt {} failed: {}", attempt + 1, last_error);
      continue;
    }
    if (res->status != 200) {
      throw LlmStatusError(res->status, "LLM endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
      auto reply = json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw LlmResponseError(std::string("malformed chat completion: ") + e.what());
    }
  }
  throw LlmTransportError("LLM request to " + options_.endpoint + " failed after " +
                          std::to_string(options_.retries + 1) + " attempts: " + last_error);
}

StubLlm::StubLlm(Responder responder) : responder_(std::move(responder)) {}

StubLlm::StubLlm(const StubLlm& other) : responder_(other.responder_), recording_(other.recording_) {
  std::lock_guard lock(other.mu_);
  calls_ = other.calls_;
  requests_ = other.requests_;
}

StubLlm StubLlm::fixed(std::string reply) {
  return StubLlm([reply = std::move(reply)](const ChatRequest&, std::size_t) { return reply; });
}

StubLlm StubLlm::scripted(std::vector<std::string> replies) {
  if (replies.empty()) throw std::invalid_argument("scripted stub needs at least one reply");
  return StubLlm([replies = std::move(replies)](const ChatRequest&, std::size_t call) {
    return replies[std::min(call, replies.size() - 1)];
  });
}

StubLlm StubLlm::echo() {
  return StubLlm([](const ChatRequest& request, std::size_t) -> std::string {
    const ChatMessage* user = last_user_message(request);
    if (!user) return {};
    const std::string& text = user->content;
    if (auto pos = text.rfind(kSentenceLabel); pos != std::string::npos) {
      return text.substr(pos + kSentenceLabel.size());
    }
    std::istringstream words(text);
    std::string out, w;
    while (words >> w) {
      if (!out.empty()) out += ", ";
      out += w;
    }
    return out;
  });
}

std::string StubLlm::complete(const ChatRequest& request) {
  request.validate();
  std::size_t call = 0;
  {
    std::lock_guard lock(mu_);
    call = calls_++;
    if (recording_) requests_.push_back(request);
  }
  return responder_(request, call);
}

std::size_t StubLlm::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::vector<ChatRequest> StubLlm::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::vector<std::string> parse_word_list(std::string_view reply) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= reply.size()) {
    auto end = reply.find_first_of(",\n", start);
    if (end == std::string_view::npos) end = reply.size();
    auto item = trim(reply.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

std::string correction_message(const std::string& hypothesis, const ContextList& context,
                               const HistoryWindow& history) {
  std::string msg(kHistoryLabel);
  for (std::size_t i = 0; i < history.transcripts().size(); ++i) {
    if (i) msg += '\n';
    msg += history.transcripts()[i];
  }
  msg += "\n\n";
  msg += kContextLabel;
  msg += join(context.words(), ", ");
  msg += "\n\n";
  msg += kSentenceLabel;
  msg += hypothesis;
  return msg;
}

std::string fix_transcript(const std::string& hypothesis, const ContextList& context,
                           const HistoryWindow& history, LlmClient& llm, const Prompts& prompts) {
  ChatRequest request;
  request.messages = {{Role::kSystem, prompts.correction},
                      {Role::kUser, correction_message(hypothesis, context, history)}};
  try {
    return llm.complete(request);
  } catch (const std::exception& e) {
    spdlog::warn("transcript correction failed, keeping ASR output: {}", e.what());
    return hypothesis;
  }
}

}  // namespace ctxforge
