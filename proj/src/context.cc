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

#include "ctxforge/context.h"

#include <stdexcept>

#include <spdlog/spdlog.h>

namespace ctxforge {

ContextList ContextList::from_tokens(const TokenList& tokens, const StopwordSet& stop) {
  ContextList out;
  for (const auto& t : tokens) {
    if (t.empty() || stop.contains(t)) continue;
    if (out.members_.insert(t).second) out.words_.push_back(t);
  }
  return out;
}

void HistoryWindow::push(std::string transcript) {
  transcripts_.push_back(std::move(transcript));
  while (transcripts_.size() > k_) transcripts_.pop_front();
}

std::string HistoryWindow::joined() const {
  std::string out;
  for (const auto& t : transcripts_) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

ContextList oracle_context(const TokenList& reference, const StopwordSet& stop) {
  return ContextList::from_tokens(reference, stop);
}

ContextList postprocess_context(const std::vector<std::string>& candidates,
                                const StopwordSet& stop) {
  TokenList tokens;
  for (const auto& c : candidates) {
    auto norm = normalize(c);
    tokens.insert(tokens.end(), std::make_move_iterator(norm.begin()),
                  std::make_move_iterator(norm.end()));
  }
  return ContextList::from_tokens(tokens, stop);
}

ContextList rag_context(const HistoryWindow& history, std::size_t c, const FlatIndex& index,
                        EmbeddingProvider& provider, const StopwordSet& stop) {
  if (c == 0) throw std::invalid_argument("rag_context: c must be at least 1");
  if (history.empty()) return {};
  const Vector query = provider.embed(history.joined());
  return postprocess_context(index.top_n(query, c).words(), stop);
}

ContextList llm_context(const HistoryWindow& history, LlmClient& llm, const StopwordSet& stop,
                        const Prompts& prompts) {
  if (history.empty()) return {};
  ChatRequest request;
  request.messages = {{Role::kSystem, prompts.generation}, {Role::kUser, history.joined()}};
  const std::string reply = llm.complete(request);
  auto context = postprocess_context(parse_word_list(reply), stop);
  if (context.empty() && !reply.empty()) {
    spdlog::warn("context generation reply had no usable words; using an empty context");
  }
  return context;
}

}  // namespace ctxforge
