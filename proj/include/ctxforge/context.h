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

#include <string>
#include <vector>

#include "ctxforge/context_types.h"
#include "ctxforge/embedding.h"
#include "ctxforge/llm.h"
#include "ctxforge/textnorm.h"
#include "ctxforge/vector_index.h"

namespace ctxforge {

// Ground-truth context: unique non-stopword reference words, first
// occurrence order.
ContextList oracle_context(const TokenList& reference, const StopwordSet& stop);

/// Normalizes every candidate (multi-word candidates split into tokens),
/// then deduplicates and drops stopwords.
ContextList postprocess_context(const std::vector<std::string>& candidates,
                                const StopwordSet& stop);

/// Retrieval context: embeds the joined history and keeps the `c` most
/// cosine-similar vocabulary words. An empty history yields an empty list
/// without querying the provider.
ContextList rag_context(const HistoryWindow& history, std::size_t c, const FlatIndex& index,
                        EmbeddingProvider& provider, const StopwordSet& stop);

/// Generated context: the history goes to the model under the generation
/// prompt and the comma-separated reply is post-processed. Client errors
/// propagate; a reply with no usable words gives an empty list.
ContextList llm_context(const HistoryWindow& history, LlmClient& llm, const StopwordSet& stop,
                        const Prompts& prompts = {});

}  // namespace ctxforge
