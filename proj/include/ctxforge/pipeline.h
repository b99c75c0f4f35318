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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ctxforge/asr.h"
#include "ctxforge/config.h"
#include "ctxforge/context.h"
#include "ctxforge/embedding.h"
#include "ctxforge/llm.h"
#include "ctxforge/vector_index.h"

namespace ctxforge {

class PipelineError : public Error {
 public:
  PipelineError(std::string doc_id, std::size_t segment, const std::string& what)
      : Error("document " + doc_id + ", segment " + std::to_string(segment) + ": " + what),
        doc_id_(std::move(doc_id)),
        segment_(segment) {}

  const std::string& doc_id() const { return doc_id_; }
  std::size_t segment() const { return segment_; }

 private:
  std::string doc_id_;
  std::size_t segment_;
};

struct Document {
  std::string doc_id;
  std::vector<Segment> segments;  // ascending index
};

/// Reads a JSON Lines manifest ({"doc_id", "segment_index", "audio_path"?,
/// "reference_text"?, "start_s"?, "end_s"?}). Documents come back sorted by
/// doc_id with segments sorted by index; duplicate indices and end < start
/// are errors.
std::vector<Document> read_manifest(const std::filesystem::path& path);

struct SegmentRecord {
  std::size_t index = 0;
  ContextList context;
  std::string hypothesis;
  std::string final_text;  // corrected text under LLM-fix, else the hypothesis
  double context_s = 0.0;
  double asr_s = 0.0;
  double fix_s = 0.0;

  double elapsed_s() const { return context_s + asr_s + fix_s; }
};

struct DocumentResult {
  std::string doc_id;
  std::vector<SegmentRecord> records;
  std::string final_transcript;  // final texts joined by single spaces

  double total_s() const;
  double asr_s() const;
};

/// Collaborators for one run. Pointers are borrowed; the ones a method
/// does not use may be null (no index/embedder without cb_rag, no LLM
/// without cb_llm or LLM-fix).
struct Collaborators {
  AsrAdapter* asr = nullptr;
  const StopwordSet* stop = nullptr;
  const FlatIndex* index = nullptr;
  EmbeddingProvider* embedder = nullptr;
  LlmClient* llm = nullptr;
  Prompts prompts;
};

/// How stage durations are obtained: measured with a steady clock, or
/// charged from the cost model (reproducible).
struct TimingPolicy {
  Timing mode = Timing::kWall;
  CostModel cost;
};

/// Runs one document segment by segment: build the context for the
/// variant, transcribe, optionally correct, then push the final text into
/// the history window. Any collaborator error is rethrown as a
/// PipelineError naming the segment.
DocumentResult run_document(const Document& doc, const Variant& variant,
                            const Collaborators& collab, const TimingPolicy& timing = {});

struct MethodRun {
  Variant variant;
  std::vector<DocumentResult> documents;  // same order as the input

  double total_s() const;
  double asr_s() const;
};

/// Runs every document, one OpenMP task per document. Results keep input
/// order; the first failing document (in input order) is rethrown.
MethodRun run_corpus(const std::vector<Document>& docs, const Variant& variant,
                     const Collaborators& collab, const TimingPolicy& timing = {},
                     int threads = 0);

// Serial reference for run_corpus.
MethodRun run_corpus_serial(const std::vector<Document>& docs, const Variant& variant,
                            const Collaborators& collab, const TimingPolicy& timing = {});

// Ground-truth context per segment, in document then segment order.
std::vector<ContextList> oracle_contexts(const std::vector<Document>& docs, const StopwordSet& stop);

}  // namespace ctxforge
