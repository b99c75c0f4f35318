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

#include "ctxforge/pipeline.h"

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>
#include <omp.h>

namespace ctxforge {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t word_count(const std::string& text) { return normalize(text).size(); }

void check_collaborators(const Variant& v, const Collaborators& c) {
  if (!c.asr || !c.stop) throw std::invalid_argument("pipeline needs an ASR adapter and stopwords");
  if (v.method == Method::kCbRag && (!c.index || !c.embedder)) {
    throw std::invalid_argument("cb_rag needs a vector index and an embedding provider");
  }
  if ((v.method == Method::kCbLlm || v.llm_fix) && !c.llm) {
    throw std::invalid_argument("cb_llm and LLM-fix need an LLM client");
  }
}

ContextList build_context(const Segment& seg, const Variant& v, const HistoryWindow& history,
                          const Collaborators& c) {
  switch (v.method) {
    case Method::kNone:
      return {};
    case Method::kOracle:
      if (!seg.reference) throw MissingFieldError("oracle context needs reference_text");
      return oracle_context(normalize(*seg.reference), *c.stop);
    case Method::kCbRag:
      return rag_context(history, v.c, *c.index, *c.embedder, *c.stop);
    case Method::kCbLlm:
      return llm_context(history, *c.llm, *c.stop, c.prompts);
  }
  return {};
}

double modeled_context_s(const Variant& v, const HistoryWindow& history, const ContextList& ctx,
                         const Collaborators& c, const CostModel& cost) {
  if (history.empty()) return 0.0;
  switch (v.method) {
    case Method::kCbRag:
      return cost.embed_per_call_s +
             cost.search_per_entry_s * static_cast<double>(c.index->store().size());
    case Method::kCbLlm:
      return cost.llm_per_call_s + cost.llm_per_output_word_s * static_cast<double>(ctx.size());
    default:
      return 0.0;
  }
}

}  // namespace

std::vector<Document> read_manifest(const std::filesystem::path& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());

  std::map<std::string, std::vector<Segment>> by_doc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      auto j = json::parse(line);
      Segment s;
      s.doc_id = j.at("doc_id").get<std::string>();
      const auto idx = j.at("segment_index").get<std::int64_t>();
      if (idx < 0) throw Error("segment_index must be non-negative");
      s.index = static_cast<std::size_t>(idx);
      if (j.contains("audio_path") && !j["audio_path"].is_null()) s.audio_ref = j["audio_path"].get<std::string>();
      if (j.contains("reference_text") && !j["reference_text"].is_null()) {
        s.reference = j["reference_text"].get<std::string>();
      }
      if (j.contains("start_s") && !j["start_s"].is_null()) s.start_s = j["start_s"].get<double>();
      if (j.contains("end_s") && !j["end_s"].is_null()) s.end_s = j["end_s"].get<double>();
      if (s.start_s && s.end_s && *s.end_s < *s.start_s) throw Error("end_s precedes start_s");
      by_doc[s.doc_id].push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }

  std::vector<Document> docs;
  for (auto& [id, segs] : by_doc) {
    std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].index == segs[i - 1].index) {
        throw Error(path.string() + ": duplicate segment_index " + std::to_string(segs[i].index) +
                    " in document " + id);
      }
    }
    docs.push_back({id, std::move(segs)});
  }
  return docs;
}

double DocumentResult::total_s() const {
  double t = 0.0;
  for (const auto& r : records) t += r.elapsed_s();
  return t;
}

double DocumentResult::asr_s() const {
  double t = 0.0;
  for (const auto& r : records) t += r.asr_s;
  return t;
}

double MethodRun::total_s() const {
  double t = 0.0;
  for (const auto& d : documents) t += d.total_s();
  return t;
}

double MethodRun::asr_s() const {
  double t = 0.0;
  for (const auto& d : documents) t += d.asr_s();
  return t;
}

DocumentResult run_document(const Document& doc, const Variant& variant,
                            const Collaborators& collab, const TimingPolicy& timing) {
  check_collaborators(variant, collab);
  const bool modeled = timing.mode == Timing::kModeled;
  const CostModel& cost = timing.cost;

  DocumentResult result;
  result.doc_id = doc.doc_id;
  result.records.reserve(doc.segments.size());
  HistoryWindow history(std::max<std::size_t>(variant.k, 1));

  for (const auto& seg : doc.segments) {
    SegmentRecord rec;
    rec.index = seg.index;
    try {
      auto t0 = Clock::now();
      rec.context = build_context(seg, variant, history, collab);
      rec.context_s = modeled ? modeled_context_s(variant, history, rec.context, collab, cost)
                              : seconds_since(t0);

      t0 = Clock::now();
      Hypothesis hyp = collab.asr->transcribe(seg, rec.context);
      rec.asr_s = modeled ? cost.asr_per_segment_s +
                                cost.asr_per_token_s * static_cast<double>(word_count(hyp.text)) +
                                cost.asr_per_context_word_s * static_cast<double>(rec.context.size())
                          : seconds_since(t0);
      rec.hypothesis = std::move(hyp.text);

      if (variant.llm_fix) {
        t0 = Clock::now();
        rec.final_text = fix_transcript(rec.hypothesis, rec.context, history, *collab.llm, collab.prompts);
        rec.fix_s = modeled ? cost.llm_per_call_s +
                                  cost.llm_per_output_word_s * static_cast<double>(word_count(rec.final_text))
                            : seconds_since(t0);
      } else {
        rec.final_text = rec.hypothesis;
      }
    } catch (const std::exception& e) {
      throw PipelineError(doc.doc_id, seg.index, e.what());
    }

    history.push(rec.final_text);
    if (!result.records.empty()) result.final_transcript += ' ';
    result.final_transcript += rec.final_text;
    result.records.push_back(std::move(rec));
  }
  return result;
}

MethodRun run_corpus_serial(const std::vector<Document>& docs, const Variant& variant,
                            const Collaborators& collab, const TimingPolicy& timing) {
  MethodRun run{variant, {}};
  run.documents.reserve(docs.size());
  for (const auto& d : docs) run.documents.push_back(run_document(d, variant, collab, timing));
  return run;
}

MethodRun run_corpus(const std::vector<Document>& docs, const Variant& variant,
                     const Collaborators& collab, const TimingPolicy& timing, int threads) {
  check_collaborators(variant, collab);
  MethodRun run{variant, std::vector<DocumentResult>(docs.size())};
  std::vector<std::exception_ptr> errors(docs.size());
  const auto count = static_cast<std::ptrdiff_t>(docs.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto d = static_cast<std::size_t>(i);
    try {
      run.documents[d] = run_document(docs[d], variant, collab, timing);
    } catch (...) {
      errors[d] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return run;
}

std::vector<ContextList> oracle_contexts(const std::vector<Document>& docs, const StopwordSet& stop) {
  std::vector<ContextList> out;
  for (const auto& d : docs) {
    for (const auto& s : d.segments) {
      if (!s.reference) {
        throw PipelineError(d.doc_id, s.index, "reference_text is required for evaluation");
      }
      out.push_back(oracle_context(normalize(*s.reference), stop));
    }
  }
  return out;
}

}  // namespace ctxforge
