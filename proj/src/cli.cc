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

#include "ctxforge/cli.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "ctxforge/metrics.h"
#include "ctxforge/vocab_store.h"

namespace ctxforge {
namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::shared_ptr<EmbeddingProvider> make_embedder(const EmbeddingSettings& s) {
  std::shared_ptr<EmbeddingProvider> base;
  if (s.provider == "http") {
    base = std::make_shared<HttpEmbeddingClient>(HttpEmbeddingOptions{s.endpoint, s.timeout_ms, s.max_chars});
  } else {
    base = std::make_shared<HashEmbedder>(s.dim);
  }
  if (s.cache || s.provider == "http") {
    return std::make_shared<CachedEmbeddingProvider>(base, s.cache);
  }
  return base;
}

std::unique_ptr<LlmClient> make_llm(const LlmSettings& s) {
  if (s.provider == "http") {
    HttpLlmOptions o;
    o.endpoint = s.endpoint;
    o.api_key = s.api_key;
    o.model = s.model;
    o.temperature = s.temperature;
    o.retries = s.retries;
    return std::make_unique<HttpLlmClient>(o);
  }
  auto stub = s.stub_mode == "fixed" ? StubLlm::fixed(s.stub_reply) : StubLlm::echo();
  stub.set_recording(false);
  return std::make_unique<StubLlm>(stub);
}

void write_segment_log(const MethodRun& run, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& doc : run.documents) {
    for (const auto& rec : doc.records) {
      nlohmann::ordered_json j = {
          {"doc_id", doc.doc_id},
          {"segment_index", rec.index},
          {"context", rec.context.words()},
          {"hypothesis", rec.hypothesis},
          {"final_text", rec.final_text},
          {"context_s", rec.context_s},
          {"asr_s", rec.asr_s},
          {"fix_s", rec.fix_s},
      };
      out << j.dump() << '\n';
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Corpus tokens from a manifest (.jsonl) or a plain text file.
TokenList read_corpus(const std::filesystem::path& path) {
  if (path.extension() == ".jsonl") {
    TokenList out;
    for (const auto& d : read_manifest(path)) {
      for (const auto& s : d.segments) {
        if (!s.reference) continue;
        auto t = normalize(*s.reference);
        out.insert(out.end(), t.begin(), t.end());
      }
    }
    return out;
  }
  return normalize(read_file(path));
}

void require_file(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) throw IoError("no such file: " + p.string());
}

}  // namespace

EvaluationReport run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const auto docs = read_manifest(cfg.manifest);
  const auto stop = StopwordSet::load(cfg.stopwords);

  std::optional<VocabStore> store;
  std::optional<FlatIndex> index;
  std::shared_ptr<EmbeddingProvider> embedder;
  if (cfg.needs_store()) {
    store = load_store(*cfg.store);
    index.emplace(*store);
    embedder = make_embedder(cfg.embedding);
    if (embedder->dim() != store->dim()) {
      throw ConfigError("embedding dimension " + std::to_string(embedder->dim()) +
                        " does not match store dimension " + std::to_string(store->dim()));
    }
  }
  auto llm = make_llm(cfg.llm);
  SimulatedAsr asr(cfg.asr.sim, stop);

  Collaborators collab;
  collab.asr = &asr;
  collab.stop = &stop;
  collab.index = index ? &*index : nullptr;
  collab.embedder = embedder.get();
  collab.llm = llm.get();
  collab.prompts = Prompts::load(cfg.llm.generation_prompt, cfg.llm.correction_prompt);

  std::vector<Variant> variants = cfg.variants;
  const bool has_baseline = std::any_of(variants.begin(), variants.end(), [](const Variant& v) {
    return v.method == Method::kNone && !v.llm_fix;
  });
  if (!has_baseline) variants.push_back(Variant{Method::kNone, 100, 10, false});

  const TimingPolicy timing{cfg.timing, cfg.cost};
  std::filesystem::create_directories(cfg.output_dir);
  std::vector<MethodRun> runs;
  for (const auto& v : variants) {
    spdlog::info("running {} over {} documents", v.label(), docs.size());
    runs.push_back(run_corpus(docs, v, collab, timing, cfg.threads));
    write_segment_log(runs.back(), cfg.output_dir / ("segments_" + slug(v.label()) + ".jsonl"));
  }

  auto report = evaluate_run(runs, docs, stop, cfg.timing);
  write_report(report, cfg.output_dir);
  return report;
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Automatic context discovery and evaluation for contextual ASR", "ctxforge"};
  app.require_subcommand(1);

  std::string config, input, out, store_path, stopwords, entities, method;
  std::size_t c = 0, k = 0, dim = 64;
  std::uint64_t seed = 0;
  bool llm_fix = false;

  auto* build = app.add_subcommand("build-vocab", "Embed a wordlist TSV into a CTXEMB01 store");
  build->add_option("--input", input, "wordlist TSV (word<TAB>definition)")->required();
  build->add_option("--out", out, "output store path")->required();
  build->add_option("--config", config, "run file whose [embedding] table selects the provider");
  build->add_option("--dim", dim, "hash embedder dimension")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "Run the configured methods and write a report");
  run->add_option("--config", config, "run file")->required();
  run->add_option("--out", out, "output directory (overrides output_dir)");
  run->add_option("--store", store_path, "vocabulary store (overrides store)");
  run->add_option("--stopwords", stopwords, "stopword file (overrides stopwords)");
  run->add_option("--method", method, "oracle | none | cb_rag | cb_llm (replaces configured variants)");
  run->add_option("--c", c, "retrieval count")->check(CLI::PositiveNumber);
  run->add_option("--k", k, "history window in segments")->check(CLI::PositiveNumber);
  run->add_flag("--llm-fix", llm_fix, "apply LLM transcript correction");
  run->add_option("--seed", seed, "simulator seed");

  auto* report = app.add_subcommand("report", "Render report.json as a markdown table");
  report->add_option("--input", input, "report.json")->required();
  report->add_option("--out", out, "output markdown path (stdout when omitted)");

  auto* analyze = app.add_subcommand("analyze", "OOV and rare-entity rates of a corpus");
  analyze->add_option("--input", input, "corpus text file or manifest .jsonl")->required();
  analyze->add_option("--entities", entities, "entity TSV (surface<TAB>type)")->required();
  analyze->add_option("--store", store_path, "vocabulary store")->required();
  analyze->add_option("--stopwords", stopwords, "stopword file")->required();
  analyze->add_option("--out", out, "write the rates as JSON");

  auto* zipf = app.add_subcommand("zipf", "Rank/frequency table of a corpus as CSV");
  zipf->add_option("--input", input, "corpus text file or manifest .jsonl")->required();
  zipf->add_option("--out", out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*build) {
      require_file(input);
      EmbeddingSettings es;
      es.dim = dim;
      if (!config.empty()) {
        es = load_run_config(config).embedding;
      } else if (const char* ep = std::getenv("CTX_EMBED_ENDPOINT"); ep && *ep) {
        es.provider = "http";
        es.endpoint = ep;
      }
      auto provider = make_embedder(es);
      auto words = read_wordlist(input);
      auto store = build_store(words, *provider);
      save_store(store, out);
      std::cout << "wrote " << store.size() << " entries (dim " << store.dim() << ") to " << out << '\n';
    } else if (*run) {
      require_file(config);
      RunConfig cfg = load_run_config(config);
      if (!out.empty()) cfg.output_dir = out;
      if (!store_path.empty()) cfg.store = store_path;
      if (!stopwords.empty()) cfg.stopwords = stopwords;
      if (run->count("--seed")) cfg.asr.sim.seed = seed;
      if (!method.empty() || run->count("--c") || run->count("--k") || llm_fix) {
        Variant v = cfg.variants.front();
        if (!method.empty()) v.method = parse_method(method);
        if (run->count("--c")) v.c = c;
        if (run->count("--k")) v.k = k;
        if (llm_fix) v.llm_fix = true;
        cfg.variants = {v};
      }
      require_file(cfg.manifest);
      require_file(cfg.stopwords);
      if (cfg.needs_store() && cfg.store) require_file(*cfg.store);
      auto rep = run_experiment(cfg);
      std::cout << report_markdown(rep);
    } else if (*report) {
      require_file(input);
      auto rep = report_from_json(nlohmann::json::parse(read_file(input)));
      const auto md = report_markdown(rep);
      if (out.empty()) {
        std::cout << md;
      } else {
        std::ofstream o(out, std::ios::trunc);
        if (!o) throw IoError("cannot write " + out);
        o << md;
      }
    } else if (*analyze) {
      for (const auto& p : {input, entities, store_path, stopwords}) require_file(p);
      const auto corpus = read_corpus(input);
      const auto ents = read_entities(entities);
      const auto store = load_store(store_path);
      const auto stop = StopwordSet::load(stopwords);
      const auto r = oov_and_rare_rates(corpus, ents, store, stop);
      nlohmann::ordered_json j = {
          {"unique_words", r.unique_words}, {"oov_words", r.oov_words},
          {"oov_pct", r.oov_pct},           {"rare_entities", r.rare_entities},
          {"rare_pct", r.rare_pct},         {"oov_entities", r.oov_entities},
      };
      if (!out.empty()) {
        std::ofstream o(out, std::ios::trunc);
        if (!o) throw IoError("cannot write " + out);
        o << j.dump(2) << '\n';
      }
      std::printf("OOV: %.2f%%  Rare rate: %.2f%%  (unique words %zu)\n", r.oov_pct, r.rare_pct,
                  r.unique_words);
    } else if (*zipf) {
      require_file(input);
      const auto rows = zipf_table(read_corpus(input));
      if (out.empty()) {
        write_zipf_csv(rows, std::cout);
      } else {
        std::ofstream o(out, std::ios::trunc);
        if (!o) throw IoError("cannot write " + out);
        write_zipf_csv(rows, o);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}

}  // namespace ctxforge
