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

#include "ctxforge/config.h"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ctxforge/embedding.h"
#include "ctxforge/llm.h"
#include "ctxforge/textnorm.h"

namespace ctxforge {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

bool is_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

// Parses a basic string starting at s[0] == '"'; returns the value and sets
// `rest` to whatever follows the closing quote.
std::string parse_string(std::string_view s, std::string_view& rest, std::size_t line) {
  std::string out;
  std::size_t i = 1;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"') break;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i >= s.size()) fail(line, "unterminated escape");
    switch (s[i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      default: fail(line, std::string("unsupported escape \\") + s[i]);
    }
  }
  if (i >= s.size()) fail(line, "unterminated string");
  rest = s.substr(i + 1);
  return out;
}

ConfigValue parse_value(std::string_view raw, std::size_t line) {
  if (raw.empty()) fail(line, "missing value");
  if (raw.front() == '"') {
    std::string_view rest;
    std::string v = parse_string(raw, rest, line);
    rest = trim(rest);
    if (!rest.empty() && rest.front() != '#') fail(line, "unexpected text after string");
    return v;
  }
  if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = trim(raw.substr(0, hash));
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string cleaned;
  for (char c : raw) {
    if (c != '_') cleaned += c;
  }
  std::int64_t iv = 0;
  auto [p, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), iv);
  if (ec == std::errc() && p == cleaned.data() + cleaned.size()) return iv;
  char* end = nullptr;
  double dv = std::strtod(cleaned.c_str(), &end);
  if (!cleaned.empty() && end == cleaned.c_str() + cleaned.size()) return dv;
  fail(line, "cannot parse value '" + std::string(raw) + "'");
}

using Table = std::map<std::string, ConfigValue>;

class Reader {
 public:
  Reader(Table table, std::string scope) : table_(std::move(table)), scope_(std::move(scope)) {}

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto& [key, _] : table_) {
      if (!used_.count(key)) throw ConfigError("unknown config key '" + scope_ + key + "'");
    }
  }

  const ConfigValue* find(const std::string& key) {
    auto it = table_.find(key);
    if (it == table_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  void get(const std::string& key, std::string& out) {
    auto v = find(key);
    if (!v) return;
    if (auto s = std::get_if<std::string>(v)) out = *s;
    else type_error(key, "a string");
  }

  void get(const std::string& key, bool& out) {
    auto v = find(key);
    if (!v) return;
    if (auto b = std::get_if<bool>(v)) out = *b;
    else type_error(key, "a boolean");
  }

  void get(const std::string& key, double& out) {
    auto v = find(key);
    if (!v) return;
    if (auto d = std::get_if<double>(v)) out = *d;
    else if (auto i = std::get_if<std::int64_t>(v)) out = static_cast<double>(*i);
    else type_error(key, "a number");
  }

  void get(const std::string& key, std::int64_t& out) {
    auto v = find(key);
    if (!v) return;
    if (auto i = std::get_if<std::int64_t>(v)) out = *i;
    else type_error(key, "an integer");
  }

  void get(const std::string& key, int& out) {
    std::int64_t v = out;
    get(key, v);
    out = static_cast<int>(v);
  }

  void get(const std::string& key, std::size_t& out) {
    auto v = static_cast<std::int64_t>(out);
    get(key, v);
    if (v < 0) type_error(key, "non-negative");
    out = static_cast<std::size_t>(v);
  }

  void get_path(const std::string& key, std::filesystem::path& out, const std::filesystem::path& base) {
    std::string s;
    if (!find(key)) return;
    get(key, s);
    out = resolve(s, base);
  }

  void get_path(const std::string& key, std::optional<std::filesystem::path>& out,
                const std::filesystem::path& base) {
    std::filesystem::path p;
    if (!find(key)) return;
    get_path(key, p, base);
    out = p;
  }

  static std::filesystem::path resolve(const std::string& s, const std::filesystem::path& base) {
    std::filesystem::path p(s);
    return p.is_absolute() ? p : base / p;
  }

 private:
  [[noreturn]] void type_error(const std::string& key, const char* want) {
    throw ConfigError("config key '" + scope_ + key + "' must be " + want);
  }

  Table table_;
  std::string scope_;
  std::set<std::string> used_;
};

void read_variant(Reader& r, Variant& v) {
  std::string method;
  r.get("method", method);
  if (!method.empty()) v.method = parse_method(method);
  r.get("c", v.c);
  r.get("k", v.k);
  r.get("llm_fix", v.llm_fix);
}

Table section(const Table& values, const std::string& prefix) {
  Table out;
  for (const auto& [key, v] : values) {
    if (key.rfind(prefix + ".", 0) == 0) out.emplace(key.substr(prefix.size() + 1), v);
  }
  return out;
}

Table top_level(const Table& values) {
  Table out;
  for (const auto& [key, v] : values) {
    if (key.find('.') == std::string::npos) out.emplace(key, v);
  }
  return out;
}

}  // namespace

ConfigDocument parse_config(std::string_view text) {
  ConfigDocument doc;
  std::string prefix;
  Table* target = &doc.values;
  std::set<std::string> seen_tables;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    if (line.rfind("[[", 0) == 0) {
      auto close = line.find("]]");
      if (close == std::string_view::npos) fail(line_no, "unterminated table array header");
      if (trim(line.substr(2, close - 2)) != "variant") fail(line_no, "only [[variant]] arrays are supported");
      doc.variants.emplace_back();
      target = &doc.variants.back();
      prefix.clear();
      continue;
    }
    if (line.front() == '[') {
      auto close = line.find(']');
      if (close == std::string_view::npos) fail(line_no, "unterminated table header");
      std::string name(trim(line.substr(1, close - 1)));
      if (!is_bare_key(name)) fail(line_no, "bad table name '" + name + "'");
      if (!seen_tables.insert(name).second) fail(line_no, "table [" + name + "] defined twice");
      prefix = name + ".";
      target = &doc.values;
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (!is_bare_key(key)) fail(line_no, "bad key '" + key + "'");
    key = prefix + key;
    if (target->count(key)) fail(line_no, "duplicate key '" + key + "'");
    target->emplace(key, parse_value(trim(line.substr(eq + 1)), line_no));
  }
  return doc;
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kOracle: return "oracle";
    case Method::kNone: return "none";
    case Method::kCbRag: return "cb_rag";
    case Method::kCbLlm: return "cb_llm";
  }
  return "none";
}

Method parse_method(std::string_view name) {
  if (name == "oracle") return Method::kOracle;
  if (name == "none") return Method::kNone;
  if (name == "cb_rag") return Method::kCbRag;
  if (name == "cb_llm") return Method::kCbLlm;
  throw ConfigError("unknown method '" + std::string(name) + "' (oracle, none, cb_rag, cb_llm)");
}

std::string Variant::label() const {
  std::string out;
  switch (method) {
    case Method::kOracle: out = "Oracle"; break;
    case Method::kNone: out = "No Context"; break;
    case Method::kCbLlm: out = "CB-LLM"; break;
    case Method::kCbRag:
      out = "CB-RAG [" + std::to_string(c) + ", " + std::to_string(k) + "]";
      break;
  }
  if (method == Method::kCbLlm && k != 10) out += " [k=" + std::to_string(k) + "]";
  if (llm_fix) out += " LLM_fix";
  return out;
}

void Variant::validate() const {
  if (method == Method::kCbRag && c < 1) throw ConfigError("cb_rag needs c >= 1");
  if ((method == Method::kCbRag || method == Method::kCbLlm) && k < 1) {
    throw ConfigError(std::string(method_name(method)) + " needs k >= 1");
  }
}

bool RunConfig::needs_store() const {
  for (const auto& v : variants) {
    if (v.method == Method::kCbRag) return true;
  }
  return false;
}

void RunConfig::validate() const {
  if (variants.empty()) throw ConfigError("no method configured");
  for (const auto& v : variants) v.validate();
  if (manifest.empty()) throw ConfigError("config needs 'manifest'");
  if (stopwords.empty()) throw ConfigError("config needs 'stopwords'");
  if (needs_store() && !store) throw ConfigError("cb_rag needs 'store'");
  if (asr.adapter != "simulator") {
    throw ConfigError("unknown ASR adapter '" + asr.adapter + "' (only 'simulator' is built in)");
  }
  asr.sim.validate();
  if (embedding.provider != "hash" && embedding.provider != "http") {
    throw ConfigError("embedding.provider must be 'hash' or 'http'");
  }
  if (llm.provider != "stub" && llm.provider != "http") {
    throw ConfigError("llm.provider must be 'stub' or 'http'");
  }
  if (llm.stub_mode != "echo" && llm.stub_mode != "fixed") {
    throw ConfigError("llm.stub_mode must be 'echo' or 'fixed'");
  }
}

RunConfig run_config_from(const ConfigDocument& doc, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  Variant defaults;
  {
    Reader r(top_level(doc.values), "");
    read_variant(r, defaults);
    r.get_path("manifest", cfg.manifest, base_dir);
    r.get_path("stopwords", cfg.stopwords, base_dir);
    r.get_path("store", cfg.store, base_dir);
    r.get_path("output_dir", cfg.output_dir, base_dir);
    std::string timing = "modeled";
    r.get("timing", timing);
    if (timing == "wall") cfg.timing = Timing::kWall;
    else if (timing == "modeled") cfg.timing = Timing::kModeled;
    else throw ConfigError("timing must be 'wall' or 'modeled'");
    r.get("threads", cfg.threads);
  }
  {
    Reader r(section(doc.values, "embedding"), "embedding.");
    r.get("provider", cfg.embedding.provider);
    r.get("dim", cfg.embedding.dim);
    r.get("endpoint", cfg.embedding.endpoint);
    r.get("timeout_ms", cfg.embedding.timeout_ms);
    r.get("max_chars", cfg.embedding.max_chars);
    r.get_path("cache", cfg.embedding.cache, base_dir);
  }
  {
    Reader r(section(doc.values, "llm"), "llm.");
    r.get("provider", cfg.llm.provider);
    r.get("stub_mode", cfg.llm.stub_mode);
    r.get("stub_reply", cfg.llm.stub_reply);
    r.get("endpoint", cfg.llm.endpoint);
    r.get("api_key", cfg.llm.api_key);
    r.get("model", cfg.llm.model);
    r.get("temperature", cfg.llm.temperature);
    r.get("retries", cfg.llm.retries);
    r.get_path("generation_prompt", cfg.llm.generation_prompt, base_dir);
    r.get_path("correction_prompt", cfg.llm.correction_prompt, base_dir);
  }
  {
    Reader r(section(doc.values, "asr"), "asr.");
    r.get("adapter", cfg.asr.adapter);
    r.get("seed", cfg.asr.sim.seed);
    r.get("p_ctx", cfg.asr.sim.p_ctx);
    r.get("p_base", cfg.asr.sim.p_base);
    r.get_path("common_words", cfg.asr.common_words, base_dir);
  }
  {
    Reader r(section(doc.values, "cost"), "cost.");
    r.get("asr_per_segment_s", cfg.cost.asr_per_segment_s);
    r.get("asr_per_token_s", cfg.cost.asr_per_token_s);
    r.get("asr_per_context_word_s", cfg.cost.asr_per_context_word_s);
    r.get("embed_per_call_s", cfg.cost.embed_per_call_s);
    r.get("search_per_entry_s", cfg.cost.search_per_entry_s);
    r.get("llm_per_call_s", cfg.cost.llm_per_call_s);
    r.get("llm_per_output_word_s", cfg.cost.llm_per_output_word_s);
  }
  for (const auto& key_value : doc.values) {
    const auto& key = key_value.first;
    auto dot = key.find('.');
    if (dot == std::string::npos) continue;
    auto table = key.substr(0, dot);
    if (table != "embedding" && table != "llm" && table != "asr" && table != "cost") {
      throw ConfigError("unknown config table [" + table + "]");
    }
  }

  if (doc.variants.empty()) {
    cfg.variants.push_back(defaults);
  } else {
    for (const auto& table : doc.variants) {
      Variant v = defaults;
      Reader r(table, "variant.");
      read_variant(r, v);
      cfg.variants.push_back(v);
    }
  }

  if (cfg.asr.common_words) {
    for (auto& w : read_word_file(*cfg.asr.common_words)) cfg.asr.sim.common_words.insert(std::move(w));
  }

  HttpEmbeddingOptions eo = HttpEmbeddingOptions::from_env({cfg.embedding.endpoint, cfg.embedding.timeout_ms});
  cfg.embedding.endpoint = eo.endpoint;
  cfg.embedding.timeout_ms = eo.timeout_ms;
  HttpLlmOptions lo;
  lo.endpoint = cfg.llm.endpoint;
  lo.api_key = cfg.llm.api_key;
  lo.model = cfg.llm.model;
  lo.temperature = cfg.llm.temperature;
  lo = HttpLlmOptions::from_env(lo);
  cfg.llm.endpoint = lo.endpoint;
  cfg.llm.api_key = lo.api_key;
  cfg.llm.model = lo.model;
  cfg.llm.temperature = lo.temperature;
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from(parse_config(ss.str()), path.parent_path());
}

std::vector<std::string> read_word_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open word file: " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    for (auto& tok : normalize(t)) out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace ctxforge
