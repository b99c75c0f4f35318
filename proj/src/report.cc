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

#include "ctxforge/report.h"

#include <cstdio>
#include <fstream>

#include <spdlog/spdlog.h>

namespace ctxforge {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kReductionFormula = "(WER_none - WER_method) / WER_none";

std::string printf_str(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string pct(const std::optional<double>& v) { return v ? printf_str("%.1f%%", *v) : "--"; }
std::string times(const std::optional<double>& v) { return v ? printf_str("%.2f×", *v) : "--"; }

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

bool is_baseline(const Variant& v) { return v.method == Method::kNone && !v.llm_fix; }

}  // namespace

EvaluationReport evaluate_run(const std::vector<MethodRun>& runs, const std::vector<Document>& docs,
                              const StopwordSet& stop, Timing timing) {
  EvaluationReport report;
  report.timing = timing == Timing::kModeled ? "modeled" : "wall";

  const auto oracle = oracle_contexts(docs, stop);
  std::vector<TokenList> references;
  for (const auto& d : docs) {
    std::string joined;
    for (const auto& s : d.segments) {
      if (!joined.empty()) joined += ' ';
      joined += *s.reference;
    }
    references.push_back(normalize(joined));
  }

  const MethodRun* baseline = nullptr;
  for (const auto& r : runs) {
    if (is_baseline(r.variant)) {
      baseline = &r;
      break;
    }
  }
  if (!baseline) report.warnings.push_back("no no-context run; time ratios omitted");

  for (const auto& run : runs) {
    if (run.documents.size() != docs.size()) {
      throw std::invalid_argument("evaluate_run: run '" + run.variant.label() + "' has " +
                                  std::to_string(run.documents.size()) + " documents, manifest has " +
                                  std::to_string(docs.size()));
    }
    ReportRow row;
    row.label = run.variant.label();
    row.variant = run.variant;
    row.baseline = &run == baseline;

    std::size_t errors = 0;
    OverlapAccumulator overlap;
    std::vector<std::size_t> sizes, oracle_sizes;
    std::size_t seg = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto& result = run.documents[d];
      if (result.records.size() != docs[d].segments.size()) {
        throw std::invalid_argument("evaluate_run: segment count mismatch in " + docs[d].doc_id);
      }
      if (!references[d].empty()) {
        auto w = wer(references[d], normalize(result.final_transcript));
        row.substitutions += w.substitutions;
        row.deletions += w.deletions;
        row.insertions += w.insertions;
        row.ref_words += w.ref_len;
      }
      for (const auto& rec : result.records) {
        overlap.add(rec.context, oracle[seg]);
        sizes.push_back(rec.context.size());
        oracle_sizes.push_back(oracle[seg].size());
        row.context_s += rec.context_s;
        row.asr_s += rec.asr_s;
        row.fix_s += rec.fix_s;
        ++seg;
      }
    }
    if (row.ref_words == 0) throw UndefinedWerError("evaluate_run: all references are empty");
    errors = row.substitutions + row.deletions + row.insertions;
    row.wer = static_cast<double>(errors) / static_cast<double>(row.ref_words);
    row.overlap_pct = overlap.value();
    row.count_ratio = count_ratio(std::span<const std::size_t>(sizes), std::span<const std::size_t>(oracle_sizes));
    row.segments = sizes.size();
    std::size_t total_ctx = 0;
    for (auto s : sizes) total_ctx += s;
    row.mean_context_size = sizes.empty() ? 0.0 : static_cast<double>(total_ctx) / static_cast<double>(sizes.size());
    row.total_s = run.total_s();
    report.rows.push_back(std::move(row));
  }

  if (baseline) {
    const double base_total = baseline->total_s();
    const double base_asr = baseline->asr_s();
    const ReportRow* base_row = nullptr;
    for (const auto& r : report.rows) {
      if (r.baseline) base_row = &r;
    }
    const double base_wer = base_row->wer;
    for (auto& row : report.rows) {
      if (base_total > 0.0) row.time_ratio = time_ratio(row.total_s, base_total);
      if (base_asr > 0.0) row.asr_time_ratio = time_ratio(row.asr_s, base_asr);
      row.relative_reduction = relative_reduction(base_wer, row.wer);
    }
    if (!(base_total > 0.0)) report.warnings.push_back("no-context run took zero time; time ratios omitted");
  }
  for (const auto& w : report.warnings) spdlog::warn("{}", w);
  return report;
}

ordered_json report_to_json(const EvaluationReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({
        {"label", r.label},
        {"method", method_name(r.variant.method)},
        {"c", r.variant.c},
        {"k", r.variant.k},
        {"llm_fix", r.variant.llm_fix},
        {"baseline", r.baseline},
        {"wer", r.wer},
        {"substitutions", r.substitutions},
        {"deletions", r.deletions},
        {"insertions", r.insertions},
        {"ref_words", r.ref_words},
        {"overlap_pct", opt(r.overlap_pct)},
        {"count_ratio", opt(r.count_ratio)},
        {"time_ratio", opt(r.time_ratio)},
        {"asr_time_ratio", opt(r.asr_time_ratio)},
        {"relative_reduction", opt(r.relative_reduction)},
        {"segments", r.segments},
        {"mean_context_size", r.mean_context_size},
        {"total_s", r.total_s},
        {"context_s", r.context_s},
        {"asr_s", r.asr_s},
        {"fix_s", r.fix_s},
    });
  }
  return {
      {"timing", report.timing},
      {"relative_reduction_formula", kReductionFormula},
      {"rows", rows},
      {"warnings", report.warnings},
  };
}

EvaluationReport report_from_json(const json& j) {
  EvaluationReport report;
  try {
    report.timing = j.value("timing", "wall");
    for (const auto& w : j.value("warnings", json::array())) report.warnings.push_back(w.get<std::string>());
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.label = r.at("label").get<std::string>();
      row.variant.method = parse_method(r.at("method").get<std::string>());
      row.variant.c = r.value("c", std::size_t{100});
      row.variant.k = r.value("k", std::size_t{10});
      row.variant.llm_fix = r.value("llm_fix", false);
      row.baseline = r.value("baseline", false);
      row.wer = r.at("wer").get<double>();
      row.substitutions = r.value("substitutions", std::size_t{0});
      row.deletions = r.value("deletions", std::size_t{0});
      row.insertions = r.value("insertions", std::size_t{0});
      row.ref_words = r.value("ref_words", std::size_t{0});
      row.overlap_pct = opt_from(r, "overlap_pct");
      row.count_ratio = opt_from(r, "count_ratio");
      row.time_ratio = opt_from(r, "time_ratio");
      row.asr_time_ratio = opt_from(r, "asr_time_ratio");
      row.relative_reduction = opt_from(r, "relative_reduction");
      row.segments = r.value("segments", std::size_t{0});
      row.mean_context_size = r.value("mean_context_size", 0.0);
      row.total_s = r.value("total_s", 0.0);
      row.context_s = r.value("context_s", 0.0);
      row.asr_s = r.value("asr_s", 0.0);
      row.fix_s = r.value("fix_s", 0.0);
      report.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string report_markdown(const EvaluationReport& report) {
  std::string md;
  md += "| Method [c, k] | WER ↓ | Overlap ↑ | Count ↓ | Time ↓ | Rel. WER reduction |\n";
  md += "|---|---|---|---|---|---|\n";
  for (const auto& r : report.rows) {
    std::optional<double> reduction;
    if (r.relative_reduction) reduction = *r.relative_reduction * 100.0;
    md += "| " + r.label + " | " + printf_str("%.1f%%", r.wer * 100.0) + " | " + pct(r.overlap_pct) +
          " | " + times(r.count_ratio) + " | " + times(r.time_ratio) + " | " +
          (r.baseline ? std::string("--") : pct(reduction)) + " |\n";
  }
  md += "\nRelative WER reduction = ";
  md += kReductionFormula;
  md += ". Time is normalized to the no-context run (";
  md += report.timing;
  md += " timing; context construction + ASR + correction).\n";
  for (const auto& w : report.warnings) md += "\nWarning: " + w + "\n";
  return md;
}

void write_report(const EvaluationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json", std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / "report.json").string());
    out << report_to_json(report).dump(2) << '\n';
  }
  std::ofstream md(dir / "report.md", std::ios::trunc);
  if (!md) throw IoError("cannot write " + (dir / "report.md").string());
  md << report_markdown(report);
}

}  // namespace ctxforge
