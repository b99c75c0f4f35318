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

#include <json.hpp>

#include "ctxforge/metrics.h"
#include "ctxforge/pipeline.h"

namespace ctxforge {

struct ReportRow {
  std::string label;
  Variant variant;
  bool baseline = false;  // the no-context run other rows are timed against

  double wer = 0.0;  // corpus WER, fraction
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_words = 0;

  std::optional<double> overlap_pct;
  std::optional<double> count_ratio;
  std::optional<double> time_ratio;      // all stages
  std::optional<double> asr_time_ratio;  // ASR stage only
  std::optional<double> relative_reduction;  // vs the baseline WER, fraction

  std::size_t segments = 0;
  double mean_context_size = 0.0;
  double total_s = 0.0;
  double context_s = 0.0;
  double asr_s = 0.0;
  double fix_s = 0.0;
};

struct EvaluationReport {
  std::vector<ReportRow> rows;
  std::string timing;  // "wall" or "modeled"
  std::vector<std::string> warnings;
};

/// Scores every run against the manifest references: corpus WER over each
/// document's concatenated transcript (token-weighted across documents),
/// pooled overlap against per-segment oracle contexts, count ratio, and
/// time ratios against the first plain no-context run. Without such a run
/// the time ratios are left empty and a warning is recorded.
EvaluationReport evaluate_run(const std::vector<MethodRun>& runs, const std::vector<Document>& docs,
                              const StopwordSet& stop, Timing timing = Timing::kWall);

nlohmann::ordered_json report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& j);

// Table with WER, Overlap, Count, Time and relative WER reduction columns.
std::string report_markdown(const EvaluationReport& report);

// Writes report.json and report.md into `dir` (created if needed).
void write_report(const EvaluationReport& report, const std::filesystem::path& dir);

}  // namespace ctxforge
