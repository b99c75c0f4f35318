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

#include "ctxforge/config.h"
#include "ctxforge/report.h"

namespace ctxforge {

/// Loads every input named by `cfg`, runs each configured variant (plus a
/// no-context baseline when none is configured), writes report.json,
/// report.md and per-variant segment logs into cfg.output_dir, and returns
/// the report.
EvaluationReport run_experiment(const RunConfig& cfg);

/// Entry point of the `ctxforge` tool. Returns 0 on success, 1 on a runtime
/// error and 2 on a usage error.
int dispatch(int argc, const char* const* argv);

}  // namespace ctxforge
