// Copyright 2026 The opalg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opalg/io.hpp"

namespace opalg {

/// Command-line overrides of the problem file settings.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> cert_tol;
  std::optional<int> iter_cap;
  std::optional<bool> greedy;
  std::optional<int> levels;
  /// Embed witnesses, Choi/Gram objects and bases in the report.
  bool embed = false;
  /// Record wall time in the machine report (breaks byte-identity).
  bool timing = false;
};

struct RunResult {
  Json report;
  /// Human-readable summary.
  std::string text;
  int exit_code = 0;
};

/// The dispatchable commands, in help order.
const std::vector<std::string>& command_names();

/// 0 when every verdict is CERTIFIED (or there are none), 2 if any is
/// REFUTED, else 3 if any is INCONCLUSIVE.
int exit_code_for(const std::vector<Verdict>& verdicts);

/// Runs one command on a parsed problem. Throws InvalidInput for unknown
/// commands or unresolved argument names; other library errors propagate.
RunResult run(const std::string& command, const ProblemFile& problem, const RunOptions& options = {});

}  // namespace opalg
