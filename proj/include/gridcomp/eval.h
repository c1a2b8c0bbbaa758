// Copyright 2026 The Gridcomp Authors.
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


// Exact-match scoring of predicted targets or action strings against a
// generated split, plus the oracle that produces perfect predictions.

#ifndef GRIDCOMP_EVAL_H_
#define GRIDCOMP_EVAL_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gridcomp/benchgen.h"
#include "json.hpp"

namespace gridcomp {

enum class EvalField { kTarget, kActions };

std::string_view EvalFieldName(EvalField field);  // "target" / "actions"
// Throws kInvalidArgument.
EvalField ParseEvalField(std::string_view name);

// episode id -> predicted target id or space-separated action string.
using Predictions = std::map<std::string, std::string, std::less<>>;

struct Mismatch {
  std::string episode_id;
  std::string predicted;  // empty when missing
  std::string gold;
  bool missing = false;
};

struct EvalReport {
  std::string split;
  EvalField field = EvalField::kTarget;
  int n_total = 0;
  int n_match = 0;
  int em_tenths = 0;  // EM in tenths of a percent, rounded half up
  std::vector<Mismatch> mismatches;  // gold order

  std::string em_percent() const;  // "95.8"
};

// round(1000 * n_match / n_total) with halves rounded up; 0 for n_total 0.
int EmTenths(int n_match, int n_total);
std::string FormatTenths(int tenths);

// Errors: kUnknownEpisodeId for a prediction with no gold episode.
// Missing predictions count as mismatches.
EvalReport EvaluateEm(const Predictions& predictions,
                      const std::vector<Episode>& gold, EvalField field,
                      std::string split = "", int jobs = 1);

std::string ReportTable(const EvalReport& report, int max_rows = 20);
nlohmann::json ReportToJson(const EvalReport& report);

// Line-delimited {episode_id, target_id} or {episode_id, actions}.
// Errors: kIo, kMalformedDocument (including duplicate ids).
Predictions ReadPredictions(const std::string& path, EvalField field);
std::string PredictionsToJsonl(const std::vector<std::string>& order,
                               const Predictions& predictions, EvalField field);

// Parses, compiles and executes each question; actions come from the planner.
// Errors propagate from parsing and execution.
Predictions OraclePredictions(const std::vector<Episode>& episodes,
                              EvalField field,
                              const Lexicon& lexicon = Lexicon::Default());

}  // namespace gridcomp

#endif  // GRIDCOMP_EVAL_H_
