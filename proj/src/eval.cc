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


#include "gridcomp/eval.h"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "gridcomp/file_io.h"
#include "gridcomp/navigation.h"
#include "gridcomp/resolver.h"

namespace gridcomp {
namespace {

using nlohmann::json;

const char* PredictionKey(EvalField field) {
  return field == EvalField::kTarget ? "target_id" : "actions";
}

std::string GoldValue(const Episode& e, EvalField field) {
  return field == EvalField::kTarget ? e.target_id : ActionsToString(e.gold_actions);
}

}  // namespace

std::string_view EvalFieldName(EvalField field) {
  return field == EvalField::kTarget ? "target" : "actions";
}

EvalField ParseEvalField(std::string_view name) {
  if (name == "target") return EvalField::kTarget;
  if (name == "actions") return EvalField::kActions;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown field '" + std::string(name) + "' (target or actions)");
}

int EmTenths(int n_match, int n_total) {
  if (n_total <= 0) return 0;
  const long long m = n_match;
  const long long n = n_total;
  return static_cast<int>((2000 * m + n) / (2 * n));
}

std::string FormatTenths(int tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string EvalReport::em_percent() const { return FormatTenths(em_tenths); }

EvalReport EvaluateEm(const Predictions& predictions,
                      const std::vector<Episode>& gold, EvalField field,
                      std::string split, int jobs) {
  std::set<std::string_view> gold_ids;
  for (const Episode& e : gold) gold_ids.insert(e.episode_id);
  for (const auto& [id, value] : predictions) {
    if (!gold_ids.contains(id)) {
      throw Error(ErrorKind::kUnknownEpisodeId,
                  "prediction for unknown episode '" + id + "'");
    }
  }

  // Per-episode verdicts are independent; they are merged in gold order.
  std::vector<std::optional<Mismatch>> verdicts(gold.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Episode& e = gold[i];
      std::string expected = GoldValue(e, field);
      auto it = predictions.find(e.episode_id);
      if (it == predictions.end()) {
        verdicts[i] = Mismatch{e.episode_id, "", std::move(expected), true};
      } else if (it->second != expected) {
        verdicts[i] = Mismatch{e.episode_id, it->second, std::move(expected), false};
      }
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(gold.size())));
  if (jobs == 1) {
    work(0, gold.size());
  } else {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (gold.size() + jobs - 1) / jobs;
    for (std::size_t b = 0; b < gold.size(); b += chunk) {
      threads.emplace_back(work, b, std::min(gold.size(), b + chunk));
    }
  }

  EvalReport report;
  report.split = std::move(split);
  report.field = field;
  report.n_total = static_cast<int>(gold.size());
  for (auto& v : verdicts) {
    if (v) report.mismatches.push_back(std::move(*v));
  }
  report.n_match = report.n_total - static_cast<int>(report.mismatches.size());
  report.em_tenths = EmTenths(report.n_match, report.n_total);
  return report;
}

std::string ReportTable(const EvalReport& report, int max_rows) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "split" << std::setw(9) << "field"
      << std::right << std::setw(8) << "total" << std::setw(8) << "match"
      << std::setw(8) << "EM" << "\n";
  out << std::left << std::setw(12) << (report.split.empty() ? "-" : report.split)
      << std::setw(9) << EvalFieldName(report.field) << std::right
      << std::setw(8) << report.n_total << std::setw(8) << report.n_match
      << std::setw(8) << report.em_percent() << "\n";
  if (!report.mismatches.empty()) {
    out << "\nmismatches (" << report.mismatches.size() << "):\n";
    int shown = 0;
    for (const Mismatch& m : report.mismatches) {
      if (shown++ == max_rows) {
        out << "  ...\n";
        break;
      }
      out << "  " << m.episode_id << "  predicted="
          << (m.missing ? "<missing>" : m.predicted) << "  gold=" << m.gold << "\n";
    }
  }
  return out.str();
}

json ReportToJson(const EvalReport& report) {
  json mismatches = json::array();
  for (const Mismatch& m : report.mismatches) {
    json row = {{"episode_id", m.episode_id}, {"gold", m.gold}};
    row["predicted"] = m.missing ? json(nullptr) : json(m.predicted);
    if (m.missing) row["missing"] = true;
    mismatches.push_back(std::move(row));
  }
  return {{"split", report.split},
          {"field", EvalFieldName(report.field)},
          {"n_total", report.n_total},
          {"n_match", report.n_match},
          {"em_percent", report.em_percent()},
          {"mismatches", std::move(mismatches)}};
}

Predictions ReadPredictions(const std::string& path, EvalField field) {
  std::istringstream in(ReadFile(path));
  Predictions predictions;
  const char* key = PredictionKey(field);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw Error(ErrorKind::kMalformedDocument, where + "not a JSON object");
    }
    if (!doc.contains("episode_id") || !doc["episode_id"].is_string()) {
      throw Error(ErrorKind::kMalformedDocument, where + "missing 'episode_id'");
    }
    if (!doc.contains(key) || !doc[key].is_string()) {
      throw Error(ErrorKind::kMalformedDocument,
                  where + "missing string '" + key + "'");
    }
    auto [it, fresh] = predictions.emplace(doc["episode_id"].get<std::string>(),
                                           doc[key].get<std::string>());
    if (!fresh) {
      throw Error(ErrorKind::kMalformedDocument,
                  where + "duplicate prediction for '" + it->first + "'");
    }
  }
  return predictions;
}

std::string PredictionsToJsonl(const std::vector<std::string>& order,
                               const Predictions& predictions, EvalField field) {
  std::string out;
  for (const std::string& id : order) {
    auto it = predictions.find(id);
    if (it == predictions.end()) continue;
    out += json{{"episode_id", id}, {PredictionKey(field), it->second}}.dump();
    out += '\n';
  }
  return out;
}

Predictions OraclePredictions(const std::vector<Episode>& episodes,
                              EvalField field, const Lexicon& lexicon) {
  Predictions out;
  for (const Episode& e : episodes) {
    const CommandAst ast = ParseText(e.question, lexicon);
    const std::string target = Execute(Compile(ast, lexicon), e.world);
    out[e.episode_id] = field == EvalField::kTarget
                            ? target
                            : ActionsToString(PlanActions(e.world, target));
  }
  return out;
}

}  // namespace gridcomp
