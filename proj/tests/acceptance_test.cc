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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridcomp/benchgen.h"
#include "gridcomp/eval.h"
#include "gridcomp/file_io.h"
#include "gridcomp/navigation.h"
#include "gridcomp/resolver.h"
#include "gridcomp/verify.h"
#include "support.h"

namespace gridcomp {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Full-size splits for every preset, generated once.
const std::map<std::string, SplitData>& AllPresets() {
  static const std::map<std::string, SplitData> data = [] {
    std::map<std::string, SplitData> out;
    for (const std::string& name : PresetNames()) {
      out[name] = GenerateSplit(Preset(name, 2026), Lexicon::Default(), 4);
    }
    return out;
  }();
  return data;
}

Outcome OracleEquivalence() {
  const auto start = Clock::now();
  Rng rng(1);
  int unique = 0, ambiguous = 0, empty = 0;
  for (int i = 0; i < 10000; ++i) {
    const GridWorld w = testing::RandomWorld(rng, rng.Between(4, 8), 14);
    const CommandAst q = testing::RandomCommand(rng, i % 4);
    const ObjectSet denoted = DenoteBruteForce(q, w);
    const ToolProgram program = Compile(q);
    std::string answer;
    std::optional<ErrorKind> failure;
    try {
      answer = Execute(program, w);
    } catch (const Error& e) {
      failure = e.kind();
    }
    const std::size_t n = denoted.ids().size();
    const bool agree =
        (n == 1 && !failure && answer == denoted.ids().front()) ||
        (n == 0 && failure == ErrorKind::kNoTarget) ||
        (n > 1 && failure == ErrorKind::kAmbiguousTarget);
    if (!agree) {
      return {false, "disagreement on case " + std::to_string(i) + ": " + Render(q, Lexicon::Default())};
    }
    (n == 1 ? unique : n == 0 ? empty : ambiguous)++;
  }
  const double secs = Seconds(start);
  std::ostringstream detail;
  detail << "10000/10000 agree (" << unique << " unique, " << ambiguous << " ambiguous, "
         << empty << " empty) in " << secs << "s";
  return {secs < 120.0, detail.str()};
}

Outcome ClosedLoop() {
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [name, data] : AllPresets()) {
    const std::string dir = testing::TempDir("loop");
    const DatasetFiles files = WriteDataset(dir, Preset(name, 2026), data, Lexicon::Default());
    const std::vector<Episode> test = ReadEpisodesFile(files.test_path);
    for (EvalField field : {EvalField::kTarget, EvalField::kActions}) {
      const Predictions preds = OraclePredictions(test, field);
      std::vector<std::string> order;
      for (const Episode& e : test) order.push_back(e.episode_id);
      const std::string pred_path = dir + "/pred.jsonl";
      WriteFile(pred_path, PredictionsToJsonl(order, preds, field));
      const EvalReport r = EvaluateEm(ReadPredictions(pred_path, field), test, field, name);
      if (r.n_total != 500 || r.em_percent() != "100.0") {
        ok = false;
        detail << name << "/" << EvalFieldName(field) << "=" << r.em_percent() << " ";
      }
    }
    std::filesystem::remove_all(dir);
  }
  if (ok) detail << AllPresets().size() << " presets x 500 test episodes, EM 100.0 on target and actions";
  return {ok, detail.str()};
}

Outcome EmArithmetic() {
  const std::vector<Episode>& gold = AllPresets().at("C2").test;
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [matches, want] :
       std::vector<std::pair<int, std::string>>{{479, "95.8"}, {490, "98.0"}, {500, "100.0"}}) {
    Predictions preds;
    for (int i = 0; i < 500; ++i) {
      preds[gold[i].episode_id] = i < matches ? gold[i].target_id : "o-none";
    }
    const EvalReport r = EvaluateEm(preds, gold, EvalField::kTarget, "C2");
    const std::string oracle = testing::EmOracle(matches, 500);
    const bool good = r.n_match == matches && r.em_percent() == want && oracle == want &&
                      ReportToJson(r)["em_percent"] == want;
    ok = ok && good;
    detail << matches << "/500->" << r.em_percent() << " ";
  }
  return {ok, detail.str()};
}

Outcome SymbolicInvariance() {
  SplitSpec spec = Preset("B2", 7);
  spec.episodes_per_split = 1000;
  spec.train_episodes = 0;
  const std::vector<Episode> base = GenerateSplit(spec, Lexicon::Default(), 4).test;
  const Predictions semantic = OraclePredictions(base, EvalField::kTarget);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Lexicon remapped = RemapLexicon(Lexicon::Default(), seed, seed % 2 == 0);
    std::vector<Episode> symbolic = base;
    for (Episode& e : symbolic) {
      e.question = Render(e.ast, remapped);
      if (e.question == Render(e.ast, Lexicon::Default())) {
        return {false, "remap " + std::to_string(seed) + " left a question unchanged"};
      }
    }
    if (OraclePredictions(symbolic, EvalField::kTarget, remapped) != semantic) {
      return {false, "target decisions differ under remap " + std::to_string(seed)};
    }
    // Generating directly under the remapped lexicon picks the same targets.
    const std::vector<Episode> direct = GenerateSplit(spec, remapped, 4).test;
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (direct[i].target_id != base[i].target_id) {
        return {false, "generation under remap " + std::to_string(seed) + " differs at " +
                           base[i].episode_id};
      }
    }
  }
  return {true, "10 remaps x 1000 episodes, identical target decisions"};
}

Outcome ComplexityLadder() {
  std::ostringstream detail;
  bool ok = true;
  for (int n = 1; n <= 3; ++n) {
    const std::string name = "P" + std::to_string(n);
    int exact = 0, total = 0;
    for (const Episode& e : AllPresets().at(name).test) {
      exact += ClauseCount(ParseText(e.question, Lexicon::Default())) == n;
      ++total;
    }
    ok = ok && exact == total;
    detail << name << " " << exact << "/" << total << " have " << n << " clauses; ";
  }
  return {ok, detail.str()};
}

Outcome HoldoutSoundness() {
  int violations = 0;
  for (const auto& [name, data] : AllPresets()) {
    violations += static_cast<int>(HoldoutCheck(data.train, data.test, Preset(name, 2026)).violations.size());
  }
  if (violations != 0) return {false, std::to_string(violations) + " violations on clean presets"};
  const SplitData& p2 = AllPresets().at("P2");
  std::vector<Episode> train = p2.train;
  Episode leaked = p2.test[17];
  leaked.partition = "train";
  train.insert(train.begin() + 100, leaked);
  const HoldoutReport r = HoldoutCheck(train, p2.test, Preset("P2", 2026));
  bool localized = !r.violations.empty();
  std::string reasons;
  for (const HoldoutViolation& v : r.violations) {
    localized = localized && v.episode_id == leaked.episode_id && v.partition == "train";
    reasons += "; " + v.reason;
  }
  return {localized, "0 violations on clean presets; contaminated train gives " +
                         std::to_string(r.violations.size()) + " at " + leaked.episode_id +
                         reasons};
}

Outcome Navigation() {
  std::vector<const Episode*> pool;
  for (const auto& [name, data] : AllPresets()) {
    for (const Episode& e : data.test) pool.push_back(&e);
  }
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const Episode& e = *pool[rng.Uniform(static_cast<int>(pool.size()))];
    const std::vector<Action> plan = PlanActions(e.world, e.target_id);
    const Position anchor = e.world.Find(e.target_id)->position;
    const Agent end = Simulate(e.world, plan);
    if (!(end.position == anchor)) return {false, "plan misses target in " + e.episode_id};
    const int bfs = testing::BfsPlanLength(e.world, anchor);
    if (static_cast<int>(plan.size()) != bfs) {
      return {false, e.episode_id + ": plan " + std::to_string(plan.size()) + " vs BFS " +
                         std::to_string(bfs)};
    }
  }
  return {true, "1000/1000 land on the anchor with BFS-optimal length"};
}

Outcome ToolVerification() {
  std::ostringstream detail;
  bool ok = true;
  for (const char* tool : {"filter_by_attribute", "filter_relationship", "filter_size",
                           "unique_target"}) {
    LocalEndpoint ep;
    const VerificationReport r = VerifyTool(ep, tool);
    ok = ok && r.pass && r.build_passed == 3 && r.validation_passed == 5;
  }
  detail << "reference 8/8 on all tools; ";
  for (const Mutant& m : BuiltinMutants()) {
    LocalEndpoint ep(m.invoker);
    const VerificationReport r = VerifyTool(ep, m.tool);
    const bool caught = !r.pass && r.failure == "divergence" && r.first_divergence &&
                        !r.first_divergence->inputs.is_null() &&
                        r.first_divergence->expected != r.first_divergence->actual;
    ok = ok && caught;
    detail << m.name << " caught at " << (r.first_divergence ? r.first_divergence->phase : "-")
           << " " << (r.first_divergence ? r.first_divergence->index : -1) << "; ";
  }
  ok = ok && BuiltinMutants().size() >= 5;
  return {ok, detail.str()};
}

Outcome ParserRoundTrip() {
  Rng rng(9);
  const Lexicon remapped = RemapLexicon(Lexicon::Default(), 3, true);
  for (int i = 0; i < 10000; ++i) {
    const CommandAst a = testing::RandomCommand(rng, i % (kMaxClauses + 1));
    const Lexicon& lex = i % 5 == 0 ? remapped : Lexicon::Default();
    if (!(ParseText(Render(a, lex), lex) == a)) {
      return {false, "round trip failed: " + Render(a, Lexicon::Default())};
    }
  }
  // An out-of-lexicon word spliced in at a random token boundary is rejected
  // at its character offset.
  for (int i = 0; i < 1000; ++i) {
    std::string text = Render(testing::RandomCommand(rng, i % 4), Lexicon::Default());
    std::vector<std::size_t> starts;
    for (const Token& t : Tokenize(text, Lexicon::Default())) starts.push_back(t.offset);
    const std::size_t k = rng.Uniform(static_cast<int>(starts.size()) + 1);
    const std::size_t at = k < starts.size() ? starts[k] : text.size() + 1;
    if (k < starts.size()) {
      text.insert(at, "zorblax ");
    } else {
      text += " zorblax";
    }
    try {
      Tokenize(text, Lexicon::Default());
      return {false, "accepted: " + text};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUnknownToken || e.position() != at) {
        return {false, "wrong rejection for: " + text + " (" + e.what() + ")"};
      }
    }
  }
  return {true, "10000 ASTs round-trip; 1000 unknown tokens rejected at their offset"};
}

Outcome Determinism() {
  std::ostringstream detail;
  for (const char* name : {"A1", "C1", "P3", "S6"}) {
    std::vector<std::string> bytes[2];
    std::string digests[2];
    for (int run = 0; run < 2; ++run) {
      const SplitSpec spec = Preset(name, 99);
      const std::string dir = testing::TempDir("det");
      const DatasetFiles files =
          WriteDataset(dir, spec, GenerateSplit(spec, Lexicon::Default(), run == 0 ? 1 : 6),
                       Lexicon::Default());
      for (const std::string& p : {files.train_path, files.test_path, files.manifest_path}) {
        bytes[run].push_back(ReadFile(p));
      }
      digests[run] = files.digest;
      std::filesystem::remove_all(dir);
    }
    if (bytes[0] != bytes[1]) return {false, std::string(name) + " files differ between runs"};
    detail << name << " " << digests[0].substr(0, 12) << " ";
  }
  detail << "identical across runs and job counts";
  return {true, detail.str()};
}

}  // namespace
}  // namespace gridcomp

int main() {
  using gridcomp::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle-equivalence", gridcomp::OracleEquivalence},
      {"closed-loop-em", gridcomp::ClosedLoop},
      {"em-arithmetic", gridcomp::EmArithmetic},
      {"symbolic-invariance", gridcomp::SymbolicInvariance},
      {"complexity-ladder", gridcomp::ComplexityLadder},
      {"holdout-soundness", gridcomp::HoldoutSoundness},
      {"navigation", gridcomp::Navigation},
      {"tool-verification", gridcomp::ToolVerification},
      {"parser-round-trip", gridcomp::ParserRoundTrip},
      {"determinism", gridcomp::Determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
