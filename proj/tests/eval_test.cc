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


#include <gtest/gtest.h>

#include <filesystem>

#include "gridcomp/eval.h"
#include "gridcomp/file_io.h"
#include "gtest_util.h"
#include "support.h"

namespace gridcomp {
namespace {

std::vector<Episode> TestEpisodes(int n) {
  SplitSpec spec = Preset("A1", 12);
  spec.episodes_per_split = n;
  spec.train_episodes = 0;
  return GenerateSplit(spec).test;
}

Predictions WithMatches(const std::vector<Episode>& gold, int matches) {
  Predictions p;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    p[gold[i].episode_id] = static_cast<int>(i) < matches ? gold[i].target_id : "wrong";
  }
  return p;
}

TEST(EmTenths, TableValues) {
  EXPECT_EQ(FormatTenths(EmTenths(479, 500)), "95.8");
  EXPECT_EQ(FormatTenths(EmTenths(500, 500)), "100.0");
  EXPECT_EQ(FormatTenths(EmTenths(0, 500)), "0.0");
  EXPECT_EQ(FormatTenths(EmTenths(490, 500)), "98.0");
}

TEST(EmTenths, HalvesRoundUp) {
  EXPECT_EQ(FormatTenths(EmTenths(1, 2000)), "0.1");   // 0.05
  EXPECT_EQ(FormatTenths(EmTenths(1, 3)), "33.3");
  EXPECT_EQ(FormatTenths(EmTenths(2, 3)), "66.7");
  EXPECT_EQ(FormatTenths(EmTenths(0, 0)), "0.0");
}

TEST(EmTenths, AgreesWithLongDivisionOracle) {
  for (int n = 1; n <= 600; ++n) {
    for (int m = 0; m <= n; ++m) {
      ASSERT_EQ(FormatTenths(EmTenths(m, n)), testing::EmOracle(m, n)) << m << "/" << n;
    }
  }
}

TEST(EvaluateEm, CountsAndMismatches) {
  const auto gold = TestEpisodes(40);
  const EvalReport r = EvaluateEm(WithMatches(gold, 37), gold, EvalField::kTarget, "A1");
  EXPECT_EQ(r.n_total, 40);
  EXPECT_EQ(r.n_match, 37);
  EXPECT_EQ(r.em_percent(), "92.5");
  ASSERT_EQ(r.mismatches.size(), 3u);
  EXPECT_EQ(r.mismatches[0].episode_id, gold[37].episode_id);
  EXPECT_EQ(r.mismatches[0].predicted, "wrong");
  EXPECT_EQ(r.mismatches[0].gold, gold[37].target_id);
  const auto json = ReportToJson(r);
  EXPECT_EQ(json["em_percent"], "92.5");
  EXPECT_NE(ReportTable(r).find("92.5"), std::string::npos);
}

TEST(EvaluateEm, MissingPredictionsAreListed) {
  const auto gold = TestEpisodes(10);
  Predictions p = WithMatches(gold, 10);
  p.erase(gold[4].episode_id);
  const EvalReport r = EvaluateEm(p, gold, EvalField::kTarget);
  EXPECT_EQ(r.n_match, 9);
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_TRUE(r.mismatches[0].missing);
}

TEST(EvaluateEm, UnknownEpisodeId) {
  const auto gold = TestEpisodes(5);
  Predictions p = WithMatches(gold, 5);
  p["nowhere-1"] = "o1";
  EXPECT_ERROR_KIND(EvaluateEm(p, gold, EvalField::kTarget), ErrorKind::kUnknownEpisodeId);
}

TEST(EvaluateEm, ParallelMatchesSerial) {
  const auto gold = TestEpisodes(101);
  const Predictions p = WithMatches(gold, 77);
  const auto serial = ReportToJson(EvaluateEm(p, gold, EvalField::kTarget, "x", 1));
  EXPECT_EQ(ReportToJson(EvaluateEm(p, gold, EvalField::kTarget, "x", 7)), serial);
}

TEST(Oracle, ClosesTheLoopForBothFields) {
  const auto gold = TestEpisodes(50);
  for (EvalField f : {EvalField::kTarget, EvalField::kActions}) {
    const EvalReport r = EvaluateEm(OraclePredictions(gold, f), gold, f);
    EXPECT_EQ(r.em_percent(), "100.0");
  }
}

TEST(Predictions, FileRoundTripAndErrors) {
  const auto gold = TestEpisodes(8);
  const std::string dir = testing::TempDir("pred");
  std::vector<std::string> order;
  for (const auto& e : gold) order.push_back(e.episode_id);
  const Predictions p = OraclePredictions(gold, EvalField::kActions);
  WriteFile(dir + "/p.jsonl", PredictionsToJsonl(order, p, EvalField::kActions));
  EXPECT_EQ(ReadPredictions(dir + "/p.jsonl", EvalField::kActions), p);
  EXPECT_ERROR_KIND(ReadPredictions(dir + "/p.jsonl", EvalField::kTarget),
                    ErrorKind::kMalformedDocument);
  WriteFile(dir + "/dup.jsonl",
            "{\"episode_id\":\"a\",\"target_id\":\"o1\"}\n{\"episode_id\":\"a\",\"target_id\":\"o2\"}\n");
  EXPECT_ERROR_KIND(ReadPredictions(dir + "/dup.jsonl", EvalField::kTarget),
                    ErrorKind::kMalformedDocument);
  EXPECT_ERROR_KIND(ReadPredictions(dir + "/none.jsonl", EvalField::kTarget), ErrorKind::kIo);
  EXPECT_ERROR_KIND(ParseEvalField("score"), ErrorKind::kInvalidArgument);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace gridcomp
