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

#include "gridcomp/benchgen.h"
#include "gridcomp/file_io.h"
#include "gridcomp/resolver.h"
#include "gtest_util.h"
#include "support.h"

namespace gridcomp {
namespace {

SplitSpec SmallPreset(const std::string& name, std::uint64_t seed = 1) {
  SplitSpec spec = Preset(name, seed);
  spec.episodes_per_split = 60;
  spec.train_episodes = 120;
  return spec;
}

bool MentionsPair(const ReferentAst& r, Color c, Shape s) {
  if (r.color == c && r.noun == s) return true;
  for (const RelClause& clause : r.clauses) {
    if (MentionsPair(clause.tail, c, s)) return true;
  }
  return false;
}

int LongestGroup(const ReferentAst& r) {
  int best = static_cast<int>(r.clauses.size());
  for (const RelClause& c : r.clauses) best = std::max(best, LongestGroup(c.tail));
  return best;
}

int Depth(const ReferentAst& r) {
  int best = 0;
  for (const RelClause& c : r.clauses) best = std::max(best, 1 + Depth(c.tail));
  return best;
}

TEST(SampleWorld, EmptyAndDeterministic) {
  EXPECT_TRUE(SampleWorld(6, 0, 4).objects().empty());
  EXPECT_EQ(SampleWorld(6, 10, 4), SampleWorld(6, 10, 4));
  EXPECT_NE(SampleWorld(6, 10, 4), SampleWorld(6, 10, 5));
}

TEST(SampleWorld, OvercrowdedGridIsUnplaceable) {
  // The box covers every cell; four more objects fit inside it, a fifth does not.
  WorldSampling s{2, 6, 1, {{Shape::kBox, Color::kRed, 2}}};
  EXPECT_ERROR_KIND(SampleWorld(s), ErrorKind::kUnplaceable);
}

TEST(SampleWorld, PlantedObjectsComeFirst) {
  WorldSampling s{6, 8, 3, {{Shape::kCircle, Color::kGreen, std::nullopt}}};
  const GridWorld w = SampleWorld(s);
  EXPECT_EQ(w.objects().size(), 8u);
  EXPECT_EQ(w.Find("o0")->shape, Shape::kCircle);
  EXPECT_EQ(w.Find("o0")->color, Color::kGreen);
}

TEST(SampleQuestion, ClauseCountsAndUniqueness) {
  for (int n = 0; n <= 3; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const GridWorld w = SampleWorld(6, 10, seed);
      QuestionConstraints c;
      c.clause_count = n;
      CommandAst q;
      try {
        q = SampleQuestion(w, c, seed);
      } catch (const Error& e) {
        ASSERT_EQ(e.kind(), ErrorKind::kUnsatisfiableAfterRetries);
        continue;
      }
      ASSERT_EQ(ClauseCount(q), n);
      ASSERT_EQ(DenoteBruteForce(q, w).size(), 1u);
      ASSERT_EQ(SampleQuestion(w, c, seed), q);
    }
  }
}

TEST(SampleQuestion, ForbiddenPairNeverMentioned) {
  QuestionConstraints c;
  c.forbidden = {ColorShapePattern{Color::kYellow, Shape::kSquare}};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    WorldSampling s{6, 10, seed, {{Shape::kSquare, Color::kYellow, std::nullopt}}};
    c.clause_count = static_cast<int>(seed % 3);
    try {
      const CommandAst q = SampleQuestion(SampleWorld(s), c, seed);
      ASSERT_FALSE(MentionsPair(q.target, Color::kYellow, Shape::kSquare)) << Render(q, Lexicon::Default());
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kUnsatisfiableAfterRetries);
    }
  }
}

TEST(SampleQuestion, ImpossibleConstraintsReportBudget) {
  QuestionConstraints c;
  c.clause_count = 1;
  c.max_tries = 7;
  const GridWorld lonely = PlaceObject(NewWorld(6, Agent{}), {"o0", Shape::kBox, Color::kRed, 1, {0, 0}});
  try {
    SampleQuestion(lonely, c, 1);
    FAIL() << "expected unsatisfiable-after-retries";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsatisfiableAfterRetries);
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
  }
}

TEST(Patterns, ContainsAndJson) {
  const Lexicon& en = Lexicon::Default();
  const CommandAst q = ParseText(
      "walk to the green circle that is in the same row as a small cylinder and in the "
      "same color as a box that is inside of a box",
      en);
  EXPECT_EQ(SpineComposition(q), (std::vector<int>{2, 1}));
  EXPECT_TRUE(Contains(q, ColorShapePattern{Color::kGreen, Shape::kCircle}));
  EXPECT_FALSE(Contains(q, ColorShapePattern{Color::kGreen, Shape::kBox}));
  EXPECT_TRUE(Contains(q, SizeShapePattern{SizeWord::kSmall, Shape::kCylinder}));
  EXPECT_TRUE(Contains(q, RelationTailPattern{Relation::kSameColor, Shape::kBox}));
  EXPECT_FALSE(Contains(q, RelationTailPattern{Relation::kSameRow, Shape::kBox}));
  EXPECT_TRUE(Contains(q, RelationPairPattern{Relation::kSameColor, Relation::kSameRow}));
  EXPECT_FALSE(Contains(q, RelationPairPattern{Relation::kSameRow, Relation::kInsideOf}));
  EXPECT_TRUE(Contains(q, ConjunctionPattern{2}));
  EXPECT_FALSE(Contains(q, ConjunctionPattern{3}));
  EXPECT_TRUE(Contains(q, NestingPattern{2}));
  EXPECT_TRUE(Contains(q, ClauseCountPattern{3}));
  const std::vector<Pattern> all = {
      ColorShapePattern{Color::kRed, Shape::kBox}, SizeShapePattern{SizeWord::kBig, Shape::kSquare},
      RelationTailPattern{Relation::kInsideOf, Shape::kBox},
      RelationPairPattern{Relation::kSameSize, Relation::kInsideOf}, ConjunctionPattern{3},
      NestingPattern{2}, ClauseCountPattern{1}};
  for (const Pattern& p : all) EXPECT_EQ(PatternFromJson(PatternToJson(p)), p);
  EXPECT_ERROR_KIND(PatternFromJson({{"kind", "vibes"}}), ErrorKind::kMalformedDocument);
}

TEST(Specs, PresetsAreValidAndRoundTrip) {
  EXPECT_EQ(PresetNames().size(), 16u);
  for (const std::string& name : PresetNames()) {
    const SplitSpec spec = Preset(name, 3);
    EXPECT_NO_THROW(ValidateSpec(spec)) << name;
    EXPECT_EQ(spec.episodes_per_split, 500);
    EXPECT_EQ(spec.train_episodes, 5000);
    const SplitSpec back = SpecFromJson(SpecToJson(spec));
    EXPECT_EQ(SpecToJson(back), SpecToJson(spec));
  }
  EXPECT_ERROR_KIND(Preset("Z9"), ErrorKind::kInvalidArgument);
}

TEST(Specs, UnsatisfiableSpecs) {
  SplitSpec nothing_held = Preset("A1");
  nothing_held.train_forbidden.clear();
  EXPECT_ERROR_KIND(ValidateSpec(nothing_held), ErrorKind::kUnsatisfiableSpec);
  SplitSpec zero = Preset("A1");
  zero.episodes_per_split = 0;
  EXPECT_ERROR_KIND(ValidateSpec(zero), ErrorKind::kUnsatisfiableSpec);
  SplitSpec too_short = Preset("C1");
  too_short.test_clauses = {0, 2};
  EXPECT_ERROR_KIND(ValidateSpec(too_short), ErrorKind::kUnsatisfiableSpec);
  SplitSpec all_banned = Preset("P2");
  all_banned.train_clauses = {2, 2};
  EXPECT_ERROR_KIND(ValidateSpec(all_banned), ErrorKind::kUnsatisfiableSpec);
  EXPECT_ERROR_KIND(GenerateSplit(zero), ErrorKind::kUnsatisfiableSpec);
}

TEST(GenerateSplit, AttributeHoldout) {
  const SplitSpec spec = SmallPreset("A1");
  const SplitData data = GenerateSplit(spec);
  ASSERT_EQ(data.test.size(), 60u);
  ASSERT_EQ(data.train.size(), 120u);
  for (const Episode& e : data.train) {
    ASSERT_FALSE(MentionsPair(e.ast.target, Color::kGreen, Shape::kCircle)) << e.question;
  }
  for (const Episode& e : data.test) {
    ASSERT_TRUE(MentionsPair(e.ast.target, Color::kGreen, Shape::kCircle)) << e.question;
    ASSERT_NO_THROW(CheckEpisode(e));
  }
}

TEST(GenerateSplit, ConjunctionLengthHoldout) {
  const SplitData data = GenerateSplit(SmallPreset("C1"));
  for (const Episode& e : data.train) ASSERT_LE(LongestGroup(e.ast.target), 2);
  for (const Episode& e : data.test) ASSERT_EQ(LongestGroup(e.ast.target), 3);
}

TEST(GenerateSplit, NestingHoldout) {
  const SplitData data = GenerateSplit(SmallPreset("C2"));
  for (const Episode& e : data.train) ASSERT_LE(Depth(e.ast.target), 1);
  for (const Episode& e : data.test) ASSERT_GE(Depth(e.ast.target), 2);
}

TEST(GenerateSplit, EpisodesSatisfyInvariants) {
  for (const std::string& name : PresetNames()) {
    const SplitData data = GenerateSplit(SmallPreset(name, 9));
    for (const auto* part : {&data.train, &data.test}) {
      for (const Episode& e : *part) {
        ASSERT_NO_THROW(CheckEpisode(e)) << e.episode_id;
        ASSERT_EQ(ParseText(e.question, Lexicon::Default()), e.ast);
      }
    }
    EXPECT_EQ(data.test.front().episode_id, name + "-test-00000");
  }
}

TEST(GenerateSplit, WorkerCountDoesNotMatter) {
  const SplitSpec spec = SmallPreset("B2", 4);
  const SplitData one = GenerateSplit(spec, Lexicon::Default(), 1);
  const SplitData four = GenerateSplit(spec, Lexicon::Default(), 4);
  EXPECT_EQ(EpisodesToJsonl(one.train), EpisodesToJsonl(four.train));
  EXPECT_EQ(EpisodesToJsonl(one.test), EpisodesToJsonl(four.test));
}

TEST(HoldoutCheck, CleanAndContaminated) {
  const SplitSpec spec = SmallPreset("S5");
  const SplitData data = GenerateSplit(spec);
  const HoldoutReport clean = HoldoutCheck(data.train, data.test, spec);
  EXPECT_TRUE(clean.violations.empty());
  int covered = 0;
  for (const auto& [pattern, count] : clean.coverage) covered += count;
  EXPECT_EQ(covered, static_cast<int>(data.test.size()));

  std::vector<Episode> dirty = data.train;
  dirty.push_back(data.test[3]);
  const HoldoutReport bad = HoldoutCheck(dirty, data.test, spec);
  ASSERT_GE(bad.violations.size(), 1u);
  EXPECT_EQ(bad.violations[0].episode_id, data.test[3].episode_id);
}

TEST(Dataset, WriteReadAndDigest) {
  const SplitSpec spec = SmallPreset("P2", 5);
  const SplitData data = GenerateSplit(spec);
  const std::string dir = testing::TempDir("bench");
  const DatasetFiles files = WriteDataset(dir, spec, data, Lexicon::Default());
  const auto test = ReadEpisodesFile(files.test_path);
  ASSERT_EQ(test.size(), data.test.size());
  EXPECT_EQ(EpisodesToJsonl(test), EpisodesToJsonl(data.test));
  const auto manifest = nlohmann::json::parse(ReadFile(files.manifest_path));
  EXPECT_EQ(manifest["digest"], files.digest);
  EXPECT_EQ(manifest["counts"]["test"], 60);
  EXPECT_EQ(files.digest.rfind("sha256:", 0), 0u);
  EXPECT_ERROR_KIND(ReadEpisodesFile(dir + "/missing.jsonl"), ErrorKind::kIo);
  std::filesystem::remove_all(dir);
}

TEST(Dataset, RemappedLexiconTravelsWithManifest) {
  SplitSpec spec = SmallPreset("A2", 6);
  const Lexicon symbols = RemapLexicon(Lexicon::Default(), 6);
  const SplitData data = GenerateSplit(spec, symbols);
  const std::string dir = testing::TempDir("remap");
  const DatasetFiles files = WriteDataset(dir, spec, data, symbols);
  const auto manifest = nlohmann::json::parse(ReadFile(files.manifest_path));
  const Lexicon back = LexiconFromJson(manifest["lexicon"]);
  EXPECT_EQ(back, symbols);
  EXPECT_EQ(ReadEpisodesFile(files.test_path, back).size(), data.test.size());
  EXPECT_ERROR_KIND(ReadEpisodesFile(files.test_path), ErrorKind::kUnknownToken);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace gridcomp
