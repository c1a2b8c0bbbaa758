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

// Benchmark generation: random worlds, questions with a unique answer, and
// train/test splits that hold out attribute combinations or sentence
// structures.
//
// A question's structure is always a spine: the target has a group of g1
// conjoined clauses, the last tail of that group has g2 clauses, and so on.
// The composition (g1, g2, ...) fixes the clause count (sum), the longest
// conjunction (max) and the nesting depth (number of parts).

#ifndef GRIDCOMP_BENCHGEN_H_
#define GRIDCOMP_BENCHGEN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridcomp/language.h"
#include "gridcomp/navigation.h"
#include "gridcomp/world.h"
#include "json.hpp"

namespace gridcomp {

// --- combination patterns --------------------------------------------------

// Some referent mentions both the color and the shape noun.
struct ColorShapePattern {
  Color color;
  Shape shape;
  friend bool operator==(const ColorShapePattern&, const ColorShapePattern&) = default;
};
// Some referent mentions both the size word and the shape noun.
struct SizeShapePattern {
  SizeWord size_word;
  Shape shape;
  friend bool operator==(const SizeShapePattern&, const SizeShapePattern&) = default;
};
// Some clause uses the relation with a tail naming the shape.
struct RelationTailPattern {
  Relation relation;
  Shape tail_shape;
  friend bool operator==(const RelationTailPattern&, const RelationTailPattern&) = default;
};
// One clause group contains both relations.
struct RelationPairPattern {
  Relation first;
  Relation second;
  friend bool operator==(const RelationPairPattern&, const RelationPairPattern&) = default;
};
// Some clause group has at least this many conjoined clauses.
struct ConjunctionPattern {
  int at_least;
  friend bool operator==(const ConjunctionPattern&, const ConjunctionPattern&) = default;
};
// The clause spine is at least this deep (2 = a tail with its own clause).
struct NestingPattern {
  int at_least;
  friend bool operator==(const NestingPattern&, const NestingPattern&) = default;
};
// Exactly this many clauses in total.
struct ClauseCountPattern {
  int exactly;
  friend bool operator==(const ClauseCountPattern&, const ClauseCountPattern&) = default;
};

using Pattern = std::variant<ColorShapePattern, SizeShapePattern,
                             RelationTailPattern, RelationPairPattern,
                             ConjunctionPattern, NestingPattern,
                             ClauseCountPattern>;

bool Contains(const CommandAst& command, const Pattern& pattern);
std::string PatternToString(const Pattern& pattern);
nlohmann::json PatternToJson(const Pattern& pattern);
Pattern PatternFromJson(const nlohmann::json& doc);  // kMalformedDocument

// Clause group sizes along the spine; empty for a clause-free question.
std::vector<int> SpineComposition(const CommandAst& command);

// --- split specifications ----------------------------------------------------

struct ClauseRange {
  int min = 0;
  int max = 0;
  friend bool operator==(const ClauseRange&, const ClauseRange&) = default;
};

struct SplitSpec {
  std::string name;
  std::vector<Pattern> train_forbidden;
  // A test question must contain at least one of these.
  std::vector<Pattern> test_required;
  ClauseRange train_clauses{0, 2};
  ClauseRange test_clauses{0, 2};
  int episodes_per_split = 500;  // test episodes
  int train_episodes = 5000;
  std::uint64_t seed = 0;
  int grid_size = kDefaultGridSize;
  int min_objects = 6;
  int max_objects = 12;
};

inline constexpr int kMaxClauses = 6;
inline constexpr int kRetryBudget = 1000;

// Throws kUnsatisfiableSpec when counts, ranges or patterns cannot work,
// including a spec that holds nothing out.
void ValidateSpec(const SplitSpec& spec);

nlohmann::json SpecToJson(const SplitSpec& spec);
SplitSpec SpecFromJson(const nlohmann::json& doc);

// A1-A3, B1-B2, C1-C2, P1-P3, S1-S6.
const std::vector<std::string>& PresetNames();
// Throws kInvalidArgument for unknown names.
SplitSpec Preset(std::string_view name, std::uint64_t seed = 0);

// --- sampling ----------------------------------------------------------------

struct ObjectTemplate {
  Shape shape;
  Color color;
  std::optional<int> size;
};

struct WorldSampling {
  int d = kDefaultGridSize;
  int n_objects = 8;
  std::uint64_t seed = 0;
  // Placed first, as o0, o1, ...; count toward n_objects.
  std::vector<ObjectTemplate> planted;
};

// Errors: kUnplaceable once an object cannot be placed after bounded retries.
GridWorld SampleWorld(const WorldSampling& sampling);
inline GridWorld SampleWorld(int d, int n_objects, std::uint64_t seed) {
  return SampleWorld(WorldSampling{d, n_objects, seed, {}});
}

struct QuestionConstraints {
  int clause_count = 0;
  std::vector<Pattern> forbidden;
  // When non-empty, the question must contain at least one of these.
  std::vector<Pattern> required;
  int max_tries = kRetryBudget;
};

// A command whose brute-force denotation in `world` is a single object.
// Errors: kUnsatisfiableAfterRetries (message reports the budget).
CommandAst SampleQuestion(const GridWorld& world,
                          const QuestionConstraints& constraints,
                          std::uint64_t seed);

// --- episodes and splits -----------------------------------------------------

struct Episode {
  std::string episode_id;
  std::string split;
  std::string partition;  // "train" or "test"
  std::uint64_t seed = 0;
  GridWorld world = NewWorld(2, Agent{});
  std::string question;
  CommandAst ast;
  std::string target_id;
  std::vector<Action> gold_actions;
};

// Checks unique denotation and replanned actions. Throws kInvariantViolation.
void CheckEpisode(const Episode& episode);

struct SplitData {
  std::vector<Episode> train;
  std::vector<Episode> test;
};

// Deterministic in spec (including seed) regardless of `jobs`.
// Errors: kUnsatisfiableSpec, kUnsatisfiableAfterRetries.
SplitData GenerateSplit(const SplitSpec& spec,
                        const Lexicon& lexicon = Lexicon::Default(),
                        int jobs = 1);

struct HoldoutViolation {
  std::string episode_id;
  std::string partition;
  std::string reason;
};

struct HoldoutReport {
  std::vector<HoldoutViolation> violations;
  // Test episodes keyed by their first matching required pattern, or "none".
  std::map<std::string, int> coverage;
};

HoldoutReport HoldoutCheck(const std::vector<Episode>& train,
                           const std::vector<Episode>& test,
                           const SplitSpec& spec);

// One JSON object per line: {episode_id, split, partition, seed, world,
// question, target_id, actions}.
nlohmann::json EpisodeToJson(const Episode& episode);
Episode EpisodeFromJson(const nlohmann::json& doc,
                        const Lexicon& lexicon = Lexicon::Default());
std::string EpisodesToJsonl(const std::vector<Episode>& episodes);
std::vector<Episode> ReadEpisodesFile(const std::string& path,
                                      const Lexicon& lexicon = Lexicon::Default());

struct DatasetFiles {
  std::string train_path;
  std::string test_path;
  std::string manifest_path;
  std::string digest;
};

// Writes <dir>/<name>.train.jsonl, <name>.test.jsonl and
// <name>.manifest.json (spec, seed, counts, lexicon seed, sha256 digest of the
// two episode files).
DatasetFiles WriteDataset(const std::string& dir, const SplitSpec& spec,
                          const SplitData& data, const Lexicon& lexicon);

}  // namespace gridcomp

#endif  // GRIDCOMP_BENCHGEN_H_
