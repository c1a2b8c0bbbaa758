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

#include "gridcomp/benchgen.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <functional>
#include <filesystem>
#include <sstream>
#include <thread>

#include "gridcomp/digest.h"
#include "gridcomp/file_io.h"
#include "gridcomp/random.h"
#include "gridcomp/resolver.h"
#include "gridcomp/toolset.h"
#include "gridcomp/world_json.h"

namespace gridcomp {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void BadSpec(const std::string& what) {
  throw Error(ErrorKind::kUnsatisfiableSpec, "unsatisfiable split spec: " + what);
}

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorKind::kMalformedDocument, what);
}

// --- pattern scanning ---------------------------------------------------------

template <typename Fn>
void ForEachReferent(const ReferentAst& referent, Fn&& fn) {
  fn(referent);
  for (const RelClause& c : referent.clauses) ForEachReferent(c.tail, fn);
}

bool ScanReferents(const CommandAst& command,
                   const std::function<bool(const ReferentAst&)>& pred) {
  bool found = false;
  ForEachReferent(command.target, [&](const ReferentAst& r) {
    if (pred(r)) found = true;
  });
  return found;
}

bool IsStructural(const Pattern& p) {
  return std::holds_alternative<ConjunctionPattern>(p) ||
         std::holds_alternative<NestingPattern>(p) ||
         std::holds_alternative<ClauseCountPattern>(p);
}

bool CompositionMatches(const std::vector<int>& parts, const Pattern& p) {
  return std::visit(
      Overloaded{
          [&](const ConjunctionPattern& c) {
            return !parts.empty() &&
                   *std::max_element(parts.begin(), parts.end()) >= c.at_least;
          },
          [&](const NestingPattern& n) {
            return static_cast<int>(parts.size()) >= n.at_least;
          },
          [&](const ClauseCountPattern& c) {
            int sum = 0;
            for (int g : parts) sum += g;
            return sum == c.exactly;
          },
          [](const auto&) { return false; }},
      p);
}

std::vector<std::vector<int>> Compositions(int n) {
  if (n == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int first = 1; first <= n; ++first) {
    for (std::vector<int>& rest : Compositions(n - first)) {
      rest.insert(rest.begin(), first);
      out.push_back(std::move(rest));
    }
  }
  return out;
}

// --- question construction ----------------------------------------------------

// Constraint the generator steers toward for one question.
struct Focus {
  const Pattern* pattern = nullptr;
  int node = -1;    // referent index (build order) for attribute patterns
  int clause = -1;  // clause index (build order) for relation-tail patterns
  int level = -1;   // spine level for relation pairs
};

class QuestionBuilder {
 public:
  QuestionBuilder(const GridWorld& world, const std::vector<Pattern>& forbidden,
                  Rng& rng)
      : world_(world), forbidden_(forbidden), rng_(rng) {}

  // Builds a candidate command describing `target`; nullopt when the focus
  // cannot be honored in this world.
  std::optional<CommandAst> Build(const Obj& target, const std::vector<int>& parts,
                                  const Focus& focus) {
    parts_ = parts;
    focus_ = focus;
    next_node_ = 0;
    next_clause_ = 0;
    failed_ = false;
    CommandAst command;
    command.target = Describe(target, 0, /*top=*/true);
    if (failed_) return std::nullopt;
    return command;
  }

  bool ForbidsColor(Color c, Shape s) const {
    return std::any_of(forbidden_.begin(), forbidden_.end(), [&](const Pattern& p) {
      const auto* cs = std::get_if<ColorShapePattern>(&p);
      return cs != nullptr && cs->color == c && cs->shape == s;
    });
  }

  bool ForbidsSize(SizeWord w, Shape s) const {
    return std::any_of(forbidden_.begin(), forbidden_.end(), [&](const Pattern& p) {
      const auto* ss = std::get_if<SizeShapePattern>(&p);
      return ss != nullptr && ss->size_word == w && ss->shape == s;
    });
  }

  bool ForbidsPair(Relation a, Relation b) const {
    return std::any_of(forbidden_.begin(), forbidden_.end(), [&](const Pattern& p) {
      const auto* rp = std::get_if<RelationPairPattern>(&p);
      return rp != nullptr && ((rp->first == a && rp->second == b) ||
                               (rp->first == b && rp->second == a));
    });
  }

  // Whether `obj` may stand at the given node under the focus.
  bool NodeAccepts(int node, const Obj& obj) const {
    if (focus_.node != node || focus_.pattern == nullptr) return true;
    if (const auto* cs = std::get_if<ColorShapePattern>(focus_.pattern)) {
      return obj.color == cs->color && obj.shape == cs->shape;
    }
    if (const auto* ss = std::get_if<SizeShapePattern>(focus_.pattern)) {
      return obj.shape == ss->shape;
    }
    return true;
  }

 private:
  ReferentAst Describe(const Obj& obj, int level, bool top) {
    const int node = next_node_++;
    ReferentAst r;
    r.determiner = top ? Determiner::kThe : Determiner::kA;
    const bool focused = focus_.pattern != nullptr && focus_.node == node;

    bool explicit_noun = rng_.Chance(4, 5);
    bool mention_color = rng_.Chance(3, 5);
    std::optional<SizeWord> size_word;
    if (rng_.Chance(1, 4)) {
      size_word = rng_.Chance(1, 2) ? SizeWord::kSmall : SizeWord::kBig;
    }
    if (focused) {
      explicit_noun = true;
      if (const auto* cs = std::get_if<ColorShapePattern>(focus_.pattern)) {
        (void)cs;
        mention_color = true;
      }
      if (const auto* ss = std::get_if<SizeShapePattern>(focus_.pattern)) {
        size_word = ss->size_word;
      }
    }
    if (explicit_noun) r.noun = obj.shape;
    if (mention_color && !(explicit_noun && ForbidsColor(obj.color, obj.shape))) {
      r.color = obj.color;
    }
    if (size_word && !(explicit_noun && !focused && ForbidsSize(*size_word, obj.shape))) {
      r.size_word = size_word;
    }

    if (level < static_cast<int>(parts_.size())) {
      const int group = parts_[level];
      // Relations forced by a relation-pair focus on this level.
      std::vector<std::optional<Relation>> forced(group);
      if (focus_.pattern != nullptr && focus_.level == level) {
        if (const auto* rp = std::get_if<RelationPairPattern>(focus_.pattern)) {
          const bool swap = rng_.Chance(1, 2);
          forced[0] = swap ? rp->second : rp->first;
          forced[1] = swap ? rp->first : rp->second;
        }
      }
      std::vector<Relation> used;
      for (int j = 0; j < group && !failed_; ++j) {
        const bool last = j + 1 == group;
        const int clause_index = next_clause_++;
        const int tail_node = next_node_;
        const RelationTailPattern* tail_focus =
            focus_.pattern != nullptr && focus_.clause == clause_index
                ? std::get_if<RelationTailPattern>(focus_.pattern)
                : nullptr;

        std::vector<Relation> options;
        if (tail_focus != nullptr) {
          options = {tail_focus->relation};
        } else if (forced[j]) {
          options = {*forced[j]};
        } else {
          for (Relation rel : kAllRelations) {
            const bool clash = std::any_of(used.begin(), used.end(), [&](Relation u) {
              return ForbidsPair(u, rel);
            });
            if (!clash) options.push_back(rel);
          }
        }
        // Relation/witness pairs available for this clause.
        std::vector<std::pair<Relation, const Obj*>> choices;
        for (Relation rel : options) {
          for (const Obj& y : world_.objects()) {
            if (y.id == obj.id || !RelationHolds(rel, obj, y)) continue;
            if (tail_focus != nullptr && y.shape != tail_focus->tail_shape) continue;
            if (!NodeAccepts(tail_node, y)) continue;
            choices.emplace_back(rel, &y);
          }
        }
        if (choices.empty()) {
          failed_ = true;
          break;
        }
        // Pick the relation first so that relations with many witnesses do
        // not dominate.
        std::vector<Relation> available;
        for (const auto& [rel, y] : choices) {
          if (std::find(available.begin(), available.end(), rel) == available.end()) {
            available.push_back(rel);
          }
        }
        const Relation rel = available[rng_.Uniform(static_cast<int>(available.size()))];
        std::vector<const Obj*> witnesses;
        for (const auto& [r2, y] : choices) {
          if (r2 == rel) witnesses.push_back(y);
        }
        const Obj& tail_obj = *witnesses[rng_.Uniform(static_cast<int>(witnesses.size()))];
        used.push_back(rel);

        RelClause clause;
        clause.relation = rel;
        const int tail_level =
            last ? level + 1 : static_cast<int>(parts_.size());
        clause.tail = Describe(tail_obj, tail_level, /*top=*/false);
        if (tail_focus != nullptr) clause.tail.noun = tail_obj.shape;
        if (rel == Relation::kInsideOf && clause.tail.noun &&
            *clause.tail.noun != Shape::kBox) {
          clause.tail.noun.reset();
        }
        r.clauses.push_back(std::move(clause));
      }
    }
    return r;
  }

  const GridWorld& world_;
  const std::vector<Pattern>& forbidden_;
  Rng& rng_;
  std::vector<int> parts_;
  Focus focus_;
  int next_node_ = 0;
  int next_clause_ = 0;
  bool failed_ = false;
};

// Adds a color, then a size word, to the target referent while that keeps
// the target and shrinks its denotation.
bool RefineToUnique(CommandAst& command, const Obj& target,
                    const QuestionBuilder& builder, const GridWorld& world) {
  for (int round = 0; round < 3; ++round) {
    ObjectSet denotation = DenoteBruteForce(command, world);
    if (!denotation.Contains(target.id)) return false;
    if (denotation.size() == 1) return true;
    ReferentAst& top = command.target;
    if (!top.color &&
        !(top.noun && builder.ForbidsColor(target.color, *top.noun))) {
      top.color = target.color;
      continue;
    }
    if (top.size_word) return false;
    // Candidates before the size word is applied.
    int lo = target.size;
    int hi = target.size;
    for (const std::string& id : denotation.ids()) {
      lo = std::min(lo, world.Find(id)->size);
      hi = std::max(hi, world.Find(id)->size);
    }
    SizeWord word;
    if (target.size == lo) {
      word = SizeWord::kSmall;
    } else if (target.size == hi) {
      word = SizeWord::kBig;
    } else {
      return false;
    }
    if (top.noun && builder.ForbidsSize(word, *top.noun)) return false;
    top.size_word = word;
  }
  ObjectSet denotation = DenoteBruteForce(command, world);
  return denotation.size() == 1 && denotation.Contains(target.id);
}

bool AnyContained(const CommandAst& command, const std::vector<Pattern>& patterns) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const Pattern& p) { return Contains(command, p); });
}

std::vector<ObjectTemplate> PlantsFor(const std::vector<Pattern>& patterns, Rng& rng) {
  std::vector<ObjectTemplate> planted;
  auto random_color = [&] { return kAllColors[rng.Uniform(4)]; };
  for (const Pattern& p : patterns) {
    std::visit(
        Overloaded{
            [&](const ColorShapePattern& cs) {
              planted.push_back({cs.shape, cs.color, std::nullopt});
            },
            [&](const SizeShapePattern& ss) {
              planted.push_back({ss.shape, random_color(), std::nullopt});
            },
            [&](const RelationTailPattern& rt) {
              planted.push_back({rt.tail_shape, random_color(), std::nullopt});
            },
            [&](const RelationPairPattern& rp) {
              if (rp.first == Relation::kInsideOf || rp.second == Relation::kInsideOf) {
                planted.push_back({Shape::kBox, random_color(), std::nullopt});
              }
            },
            [](const auto&) {}},
        p);
  }
  return planted;
}

Episode MakeEpisode(const SplitSpec& spec, const std::string& partition,
                    int index, const Lexicon& lexicon) {
  const bool test = partition == "test";
  const std::uint64_t seed =
      DeriveSeed(spec.seed, (static_cast<std::uint64_t>(test ? 1 : 0) << 32) |
                                static_cast<std::uint64_t>(index));
  Rng rng(seed);
  const ClauseRange range = test ? spec.test_clauses : spec.train_clauses;
  QuestionConstraints constraints;
  if (test) {
    constraints.required = spec.test_required;
  } else {
    constraints.forbidden = spec.train_forbidden;
  }
  constexpr int kTriesPerWorld = 20;
  constraints.max_tries = kTriesPerWorld;

  for (int world_try = 0; world_try * kTriesPerWorld < kRetryBudget; ++world_try) {
    WorldSampling sampling;
    sampling.d = spec.grid_size;
    sampling.n_objects = rng.Between(spec.min_objects, spec.max_objects);
    sampling.seed = rng.Next();
    if (test) sampling.planted = PlantsFor(spec.test_required, rng);
    if (sampling.planted.size() > static_cast<std::size_t>(sampling.n_objects)) {
      sampling.planted.resize(sampling.n_objects);
    }
    constraints.clause_count = rng.Between(range.min, range.max);
    const std::uint64_t question_seed = rng.Next();
    try {
      GridWorld world = SampleWorld(sampling);
      CommandAst ast = SampleQuestion(world, constraints, question_seed);
      Episode e;
      char index_text[16];
      std::snprintf(index_text, sizeof(index_text), "%05d", index);
      e.episode_id = spec.name + "-" + partition + "-" + index_text;
      e.split = spec.name;
      e.partition = partition;
      e.seed = seed;
      e.question = Render(ast, lexicon);
      e.target_id = UniqueTarget(DenoteBruteForce(ast, world));
      e.gold_actions = PlanActions(world, e.target_id);
      e.world = std::move(world);
      e.ast = std::move(ast);
      return e;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::kUnplaceable &&
          err.kind() != ErrorKind::kUnsatisfiableAfterRetries) {
        throw;
      }
    }
  }
  throw Error(ErrorKind::kUnsatisfiableAfterRetries,
              spec.name + " " + partition + " episode " + std::to_string(index) +
                  ": no valid question within " + std::to_string(kRetryBudget) +
                  " tries");
}

std::vector<Episode> GeneratePartition(const SplitSpec& spec,
                                       const std::string& partition, int count,
                                       const Lexicon& lexicon, int jobs) {
  std::vector<std::optional<Episode>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  auto work = [&](int worker) {
    for (int i = worker; i < count; i += jobs) {
      try {
        slots[i] = MakeEpisode(spec, partition, i, lexicon);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    jobs = 1;
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < jobs; ++w) threads.emplace_back(work, w);
  }
  std::vector<Episode> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

json ClauseRangeToJson(const ClauseRange& r) { return json::array({r.min, r.max}); }

ClauseRange ClauseRangeFromJson(const json& doc, const char* name) {
  if (!doc.is_array() || doc.size() != 2 || !doc[0].is_number_integer() ||
      !doc[1].is_number_integer()) {
    Malformed(std::string("split spec: '") + name + "' must be [min, max]");
  }
  return {doc[0].get<int>(), doc[1].get<int>()};
}

}  // namespace

// -----------------------------------------------------------------------------

std::vector<int> SpineComposition(const CommandAst& command) {
  std::vector<int> parts;
  const ReferentAst* r = &command.target;
  while (!r->clauses.empty()) {
    parts.push_back(static_cast<int>(r->clauses.size()));
    r = &r->clauses.back().tail;
  }
  return parts;
}

bool Contains(const CommandAst& command, const Pattern& pattern) {
  if (IsStructural(pattern)) {
    // ClauseCount compares the sum, which is the clause count of any AST.
    return CompositionMatches(SpineComposition(command), pattern);
  }
  return std::visit(
      Overloaded{
          [&](const ColorShapePattern& p) {
            return ScanReferents(command, [&](const ReferentAst& r) {
              return r.color == p.color && r.noun == p.shape;
            });
          },
          [&](const SizeShapePattern& p) {
            return ScanReferents(command, [&](const ReferentAst& r) {
              return r.size_word == p.size_word && r.noun == p.shape;
            });
          },
          [&](const RelationTailPattern& p) {
            return ScanReferents(command, [&](const ReferentAst& r) {
              return std::any_of(r.clauses.begin(), r.clauses.end(),
                                 [&](const RelClause& c) {
                                   return c.relation == p.relation &&
                                          c.tail.noun == p.tail_shape;
                                 });
            });
          },
          [&](const RelationPairPattern& p) {
            return ScanReferents(command, [&](const ReferentAst& r) {
              auto has = [&](Relation rel) {
                return std::any_of(r.clauses.begin(), r.clauses.end(),
                                   [&](const RelClause& c) { return c.relation == rel; });
              };
              if (p.first == p.second) {
                return std::count_if(r.clauses.begin(), r.clauses.end(),
                                     [&](const RelClause& c) {
                                       return c.relation == p.first;
                                     }) >= 2;
              }
              return has(p.first) && has(p.second);
            });
          },
          [](const auto&) { return false; }},
      pattern);
}

std::string PatternToString(const Pattern& pattern) {
  return std::visit(
      Overloaded{
          [](const ColorShapePattern& p) {
            return "color_shape(" + std::string(ColorName(p.color)) + "," +
                   std::string(ShapeName(p.shape)) + ")";
          },
          [](const SizeShapePattern& p) {
            return "size_shape(" + std::string(SizeWordName(p.size_word)) + "," +
                   std::string(ShapeName(p.shape)) + ")";
          },
          [](const RelationTailPattern& p) {
            return "relation_tail(" + std::string(RelationName(p.relation)) + "," +
                   std::string(ShapeName(p.tail_shape)) + ")";
          },
          [](const RelationPairPattern& p) {
            return "relation_pair(" + std::string(RelationName(p.first)) + "," +
                   std::string(RelationName(p.second)) + ")";
          },
          [](const ConjunctionPattern& p) {
            return "conjunction_length(>=" + std::to_string(p.at_least) + ")";
          },
          [](const NestingPattern& p) {
            return "nesting_depth(>=" + std::to_string(p.at_least) + ")";
          },
          [](const ClauseCountPattern& p) {
            return "clause_count(" + std::to_string(p.exactly) + ")";
          }},
      pattern);
}

json PatternToJson(const Pattern& pattern) {
  return std::visit(
      Overloaded{
          [](const ColorShapePattern& p) -> json {
            return {{"kind", "color_shape"},
                    {"color", ColorName(p.color)},
                    {"shape", ShapeName(p.shape)}};
          },
          [](const SizeShapePattern& p) -> json {
            return {{"kind", "size_shape"},
                    {"size_word", SizeWordName(p.size_word)},
                    {"shape", ShapeName(p.shape)}};
          },
          [](const RelationTailPattern& p) -> json {
            return {{"kind", "relation_tail"},
                    {"relation", RelationName(p.relation)},
                    {"shape", ShapeName(p.tail_shape)}};
          },
          [](const RelationPairPattern& p) -> json {
            return {{"kind", "relation_pair"},
                    {"relations",
                     json::array({RelationName(p.first), RelationName(p.second)})}};
          },
          [](const ConjunctionPattern& p) -> json {
            return {{"kind", "conjunction_length"}, {"at_least", p.at_least}};
          },
          [](const NestingPattern& p) -> json {
            return {{"kind", "nesting_depth"}, {"at_least", p.at_least}};
          },
          [](const ClauseCountPattern& p) -> json {
            return {{"kind", "clause_count"}, {"exactly", p.exactly}};
          }},
      pattern);
}

Pattern PatternFromJson(const json& doc) {
  auto str = [&](const char* key) -> std::string {
    if (!doc.contains(key) || !doc[key].is_string()) {
      Malformed(std::string("pattern: missing string '") + key + "'");
    }
    return doc[key].get<std::string>();
  };
  auto integer = [&](const char* key) -> int {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
      Malformed(std::string("pattern: missing integer '") + key + "'");
    }
    return doc[key].get<int>();
  };
  auto color = [&](const std::string& s) {
    auto c = ParseColor(s);
    if (!c) Malformed("pattern: unknown color '" + s + "'");
    return *c;
  };
  auto shape = [&](const std::string& s) {
    auto v = ParseShape(s);
    if (!v) Malformed("pattern: unknown shape '" + s + "'");
    return *v;
  };
  auto relation = [&](const std::string& s) {
    auto v = ParseRelation(s);
    if (!v) Malformed("pattern: unknown relation '" + s + "'");
    return *v;
  };
  if (!doc.is_object()) Malformed("pattern must be an object");
  const std::string kind = str("kind");
  if (kind == "color_shape") return ColorShapePattern{color(str("color")), shape(str("shape"))};
  if (kind == "size_shape") {
    auto w = ParseSizeWord(str("size_word"));
    if (!w) Malformed("pattern: unknown size word");
    return SizeShapePattern{*w, shape(str("shape"))};
  }
  if (kind == "relation_tail") {
    return RelationTailPattern{relation(str("relation")), shape(str("shape"))};
  }
  if (kind == "relation_pair") {
    if (!doc.contains("relations") || !doc["relations"].is_array() ||
        doc["relations"].size() != 2 || !doc["relations"][0].is_string() ||
        !doc["relations"][1].is_string()) {
      Malformed("pattern: relation_pair needs two relations");
    }
    return RelationPairPattern{relation(doc["relations"][0].get<std::string>()),
                               relation(doc["relations"][1].get<std::string>())};
  }
  if (kind == "conjunction_length") return ConjunctionPattern{integer("at_least")};
  if (kind == "nesting_depth") return NestingPattern{integer("at_least")};
  if (kind == "clause_count") return ClauseCountPattern{integer("exactly")};
  Malformed("pattern: unknown kind '" + kind + "'");
}

// --- specs ----------------------------------------------------------------------

void ValidateSpec(const SplitSpec& spec) {
  if (spec.name.empty()) BadSpec("name must not be empty");
  if (spec.episodes_per_split <= 0) BadSpec("episodes_per_split must be positive");
  if (spec.train_episodes < 0) BadSpec("train_episodes must not be negative");
  if (spec.grid_size < 2) BadSpec("grid_size must be at least 2");
  if (spec.min_objects < 1 || spec.max_objects < spec.min_objects) {
    BadSpec("object count range is empty");
  }
  for (const ClauseRange* r : {&spec.train_clauses, &spec.test_clauses}) {
    if (r->min < 0 || r->max < r->min || r->max > kMaxClauses) {
      BadSpec("clause range must satisfy 0 <= min <= max <= " +
              std::to_string(kMaxClauses));
    }
  }
  if (spec.test_required.empty()) BadSpec("test_required must not be empty");
  const bool holds_out = std::any_of(
      spec.test_required.begin(), spec.test_required.end(), [&](const Pattern& p) {
        return std::find(spec.train_forbidden.begin(), spec.train_forbidden.end(),
                         p) != spec.train_forbidden.end();
      });
  if (!holds_out) BadSpec("no test_required pattern is forbidden in train");

  // Some test clause count must admit at least one required pattern, and
  // some train clause count must avoid every forbidden structure.
  auto realizable = [&](const Pattern& p) {
    for (int n = spec.test_clauses.min; n <= spec.test_clauses.max; ++n) {
      for (const auto& parts : Compositions(n)) {
        if (IsStructural(p) ? CompositionMatches(parts, p)
            : std::holds_alternative<RelationPairPattern>(p)
                ? std::any_of(parts.begin(), parts.end(), [](int g) { return g >= 2; })
            : std::holds_alternative<RelationTailPattern>(p) ? n >= 1
                                                              : true) {
          return true;
        }
      }
    }
    return false;
  };
  if (!std::any_of(spec.test_required.begin(), spec.test_required.end(), realizable)) {
    BadSpec("no required pattern fits the test clause range");
  }
  bool train_ok = spec.train_episodes == 0;
  for (int n = spec.train_clauses.min; n <= spec.train_clauses.max && !train_ok; ++n) {
    for (const auto& parts : Compositions(n)) {
      if (std::none_of(spec.train_forbidden.begin(), spec.train_forbidden.end(),
                       [&](const Pattern& p) {
                         return IsStructural(p) && CompositionMatches(parts, p);
                       })) {
        train_ok = true;
      }
    }
  }
  if (!train_ok) BadSpec("every train structure is forbidden");
}

json SpecToJson(const SplitSpec& spec) {
  json forbidden = json::array();
  for (const Pattern& p : spec.train_forbidden) forbidden.push_back(PatternToJson(p));
  json required = json::array();
  for (const Pattern& p : spec.test_required) required.push_back(PatternToJson(p));
  return {{"name", spec.name},
          {"train_forbidden", std::move(forbidden)},
          {"test_required", std::move(required)},
          {"train_clauses", ClauseRangeToJson(spec.train_clauses)},
          {"test_clauses", ClauseRangeToJson(spec.test_clauses)},
          {"episodes_per_split", spec.episodes_per_split},
          {"train_episodes", spec.train_episodes},
          {"seed", spec.seed},
          {"grid_size", spec.grid_size},
          {"min_objects", spec.min_objects},
          {"max_objects", spec.max_objects}};
}

SplitSpec SpecFromJson(const json& doc) {
  if (!doc.is_object()) Malformed("split spec must be an object");
  SplitSpec spec;
  if (!doc.contains("name") || !doc["name"].is_string()) {
    Malformed("split spec: missing string 'name'");
  }
  spec.name = doc["name"].get<std::string>();
  auto patterns = [&](const char* key) {
    std::vector<Pattern> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_array()) Malformed(std::string("split spec: '") + key + "' must be an array");
    for (const json& p : doc[key]) out.push_back(PatternFromJson(p));
    return out;
  };
  auto integer = [&](const char* key, auto fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number_integer()) {
      Malformed(std::string("split spec: '") + key + "' must be an integer");
    }
    return doc[key].get<decltype(fallback)>();
  };
  spec.train_forbidden = patterns("train_forbidden");
  spec.test_required = patterns("test_required");
  if (doc.contains("train_clauses")) {
    spec.train_clauses = ClauseRangeFromJson(doc["train_clauses"], "train_clauses");
  }
  if (doc.contains("test_clauses")) {
    spec.test_clauses = ClauseRangeFromJson(doc["test_clauses"], "test_clauses");
  }
  spec.episodes_per_split = integer("episodes_per_split", spec.episodes_per_split);
  spec.train_episodes = integer("train_episodes", 10 * spec.episodes_per_split);
  spec.seed = integer("seed", spec.seed);
  spec.grid_size = integer("grid_size", spec.grid_size);
  spec.min_objects = integer("min_objects", spec.min_objects);
  spec.max_objects = integer("max_objects", spec.max_objects);
  return spec;
}

const std::vector<std::string>& PresetNames() {
  static const auto* names = new std::vector<std::string>{
      "A1", "A2", "A3", "B1", "B2", "C1", "C2", "P1", "P2",
      "P3", "S1", "S2", "S3", "S4", "S5", "S6"};
  return *names;
}

SplitSpec Preset(std::string_view name, std::uint64_t seed) {
  SplitSpec spec;
  spec.name = std::string(name);
  spec.seed = seed;
  auto holdout = [&](Pattern p) {
    spec.train_forbidden = {p};
    spec.test_required = {p};
  };
  auto clauses = [&](ClauseRange train, ClauseRange test) {
    spec.train_clauses = train;
    spec.test_clauses = test;
  };
  if (name == "A1") {
    holdout(ColorShapePattern{Color::kGreen, Shape::kCircle});
    clauses({0, 2}, {0, 2});
  } else if (name == "A2") {
    holdout(ColorShapePattern{Color::kYellow, Shape::kSquare});
    clauses({0, 2}, {0, 2});
  } else if (name == "A3") {
    holdout(SizeShapePattern{SizeWord::kSmall, Shape::kCylinder});
    clauses({0, 2}, {0, 2});
  } else if (name == "B1") {
    holdout(RelationPairPattern{Relation::kSameRow, Relation::kSameColor});
    clauses({0, 3}, {2, 3});
  } else if (name == "B2") {
    holdout(RelationPairPattern{Relation::kSameSize, Relation::kInsideOf});
    clauses({0, 3}, {2, 3});
  } else if (name == "C1") {
    holdout(ConjunctionPattern{3});
    clauses({0, 3}, {3, 3});
  } else if (name == "C2") {
    holdout(NestingPattern{2});
    clauses({0, 3}, {2, 3});
  } else if (name == "P1" || name == "P2" || name == "P3") {
    const int n = name[1] - '0';
    holdout(ClauseCountPattern{n});
    clauses({0, n - 1}, {n, n});
  } else if (name == "S1") {
    holdout(ColorShapePattern{Color::kRed, Shape::kCircle});
    clauses({0, 1}, {0, 1});
  } else if (name == "S2") {
    holdout(ColorShapePattern{Color::kBlue, Shape::kCylinder});
    clauses({0, 1}, {0, 1});
  } else if (name == "S3") {
    holdout(SizeShapePattern{SizeWord::kBig, Shape::kSquare});
    clauses({0, 1}, {0, 1});
  } else if (name == "S4") {
    holdout(SizeShapePattern{SizeWord::kSmall, Shape::kCircle});
    clauses({0, 1}, {0, 1});
  } else if (name == "S5") {
    holdout(RelationTailPattern{Relation::kSameRow, Shape::kCylinder});
    clauses({0, 1}, {1, 1});
  } else if (name == "S6") {
    holdout(RelationTailPattern{Relation::kSameColor, Shape::kBox});
    clauses({0, 1}, {1, 1});
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown preset '" + std::string(name) + "'");
  }
  spec.train_episodes = 10 * spec.episodes_per_split;
  return spec;
}

// --- sampling -------------------------------------------------------------------

GridWorld SampleWorld(const WorldSampling& sampling) {
  constexpr int kPlacementTries = 100;
  Rng rng(MixSeed(sampling.seed));
  const int d = sampling.d;
  if (d < 2) {
    throw Error(ErrorKind::kDimensionTooSmall, "grid dimension below 2");
  }
  GridWorld world = NewWorld(
      d, Agent{{rng.Uniform(d), rng.Uniform(d)}, Orientation::kSouth});
  for (int i = 0; i < sampling.n_objects; ++i) {
    const ObjectTemplate* plant =
        i < static_cast<int>(sampling.planted.size()) ? &sampling.planted[i] : nullptr;
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementTries && !placed; ++attempt) {
      Obj obj;
      obj.id = "o" + std::to_string(i);
      obj.shape = plant ? plant->shape : kAllShapes[rng.Uniform(4)];
      obj.color = plant ? plant->color : kAllColors[rng.Uniform(4)];
      obj.size = plant && plant->size ? *plant->size
                                      : rng.Between(kMinObjectSize, kMaxObjectSize);
      const int extent = obj.shape == Shape::kBox ? obj.size : 1;
      if (extent > d) continue;
      obj.position = {rng.Uniform(d - extent + 1), rng.Uniform(d - extent + 1)};
      try {
        world = PlaceObject(world, obj);
        placed = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kCellOccupied) throw;
      }
    }
    if (!placed) {
      throw Error(ErrorKind::kUnplaceable,
                  "could not place object " + std::to_string(i) + " of " +
                      std::to_string(sampling.n_objects) + " in a " +
                      std::to_string(d) + "x" + std::to_string(d) + " grid");
    }
  }
  return world;
}

CommandAst SampleQuestion(const GridWorld& world,
                          const QuestionConstraints& constraints,
                          std::uint64_t seed) {
  Rng rng(MixSeed(seed));
  auto fail = [&] {
    return Error(ErrorKind::kUnsatisfiableAfterRetries,
                 "no question with " + std::to_string(constraints.clause_count) +
                     " clauses found within " +
                     std::to_string(constraints.max_tries) + " tries");
  };
  if (world.objects().empty() || constraints.clause_count < 0) throw fail();

  std::vector<std::vector<int>> allowed;
  for (auto& parts : Compositions(constraints.clause_count)) {
    const bool banned = std::any_of(
        constraints.forbidden.begin(), constraints.forbidden.end(),
        [&](const Pattern& p) { return IsStructural(p) && CompositionMatches(parts, p); });
    if (!banned) allowed.push_back(std::move(parts));
  }
  if (allowed.empty()) throw fail();

  QuestionBuilder builder(world, constraints.forbidden, rng);
  for (int attempt = 0; attempt < constraints.max_tries; ++attempt) {
    Focus focus;
    std::vector<const std::vector<int>*> shapes;
    for (const auto& parts : allowed) shapes.push_back(&parts);
    if (!constraints.required.empty()) {
      focus.pattern = &constraints.required[rng.Uniform(
          static_cast<int>(constraints.required.size()))];
      const Pattern& p = *focus.pattern;
      std::erase_if(shapes, [&](const std::vector<int>* parts) {
        if (IsStructural(p)) return !CompositionMatches(*parts, p);
        if (std::holds_alternative<RelationPairPattern>(p)) {
          return std::none_of(parts->begin(), parts->end(), [](int g) { return g >= 2; });
        }
        return false;
      });
      if (shapes.empty()) continue;
    }
    const std::vector<int>& parts = *shapes[rng.Uniform(static_cast<int>(shapes.size()))];
    if (focus.pattern != nullptr) {
      const Pattern& p = *focus.pattern;
      const int n = constraints.clause_count;
      if (std::holds_alternative<ColorShapePattern>(p) ||
          std::holds_alternative<SizeShapePattern>(p)) {
        focus.node = rng.Uniform(n + 1);
      } else if (std::holds_alternative<RelationTailPattern>(p)) {
        if (n == 0) continue;
        focus.clause = rng.Uniform(n);
      } else if (std::holds_alternative<RelationPairPattern>(p)) {
        std::vector<int> levels;
        for (int k = 0; k < static_cast<int>(parts.size()); ++k) {
          if (parts[k] >= 2) levels.push_back(k);
        }
        focus.level = levels[rng.Uniform(static_cast<int>(levels.size()))];
      }
    }

    std::vector<const Obj*> targets;
    for (const Obj& o : world.objects()) {
      if (builder.NodeAccepts(0, o) || focus.node != 0) targets.push_back(&o);
    }
    if (focus.node == 0) {
      std::erase_if(targets, [&](const Obj* o) {
        return !builder.NodeAccepts(0, *o);
      });
    }
    if (targets.empty()) continue;
    const Obj& target = *targets[rng.Uniform(static_cast<int>(targets.size()))];

    std::optional<CommandAst> command = builder.Build(target, parts, focus);
    if (!command) continue;
    try {
      ValidateCommand(*command);
    } catch (const Error&) {
      continue;
    }
    if (!RefineToUnique(*command, target, builder, world)) continue;
    if (ClauseCount(*command) != constraints.clause_count) continue;
    if (AnyContained(*command, constraints.forbidden)) continue;
    if (!constraints.required.empty() &&
        !AnyContained(*command, constraints.required)) {
      continue;
    }
    return *command;
  }
  throw fail();
}

// --- episodes -------------------------------------------------------------------

void CheckEpisode(const Episode& episode) {
  ObjectSet denotation = DenoteBruteForce(episode.ast, episode.world);
  if (denotation.size() != 1 || !denotation.Contains(episode.target_id)) {
    throw Error(ErrorKind::kInvariantViolation,
                episode.episode_id + ": question does not denote exactly the target");
  }
  if (PlanActions(episode.world, episode.target_id) != episode.gold_actions) {
    throw Error(ErrorKind::kInvariantViolation,
                episode.episode_id + ": gold actions differ from the planner");
  }
}

SplitData GenerateSplit(const SplitSpec& spec, const Lexicon& lexicon, int jobs) {
  ValidateSpec(spec);
  SplitData data;
  data.train = GeneratePartition(spec, "train", spec.train_episodes, lexicon, jobs);
  data.test = GeneratePartition(spec, "test", spec.episodes_per_split, lexicon, jobs);
  return data;
}

HoldoutReport HoldoutCheck(const std::vector<Episode>& train,
                           const std::vector<Episode>& test,
                           const SplitSpec& spec) {
  HoldoutReport report;
  auto check_range = [&](const Episode& e, const ClauseRange& range) {
    const int n = ClauseCount(e.ast);
    if (n < range.min || n > range.max) {
      report.violations.push_back(
          {e.episode_id, e.partition,
           "clause count " + std::to_string(n) + " outside [" +
               std::to_string(range.min) + "," + std::to_string(range.max) + "]"});
    }
  };
  for (const Episode& e : train) {
    for (const Pattern& p : spec.train_forbidden) {
      if (Contains(e.ast, p)) {
        report.violations.push_back(
            {e.episode_id, e.partition, "contains forbidden " + PatternToString(p)});
      }
    }
    check_range(e, spec.train_clauses);
  }
  for (const Episode& e : test) {
    auto it = std::find_if(spec.test_required.begin(), spec.test_required.end(),
                           [&](const Pattern& p) { return Contains(e.ast, p); });
    if (it == spec.test_required.end()) {
      report.violations.push_back(
          {e.episode_id, e.partition, "contains no required pattern"});
      ++report.coverage["none"];
    } else {
      ++report.coverage[PatternToString(*it)];
    }
    check_range(e, spec.test_clauses);
  }
  return report;
}

json EpisodeToJson(const Episode& episode) {
  return {{"episode_id", episode.episode_id},
          {"split", episode.split},
          {"partition", episode.partition},
          {"seed", episode.seed},
          {"world", WorldToJson(episode.world)},
          {"question", episode.question},
          {"target_id", episode.target_id},
          {"actions", ActionsToString(episode.gold_actions)}};
}

Episode EpisodeFromJson(const json& doc, const Lexicon& lexicon) {
  if (!doc.is_object()) Malformed("episode record must be an object");
  for (const char* key : {"episode_id", "split", "partition", "question",
                          "target_id", "actions"}) {
    if (!doc.contains(key) || !doc[key].is_string()) {
      Malformed(std::string("episode record: missing string '") + key + "'");
    }
  }
  if (!doc.contains("world")) Malformed("episode record: missing 'world'");
  Episode e;
  e.episode_id = doc["episode_id"].get<std::string>();
  e.split = doc["split"].get<std::string>();
  e.partition = doc["partition"].get<std::string>();
  if (doc.contains("seed") && doc["seed"].is_number_unsigned()) {
    e.seed = doc["seed"].get<std::uint64_t>();
  }
  e.world = WorldFromJson(doc["world"]);
  e.question = doc["question"].get<std::string>();
  e.ast = ParseText(e.question, lexicon);
  e.target_id = doc["target_id"].get<std::string>();
  e.gold_actions = ActionsFromString(doc["actions"].get<std::string>());
  return e;
}

std::string EpisodesToJsonl(const std::vector<Episode>& episodes) {
  std::string out;
  for (const Episode& e : episodes) {
    out += EpisodeToJson(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<Episode> ReadEpisodesFile(const std::string& path,
                                      const Lexicon& lexicon) {
  std::istringstream in(ReadFile(path));
  std::vector<Episode> episodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
      Malformed(path + ":" + std::to_string(line_no) + ": not valid JSON");
    }
    episodes.push_back(EpisodeFromJson(doc, lexicon));
  }
  return episodes;
}

DatasetFiles WriteDataset(const std::string& dir, const SplitSpec& spec,
                          const SplitData& data, const Lexicon& lexicon) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  DatasetFiles files;
  files.train_path = (base / (spec.name + ".train.jsonl")).string();
  files.test_path = (base / (spec.name + ".test.jsonl")).string();
  files.manifest_path = (base / (spec.name + ".manifest.json")).string();
  const std::string train = EpisodesToJsonl(data.train);
  const std::string test = EpisodesToJsonl(data.test);
  files.digest = "sha256:" + Sha256Hex(train + test);
  WriteFile(files.train_path, train);
  WriteFile(files.test_path, test);

  json manifest = {
      {"schema_version", 1},
      {"spec", SpecToJson(spec)},
      {"seed", spec.seed},
      {"counts", {{"train", data.train.size()}, {"test", data.test.size()}}},
      {"files",
       {{"train", spec.name + ".train.jsonl"}, {"test", spec.name + ".test.jsonl"}}},
      {"digest", files.digest}};
  if (!(lexicon == Lexicon::Default())) manifest["lexicon"] = LexiconToJson(lexicon);
  WriteFile(files.manifest_path, manifest.dump(2) + "\n");
  return files;
}

}  // namespace gridcomp
