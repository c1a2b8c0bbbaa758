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

// The command language:
//
//   Command  := VERB Referent
//   Referent := DET [SIZE] [COLOR] NOUN
//               ["that is" Relation Referent ("and" Relation Referent)*]
//
// The top-level referent uses "the", nested ones use "a". An "and" continues
// the innermost referent that has an open "that is" group, so within a group
// only the last tail may carry clauses of its own; any other AST would render
// to an ambiguous string and is rejected as invalid.
//
// All surface forms come from a Lexicon, which may be a random bijective
// remapping of the default one; the parser only looks at roles and canonical
// ids, so remapped text parses to the same AST.

#ifndef GRIDCOMP_LANGUAGE_H_
#define GRIDCOMP_LANGUAGE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridcomp/error.h"
#include "gridcomp/world.h"
#include "json.hpp"

namespace gridcomp {

enum class Determiner { kThe, kA };
enum class SizeWord { kSmall, kBig };
enum class Relation {
  kSameRow,
  kSameColumn,
  kSameColor,
  kSameShape,
  kSameSize,
  kInsideOf,
};

inline constexpr std::array<Relation, 6> kAllRelations = {
    Relation::kSameRow,   Relation::kSameColumn, Relation::kSameColor,
    Relation::kSameShape, Relation::kSameSize,   Relation::kInsideOf};

std::string_view RelationName(Relation relation);  // "same_row", ...
std::optional<Relation> ParseRelation(std::string_view name);
std::string_view SizeWordName(SizeWord word);       // "small" / "big"
std::optional<SizeWord> ParseSizeWord(std::string_view name);

// Canonical id of the wildcard noun.
inline constexpr std::string_view kWildcardNoun = "object";

struct RelClause;

struct ReferentAst {
  Determiner determiner = Determiner::kThe;
  std::optional<SizeWord> size_word;
  std::optional<Color> color;
  std::optional<Shape> noun;  // nullopt is the wildcard "object"
  std::vector<RelClause> clauses;
};

struct RelClause {
  Relation relation = Relation::kSameRow;
  ReferentAst tail;
};

bool operator==(const ReferentAst& a, const ReferentAst& b);
bool operator==(const RelClause& a, const RelClause& b);

struct CommandAst {
  ReferentAst target;

  friend bool operator==(const CommandAst&, const CommandAst&) = default;
};

// Total number of RelClause nodes, at any depth.
int ClauseCount(const ReferentAst& referent);
inline int ClauseCount(const CommandAst& command) {
  return ClauseCount(command.target);
}

// Throws kInvalidAst when a determiner, an inside-of tail, or the
// only-the-last-tail-nests rule is violated.
void ValidateCommand(const CommandAst& command);

// ---------------------------------------------------------------------------
// Lexicon

enum class Role {
  kColor,
  kShapeNoun,
  kSizeWord,
  kRelationPhrase,
  kDeterminer,
  kConnective,
  kClauseMarker,
  kVerbPhrase,
};

std::string_view RoleName(Role role);  // "color", "shape-noun", ...
std::optional<Role> ParseRole(std::string_view name);

// Roles whose surfaces are replaced by RemapLexicon by default.
bool IsContentRole(Role role);

struct LexEntry {
  Role role = Role::kColor;
  std::string canonical;

  friend bool operator==(const LexEntry&, const LexEntry&) = default;
  friend auto operator<=>(const LexEntry&, const LexEntry&) = default;
};

class Lexicon {
 public:
  // The English lexicon: colors, shapes plus "object", "small"/"big", six
  // relation phrases, "the"/"a", "and", "that is", "walk to".
  static Lexicon Default();

  // Validates that surfaces are normalized (lowercase words separated by
  // single spaces), that (role, canonical) pairs are unique and that every
  // pair of the default inventory is present. Throws kInvalidLexicon.
  static Lexicon FromEntries(std::map<std::string, LexEntry> entries,
                             std::optional<std::uint64_t> seed = std::nullopt);

  const std::map<std::string, LexEntry>& entries() const { return entries_; }

  // Seed used to produce a remapped lexicon, if any.
  std::optional<std::uint64_t> seed() const { return seed_; }

  // Surface form for a (role, canonical) pair. Throws kInvalidLexicon if
  // the pair is missing, which FromEntries rules out.
  const std::string& Surface(Role role, std::string_view canonical) const;

  const LexEntry* Lookup(std::string_view surface) const;

  std::size_t max_phrase_words() const { return max_phrase_words_; }

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::map<std::string, LexEntry> entries_;
  std::map<LexEntry, std::string> surfaces_;
  std::optional<std::uint64_t> seed_;
  std::size_t max_phrase_words_ = 1;
};

// {schema_version, seed?, entries: {surface: {role, canonical}}}
nlohmann::json LexiconToJson(const Lexicon& lexicon);
Lexicon LexiconFromJson(const nlohmann::json& doc);

// Replaces surfaces according to `surface_map` (old surface -> new surface).
// Unmapped entries keep their surface. The result must still be a valid
// lexicon with unique surfaces; otherwise throws kInvalidLexicon.
Lexicon ApplyRemap(const Lexicon& lexicon,
                   const std::map<std::string, std::string>& surface_map,
                   std::optional<std::uint64_t> seed = std::nullopt);

// Replaces every content surface (and, with remap_structural, determiners,
// connective, clause marker and verb phrase as well) with a pronounceable
// lowercase 4-6 letter symbol that collides with no word of `lexicon`.
Lexicon RemapLexicon(const Lexicon& lexicon, std::uint64_t seed,
                     bool remap_structural = false);

// ---------------------------------------------------------------------------
// Tokenizer, parser, renderer

struct Token {
  Role role = Role::kColor;
  std::string canonical;
  std::string surface;
  std::size_t offset = 0;  // character offset of the first word
};

// Greedy longest match of whitespace-separated words against lexicon
// surfaces. Throws kUnknownToken with the offending word's offset.
std::vector<Token> Tokenize(std::string_view text, const Lexicon& lexicon);

// Raised for kSyntaxError; position() is the character offset of the
// offending token (or the text length at end of input).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position,
             std::vector<std::string> expected)
      : Error(ErrorKind::kSyntaxError, message, position),
        expected_(std::move(expected)) {}

  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

CommandAst Parse(const std::vector<Token>& tokens);

// Tokenize + Parse.
CommandAst ParseText(std::string_view text, const Lexicon& lexicon);

std::string Render(const CommandAst& command, const Lexicon& lexicon);

// "the small red square": determiner, size word, color and noun only.
std::string RenderReferentHead(const ReferentAst& referent,
                               const Lexicon& lexicon);

// One annotation per referent in pre-order; referent k is "step k". A
// referent with clauses names the steps its "that is" group connects to.
std::vector<std::string> Annotate(const CommandAst& command,
                                  const Lexicon& lexicon);

// Structured AST form used on the wire.
nlohmann::json CommandToJson(const CommandAst& command);

}  // namespace gridcomp

#endif  // GRIDCOMP_LANGUAGE_H_
