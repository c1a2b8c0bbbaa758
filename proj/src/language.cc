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

#include "gridcomp/language.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "gridcomp/random.h"

namespace gridcomp {
namespace {

using nlohmann::json;

constexpr int kLexiconSchemaVersion = 1;

constexpr std::string_view kThatIs = "that_is";
constexpr std::string_view kAnd = "and";
constexpr std::string_view kWalkTo = "walk_to";

const std::vector<std::pair<std::string, LexEntry>>& DefaultInventory() {
  static const auto* inventory =
      new std::vector<std::pair<std::string, LexEntry>>{
          {"red", {Role::kColor, "red"}},
          {"blue", {Role::kColor, "blue"}},
          {"green", {Role::kColor, "green"}},
          {"yellow", {Role::kColor, "yellow"}},
          {"circle", {Role::kShapeNoun, "circle"}},
          {"square", {Role::kShapeNoun, "square"}},
          {"cylinder", {Role::kShapeNoun, "cylinder"}},
          {"box", {Role::kShapeNoun, "box"}},
          {"object", {Role::kShapeNoun, "object"}},
          {"small", {Role::kSizeWord, "small"}},
          {"big", {Role::kSizeWord, "big"}},
          {"in the same row as", {Role::kRelationPhrase, "same_row"}},
          {"in the same column as", {Role::kRelationPhrase, "same_column"}},
          {"in the same color as", {Role::kRelationPhrase, "same_color"}},
          {"in the same shape as", {Role::kRelationPhrase, "same_shape"}},
          {"in the same size as", {Role::kRelationPhrase, "same_size"}},
          {"inside of", {Role::kRelationPhrase, "inside_of"}},
          {"the", {Role::kDeterminer, "the"}},
          {"a", {Role::kDeterminer, "a"}},
          {"and", {Role::kConnective, "and"}},
          {"that is", {Role::kClauseMarker, "that_is"}},
          {"walk to", {Role::kVerbPhrase, "walk_to"}},
      };
  return *inventory;
}

[[noreturn]] void InvalidLexicon(const std::string& what) {
  throw Error(ErrorKind::kInvalidLexicon, "invalid lexicon: " + what);
}

[[noreturn]] void InvalidAst(const std::string& what) {
  throw Error(ErrorKind::kInvalidAst, "invalid command AST: " + what);
}

std::vector<std::string> SplitWords(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

bool IsNormalizedSurface(const std::string& surface) {
  if (surface.empty() || surface.front() == ' ' || surface.back() == ' ') {
    return false;
  }
  char prev = 0;
  for (char c : surface) {
    const bool lower = c >= 'a' && c <= 'z';
    if (!lower && c != ' ' && c != '_') return false;
    if (c == ' ' && prev == ' ') return false;
    prev = c;
  }
  return true;
}

std::string_view NounName(const std::optional<Shape>& noun) {
  return noun ? ShapeName(*noun) : kWildcardNoun;
}

void ValidateReferent(const ReferentAst& referent, bool top) {
  if (top && referent.determiner != Determiner::kThe) {
    InvalidAst("the target referent must use 'the'");
  }
  if (!top && referent.determiner != Determiner::kA) {
    InvalidAst("nested referents must use 'a'");
  }
  for (std::size_t i = 0; i < referent.clauses.size(); ++i) {
    const RelClause& clause = referent.clauses[i];
    if (clause.relation == Relation::kInsideOf && clause.tail.noun &&
        *clause.tail.noun != Shape::kBox) {
      InvalidAst("'inside of' needs a box or object tail");
    }
    if (i + 1 < referent.clauses.size() && !clause.tail.clauses.empty()) {
      InvalidAst("only the last tail of a clause group may carry clauses");
    }
    ValidateReferent(clause.tail, /*top=*/false);
  }
}

// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  CommandAst ParseCommand() {
    Expect(Role::kVerbPhrase, {"verb-phrase"});
    CommandAst command{ParseReferent(/*top=*/true)};
    if (pos_ < tokens_.size()) {
      Fail({"connective", "clause-marker", "end of input"});
    }
    return command;
  }

 private:
  const Token* Peek() const {
    return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr;
  }

  bool PeekIs(Role role) const {
    const Token* t = Peek();
    return t != nullptr && t->role == role;
  }

  std::size_t Offset() const {
    if (pos_ < tokens_.size()) return tokens_[pos_].offset;
    if (tokens_.empty()) return 0;
    const Token& last = tokens_.back();
    return last.offset + last.surface.size();
  }

  [[noreturn]] void Fail(std::vector<std::string> expected) const {
    std::string msg = "syntax error at offset " + std::to_string(Offset()) +
                      ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    const Token* t = Peek();
    msg += t ? ", found '" + t->surface + "'" : ", found end of input";
    throw ParseError(msg, Offset(), std::move(expected));
  }

  const Token& Expect(Role role, std::vector<std::string> expected) {
    if (!PeekIs(role)) Fail(std::move(expected));
    return tokens_[pos_++];
  }

  ReferentAst ParseReferent(bool top) {
    ReferentAst referent;
    const std::string wanted = top ? "the" : "a";
    const Token& det = Expect(Role::kDeterminer, {"determiner '" + wanted + "'"});
    if (det.canonical != wanted) {
      --pos_;
      Fail({"determiner '" + wanted + "'"});
    }
    referent.determiner = top ? Determiner::kThe : Determiner::kA;

    if (PeekIs(Role::kSizeWord)) {
      referent.size_word = ParseSizeWord(tokens_[pos_++].canonical);
    }
    if (PeekIs(Role::kColor)) {
      referent.color = ParseColor(tokens_[pos_++].canonical);
    }
    std::vector<std::string> expected;
    if (!referent.size_word && !referent.color) expected.push_back("size-word");
    if (!referent.color) expected.push_back("color");
    expected.push_back("shape-noun");
    const Token& noun = Expect(Role::kShapeNoun, expected);
    if (noun.canonical != kWildcardNoun) referent.noun = ParseShape(noun.canonical);

    if (PeekIs(Role::kClauseMarker)) {
      ++pos_;
      referent.clauses.push_back(ParseClause());
      while (PeekIs(Role::kConnective)) {
        ++pos_;
        referent.clauses.push_back(ParseClause());
      }
    }
    return referent;
  }

  RelClause ParseClause() {
    RelClause clause;
    const Token& rel = Expect(Role::kRelationPhrase, {"relation-phrase"});
    clause.relation = *ParseRelation(rel.canonical);
    const std::size_t tail_start = pos_;
    clause.tail = ParseReferent(/*top=*/false);
    if (clause.relation == Relation::kInsideOf && clause.tail.noun &&
        *clause.tail.noun != Shape::kBox) {
      // Point at the offending noun.
      pos_ = tail_start;
      while (!PeekIs(Role::kShapeNoun)) ++pos_;
      Fail({"shape-noun 'box'", "shape-noun 'object'"});
    }
    return clause;
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

void RenderReferent(const ReferentAst& referent, const Lexicon& lexicon,
                    std::string& out) {
  out += RenderReferentHead(referent, lexicon);
  for (std::size_t i = 0; i < referent.clauses.size(); ++i) {
    const RelClause& clause = referent.clauses[i];
    out += ' ';
    out += i == 0 ? lexicon.Surface(Role::kClauseMarker, kThatIs)
                  : lexicon.Surface(Role::kConnective, kAnd);
    out += ' ';
    out += lexicon.Surface(Role::kRelationPhrase, RelationName(clause.relation));
    out += ' ';
    RenderReferent(clause.tail, lexicon, out);
  }
}

int AnnotateReferent(const ReferentAst& referent, const Lexicon& lexicon,
                     std::vector<std::string>& out) {
  const int step = static_cast<int>(out.size()) + 1;
  out.emplace_back();
  std::vector<int> tail_steps;
  for (const RelClause& clause : referent.clauses) {
    tail_steps.push_back(AnnotateReferent(clause.tail, lexicon, out));
  }
  std::string text = "step " + std::to_string(step) +
                     " objects: " + RenderReferentHead(referent, lexicon);
  if (!tail_steps.empty()) {
    text += ", relative clause led by '" +
            lexicon.Surface(Role::kClauseMarker, kThatIs) + "' connects to ";
    for (std::size_t i = 0; i < tail_steps.size(); ++i) {
      if (i > 0) text += " and ";
      text += "step " + std::to_string(tail_steps[i]);
    }
  }
  out[step - 1] = std::move(text);
  return step;
}

json ReferentToJson(const ReferentAst& referent) {
  json clauses = json::array();
  for (const RelClause& c : referent.clauses) {
    clauses.push_back(
        {{"relation", RelationName(c.relation)}, {"tail", ReferentToJson(c.tail)}});
  }
  return {{"determiner", referent.determiner == Determiner::kThe ? "the" : "a"},
          {"size_word", referent.size_word
                            ? json(SizeWordName(*referent.size_word))
                            : json(nullptr)},
          {"color", referent.color ? json(ColorName(*referent.color))
                                   : json(nullptr)},
          {"noun", NounName(referent.noun)},
          {"clauses", std::move(clauses)}};
}

// Pronounceable consonant-vowel string of 4..6 letters.
std::string RandomSymbol(Rng& rng) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  const int length = rng.Between(4, 6);
  std::string s;
  for (int i = 0; i < length; ++i) {
    const std::string_view pool = i % 2 == 0 ? kConsonants : kVowels;
    s += pool[rng.Uniform(static_cast<int>(pool.size()))];
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view RelationName(Relation relation) {
  switch (relation) {
    case Relation::kSameRow: return "same_row";
    case Relation::kSameColumn: return "same_column";
    case Relation::kSameColor: return "same_color";
    case Relation::kSameShape: return "same_shape";
    case Relation::kSameSize: return "same_size";
    case Relation::kInsideOf: return "inside_of";
  }
  return "?";
}

std::optional<Relation> ParseRelation(std::string_view name) {
  for (Relation r : kAllRelations) {
    if (RelationName(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view SizeWordName(SizeWord word) {
  return word == SizeWord::kSmall ? "small" : "big";
}

std::optional<SizeWord> ParseSizeWord(std::string_view name) {
  if (name == "small") return SizeWord::kSmall;
  if (name == "big") return SizeWord::kBig;
  return std::nullopt;
}

bool operator==(const ReferentAst& a, const ReferentAst& b) {
  return a.determiner == b.determiner && a.size_word == b.size_word &&
         a.color == b.color && a.noun == b.noun && a.clauses == b.clauses;
}

bool operator==(const RelClause& a, const RelClause& b) {
  return a.relation == b.relation && a.tail == b.tail;
}

int ClauseCount(const ReferentAst& referent) {
  int n = 0;
  for (const RelClause& c : referent.clauses) n += 1 + ClauseCount(c.tail);
  return n;
}

void ValidateCommand(const CommandAst& command) {
  ValidateReferent(command.target, /*top=*/true);
}

// ---------------------------------------------------------------------------
// Lexicon

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kColor: return "color";
    case Role::kShapeNoun: return "shape-noun";
    case Role::kSizeWord: return "size-word";
    case Role::kRelationPhrase: return "relation-phrase";
    case Role::kDeterminer: return "determiner";
    case Role::kConnective: return "connective";
    case Role::kClauseMarker: return "clause-marker";
    case Role::kVerbPhrase: return "verb-phrase";
  }
  return "?";
}

std::optional<Role> ParseRole(std::string_view name) {
  for (Role r : {Role::kColor, Role::kShapeNoun, Role::kSizeWord,
                 Role::kRelationPhrase, Role::kDeterminer, Role::kConnective,
                 Role::kClauseMarker, Role::kVerbPhrase}) {
    if (RoleName(r) == name) return r;
  }
  return std::nullopt;
}

bool IsContentRole(Role role) {
  return role == Role::kColor || role == Role::kShapeNoun ||
         role == Role::kSizeWord || role == Role::kRelationPhrase;
}

Lexicon Lexicon::Default() {
  std::map<std::string, LexEntry> entries(DefaultInventory().begin(),
                                          DefaultInventory().end());
  return FromEntries(std::move(entries));
}

Lexicon Lexicon::FromEntries(std::map<std::string, LexEntry> entries,
                             std::optional<std::uint64_t> seed) {
  Lexicon lex;
  for (const auto& [surface, entry] : entries) {
    if (!IsNormalizedSurface(surface)) {
      InvalidLexicon("surface '" + surface + "' is not normalized");
    }
    if (!lex.surfaces_.emplace(entry, surface).second) {
      InvalidLexicon("two surfaces for " + std::string(RoleName(entry.role)) +
                     " '" + entry.canonical + "'");
    }
    lex.max_phrase_words_ =
        std::max(lex.max_phrase_words_, SplitWords(surface).size());
  }
  for (const auto& [surface, entry] : DefaultInventory()) {
    if (!lex.surfaces_.contains(entry)) {
      InvalidLexicon("missing " + std::string(RoleName(entry.role)) + " '" +
                     entry.canonical + "'");
    }
  }
  if (lex.surfaces_.size() != DefaultInventory().size()) {
    InvalidLexicon("unexpected (role, canonical) entries");
  }
  lex.entries_ = std::move(entries);
  lex.seed_ = seed;
  return lex;
}

const std::string& Lexicon::Surface(Role role, std::string_view canonical) const {
  auto it = surfaces_.find(LexEntry{role, std::string(canonical)});
  if (it == surfaces_.end()) {
    InvalidLexicon("no surface for " + std::string(RoleName(role)) + " '" +
                   std::string(canonical) + "'");
  }
  return it->second;
}

const LexEntry* Lexicon::Lookup(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

json LexiconToJson(const Lexicon& lexicon) {
  json entries = json::object();
  for (const auto& [surface, entry] : lexicon.entries()) {
    entries[surface] = {{"role", RoleName(entry.role)},
                        {"canonical", entry.canonical}};
  }
  json doc = {{"schema_version", kLexiconSchemaVersion},
              {"entries", std::move(entries)}};
  if (lexicon.seed()) doc["seed"] = *lexicon.seed();
  return doc;
}

Lexicon LexiconFromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("entries") ||
      !doc["entries"].is_object()) {
    InvalidLexicon("document needs an 'entries' object");
  }
  if (doc.value("schema_version", 0) != kLexiconSchemaVersion) {
    InvalidLexicon("unsupported schema_version");
  }
  std::map<std::string, LexEntry> entries;
  for (const auto& [surface, e] : doc["entries"].items()) {
    if (!e.is_object() || !e.contains("role") || !e.contains("canonical") ||
        !e["role"].is_string() || !e["canonical"].is_string()) {
      InvalidLexicon("entry '" + surface + "' needs string role and canonical");
    }
    auto role = ParseRole(e["role"].get<std::string>());
    if (!role) InvalidLexicon("entry '" + surface + "' has an unknown role");
    entries.emplace(surface, LexEntry{*role, e["canonical"].get<std::string>()});
  }
  std::optional<std::uint64_t> seed;
  if (doc.contains("seed") && doc["seed"].is_number_unsigned()) {
    seed = doc["seed"].get<std::uint64_t>();
  }
  return Lexicon::FromEntries(std::move(entries), seed);
}

Lexicon ApplyRemap(const Lexicon& lexicon,
                   const std::map<std::string, std::string>& surface_map,
                   std::optional<std::uint64_t> seed) {
  std::map<std::string, LexEntry> entries;
  for (const auto& [from, to] : surface_map) {
    if (lexicon.Lookup(from) == nullptr) {
      InvalidLexicon("remap source '" + from + "' is not in the lexicon");
    }
  }
  for (const auto& [surface, entry] : lexicon.entries()) {
    auto it = surface_map.find(surface);
    const std::string& target = it == surface_map.end() ? surface : it->second;
    if (!entries.emplace(target, entry).second) {
      InvalidLexicon("remap is not injective at '" + target + "'");
    }
  }
  return Lexicon::FromEntries(std::move(entries), seed);
}

Lexicon RemapLexicon(const Lexicon& lexicon, std::uint64_t seed,
                     bool remap_structural) {
  std::set<std::string> taken;
  for (const auto& [surface, entry] : lexicon.entries()) {
    for (std::string& w : SplitWords(surface)) taken.insert(std::move(w));
  }
  Rng rng(MixSeed(seed));
  std::map<std::string, std::string> surface_map;
  for (const auto& [surface, entry] : lexicon.entries()) {
    if (!remap_structural && !IsContentRole(entry.role)) continue;
    std::string symbol;
    do {
      symbol = RandomSymbol(rng);
    } while (taken.contains(symbol));
    taken.insert(symbol);
    surface_map.emplace(surface, std::move(symbol));
  }
  return ApplyRemap(lexicon, surface_map, seed);
}

// ---------------------------------------------------------------------------

std::vector<Token> Tokenize(std::string_view text, const Lexicon& lexicon) {
  struct Word {
    std::string text;
    std::size_t offset;
  };
  std::vector<Word> words;
  for (std::size_t i = 0; i < text.size();) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    words.push_back({std::string(text.substr(i, j - i)), i});
    i = j;
  }

  std::vector<Token> tokens;
  for (std::size_t i = 0; i < words.size();) {
    const std::size_t longest =
        std::min(lexicon.max_phrase_words(), words.size() - i);
    bool matched = false;
    for (std::size_t n = longest; n >= 1 && !matched; --n) {
      std::string phrase = words[i].text;
      for (std::size_t k = 1; k < n; ++k) phrase += ' ' + words[i + k].text;
      if (const LexEntry* entry = lexicon.Lookup(phrase)) {
        tokens.push_back({entry->role, entry->canonical, phrase, words[i].offset});
        i += n;
        matched = true;
      }
    }
    if (!matched) {
      throw Error(ErrorKind::kUnknownToken,
                  "unknown token '" + words[i].text + "' at offset " +
                      std::to_string(words[i].offset),
                  words[i].offset);
    }
  }
  return tokens;
}

CommandAst Parse(const std::vector<Token>& tokens) {
  return Parser(tokens).ParseCommand();
}

CommandAst ParseText(std::string_view text, const Lexicon& lexicon) {
  return Parse(Tokenize(text, lexicon));
}

std::string RenderReferentHead(const ReferentAst& referent,
                               const Lexicon& lexicon) {
  std::string out = lexicon.Surface(
      Role::kDeterminer, referent.determiner == Determiner::kThe ? "the" : "a");
  if (referent.size_word) {
    out += ' ';
    out += lexicon.Surface(Role::kSizeWord, SizeWordName(*referent.size_word));
  }
  if (referent.color) {
    out += ' ';
    out += lexicon.Surface(Role::kColor, ColorName(*referent.color));
  }
  out += ' ';
  out += lexicon.Surface(Role::kShapeNoun, NounName(referent.noun));
  return out;
}

std::string Render(const CommandAst& command, const Lexicon& lexicon) {
  ValidateCommand(command);
  std::string out = lexicon.Surface(Role::kVerbPhrase, kWalkTo);
  out += ' ';
  RenderReferent(command.target, lexicon, out);
  return out;
}

std::vector<std::string> Annotate(const CommandAst& command,
                                  const Lexicon& lexicon) {
  std::vector<std::string> out;
  AnnotateReferent(command.target, lexicon, out);
  return out;
}

json CommandToJson(const CommandAst& command) {
  return {{"target", ReferentToJson(command.target)},
          {"clause_count", ClauseCount(command)}};
}

}  // namespace gridcomp
