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

#include "gridcomp/resolver.h"

#include <algorithm>
#include <map>
#include <set>

namespace gridcomp {
namespace {

using nlohmann::json;

class Compiler {
 public:
  Compiler(const CommandAst& command, const Lexicon& lexicon)
      : annotations_(Annotate(command, lexicon)) {}

  ToolProgram Run(const CommandAst& command) {
    const std::string head = CompileReferent(command.target);
    program_.steps.push_back({std::string(kUniqueTarget),
                              {{"objects", BindingRef{head}}},
                              std::string(kTargetBinding),
                              annotations_.front()});
    program_.target = std::string(kTargetBinding);
    return std::move(program_);
  }

 private:
  std::string Emit(std::string tool,
                   std::vector<std::pair<std::string, ArgBinding>> args,
                   const std::string& comment) {
    std::string out = "s" + std::to_string(program_.steps.size() + 1);
    program_.steps.push_back({std::move(tool), std::move(args), out, comment});
    return out;
  }

  std::string CompileReferent(const ReferentAst& referent) {
    const std::string& comment = annotations_[next_step_++];
    std::vector<std::string> tails;
    for (const RelClause& clause : referent.clauses) {
      tails.push_back(CompileReferent(clause.tail));
    }
    const std::string noun =
        referent.noun ? std::string(ShapeName(*referent.noun))
                      : std::string(kWildcardNoun);
    std::string b = Emit(std::string(kFilterByAttribute),
                         {{"objects", BindingRef{std::string(kAllBinding)}},
                          {"kind", std::string("shape")},
                          {"value", noun}},
                         comment);
    if (referent.color) {
      b = Emit(std::string(kFilterByAttribute),
               {{"objects", BindingRef{b}},
                {"kind", std::string("color")},
                {"value", std::string(ColorName(*referent.color))}},
               comment);
    }
    for (std::size_t i = 0; i < referent.clauses.size(); ++i) {
      b = Emit(std::string(kFilterRelationship),
               {{"head_objects", BindingRef{b}},
                {"condition",
                 std::string(RelationName(referent.clauses[i].relation))},
                {"tail_objects", BindingRef{tails[i]}}},
               comment);
    }
    if (referent.size_word) {
      b = Emit(std::string(kFilterSize),
               {{"objects", BindingRef{b}},
                {"size_word", std::string(SizeWordName(*referent.size_word))}},
               comment);
    }
    return b;
  }

  std::vector<std::string> annotations_;
  std::size_t next_step_ = 0;
  ToolProgram program_;
};

bool IsRegistered(std::string_view tool) {
  const auto& tools = DescribeTools();
  return std::any_of(tools.begin(), tools.end(),
                     [&](const ToolDescriptor& d) { return d.name == tool; });
}

// --- brute-force denotation -------------------------------------------------
// Deliberately written without any toolset helper.

bool InsideBlock(const Obj& head, const Obj& box) {
  if (box.shape != Shape::kBox) return false;
  for (int r = box.position.row; r < box.position.row + box.size; ++r) {
    for (int c = box.position.col; c < box.position.col + box.size; ++c) {
      if (head.position.row == r && head.position.col == c) return true;
    }
  }
  return false;
}

bool Related(Relation relation, const Obj& head, const Obj& tail) {
  if (relation == Relation::kSameRow) return head.position.row == tail.position.row;
  if (relation == Relation::kSameColumn) return head.position.col == tail.position.col;
  if (relation == Relation::kSameColor) return head.color == tail.color;
  if (relation == Relation::kSameShape) return head.shape == tail.shape;
  if (relation == Relation::kSameSize) return head.size == tail.size;
  return InsideBlock(head, tail);
}

std::vector<const Obj*> Denote(const ReferentAst& referent,
                               const GridWorld& world) {
  std::vector<std::vector<const Obj*>> tails;
  for (const RelClause& clause : referent.clauses) {
    tails.push_back(Denote(clause.tail, world));
  }
  std::vector<const Obj*> matches;
  for (const Obj& o : world.objects()) {
    if (referent.noun && o.shape != *referent.noun) continue;
    if (referent.color && o.color != *referent.color) continue;
    bool all_clauses = true;
    for (std::size_t i = 0; i < referent.clauses.size() && all_clauses; ++i) {
      bool witness = false;
      for (const Obj* t : tails[i]) {
        if (t->id != o.id && Related(referent.clauses[i].relation, o, *t)) {
          witness = true;
        }
      }
      all_clauses = witness;
    }
    if (all_clauses) matches.push_back(&o);
  }
  if (referent.size_word && !matches.empty()) {
    int best = matches.front()->size;
    for (const Obj* o : matches) {
      best = *referent.size_word == SizeWord::kSmall ? std::min(best, o->size)
                                                     : std::max(best, o->size);
    }
    std::vector<const Obj*> kept;
    for (const Obj* o : matches) {
      if (o->size == best) kept.push_back(o);
    }
    matches = std::move(kept);
  }
  return matches;
}

std::string RenderArg(const ArgBinding& arg) {
  if (const auto* ref = std::get_if<BindingRef>(&arg)) return ref->name;
  return "\"" + std::get<std::string>(arg) + "\"";
}

[[noreturn]] void MalformedProgram(const std::string& what) {
  throw Error(ErrorKind::kMalformedDocument, "malformed tool program: " + what);
}

}  // namespace

ToolProgram Compile(const CommandAst& command, const Lexicon& lexicon) {
  ValidateCommand(command);
  return Compiler(command, lexicon).Run(command);
}

void ValidateProgram(const ToolProgram& program) {
  std::set<std::string, std::less<>> bound = {std::string(kAllBinding)};
  for (std::size_t i = 0; i < program.steps.size(); ++i) {
    const ToolCall& call = program.steps[i];
    if (!IsRegistered(call.tool)) {
      throw Error(ErrorKind::kUnknownTool,
                  "step " + std::to_string(i + 1) + ": unknown tool '" +
                      call.tool + "'");
    }
    for (const auto& [name, arg] : call.args) {
      if (const auto* ref = std::get_if<BindingRef>(&arg);
          ref != nullptr && !bound.contains(ref->name)) {
        throw Error(ErrorKind::kUnknownBinding,
                    "step " + std::to_string(i + 1) + ": '" + ref->name +
                        "' is not bound by an earlier step");
      }
    }
    bound.insert(call.output);
  }
  if (program.steps.empty() || program.steps.back().tool != kUniqueTarget ||
      program.steps.back().output != program.target) {
    throw Error(ErrorKind::kInvalidArgument,
                "program must end with unique_target writing its target");
  }
}

std::string Execute(const ToolProgram& program, const GridWorld& world) {
  ValidateProgram(program);
  std::map<std::string, ToolValue, std::less<>> env;
  env.emplace(std::string(kAllBinding), ObjectSet::All(world));
  for (const ToolCall& call : program.steps) {
    ToolArgs args;
    for (const auto& [name, arg] : call.args) {
      if (const auto* ref = std::get_if<BindingRef>(&arg)) {
        args.emplace(name, env.at(ref->name));
      } else {
        args.emplace(name, std::get<std::string>(arg));
      }
    }
    env.insert_or_assign(call.output, InvokeTool(world, call.tool, args));
  }
  const ToolValue& result = env.at(program.target);
  return std::get<std::string>(result);
}

ObjectSet DenoteBruteForce(const ReferentAst& referent, const GridWorld& world) {
  std::vector<std::string> ids;
  for (const Obj* o : Denote(referent, world)) ids.push_back(o->id);
  return ObjectSet(std::move(ids));
}

std::string RenderDemonstration(const CommandAst& command,
                                const GridWorld& world,
                                const ToolProgram& program,
                                const Lexicon& lexicon) {
  std::string out = "# world\n" + SerializeWorld(world) + "\n";
  out += "# question: " + Render(command, lexicon) + "\n";
  const std::string* last_comment = nullptr;
  for (const ToolCall& call : program.steps) {
    if (last_comment == nullptr || *last_comment != call.comment) {
      out += "# " + call.comment + "\n";
      last_comment = &call.comment;
    }
    out += call.output + " = " + call.tool + "(";
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      if (i > 0) out += ", ";
      out += call.args[i].first + "=" + RenderArg(call.args[i].second);
    }
    out += ")\n";
  }
  std::string answer;
  try {
    answer = Execute(program, world);
  } catch (const Error& e) {
    answer = "error " + std::string(ErrorKindName(e.kind()));
  }
  out += "# answer: " + answer + "\n";
  return out;
}

json ProgramToJson(const ToolProgram& program) {
  json steps = json::array();
  for (const ToolCall& call : program.steps) {
    json args = json::object();
    for (const auto& [name, arg] : call.args) {
      if (const auto* ref = std::get_if<BindingRef>(&arg)) {
        args[name] = {{"ref", ref->name}};
      } else {
        args[name] = std::get<std::string>(arg);
      }
    }
    steps.push_back({{"tool", call.tool},
                     {"args", std::move(args)},
                     {"output", call.output},
                     {"comment", call.comment}});
  }
  return {{"steps", std::move(steps)}, {"target", program.target}};
}

ToolProgram ProgramFromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    MalformedProgram("needs a 'steps' array");
  }
  if (!doc.contains("target") || !doc["target"].is_string()) {
    MalformedProgram("needs a string 'target'");
  }
  ToolProgram program;
  program.target = doc["target"].get<std::string>();
  for (const json& s : doc["steps"]) {
    if (!s.is_object() || !s.contains("tool") || !s["tool"].is_string() ||
        !s.contains("output") || !s["output"].is_string() ||
        !s.contains("args") || !s["args"].is_object()) {
      MalformedProgram("each step needs string tool, string output, args object");
    }
    ToolCall call;
    call.tool = s["tool"].get<std::string>();
    call.output = s["output"].get<std::string>();
    if (s.contains("comment") && s["comment"].is_string()) {
      call.comment = s["comment"].get<std::string>();
    }
    // Keep the descriptor's argument order when the tool is known.
    std::vector<std::string> order;
    for (const ToolDescriptor& d : DescribeTools()) {
      if (d.name == call.tool) {
        for (const ArgumentSpec& a : d.arguments) order.push_back(a.name);
      }
    }
    for (const auto& [name, v] : s["args"].items()) {
      if (std::find(order.begin(), order.end(), name) == order.end()) {
        order.push_back(name);
      }
    }
    for (const std::string& name : order) {
      if (!s["args"].contains(name)) continue;
      const json& v = s["args"][name];
      if (v.is_string()) {
        call.args.emplace_back(name, v.get<std::string>());
      } else if (v.is_object() && v.contains("ref") && v["ref"].is_string()) {
        call.args.emplace_back(name, BindingRef{v["ref"].get<std::string>()});
      } else {
        MalformedProgram("argument '" + name + "' must be a string or {ref}");
      }
    }
    program.steps.push_back(std::move(call));
  }
  return program;
}

}  // namespace gridcomp
