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

// Compiles a parsed command into a straight-line tool program and runs it.
//
// Each referent becomes a pipeline, tails before heads:
//
//   filter_by_attribute(shape) -> filter_by_attribute(color)?
//     -> filter_relationship per clause -> filter_size?
//
// and the top-level pipeline ends in unique_target. The size word is applied
// last, so it compares only objects that passed every other filter of the
// same referent. DenoteBruteForce computes the same denotation with plain
// loops and no toolset code; the two are checked against each other.

#ifndef GRIDCOMP_RESOLVER_H_
#define GRIDCOMP_RESOLVER_H_

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gridcomp/language.h"
#include "gridcomp/toolset.h"
#include "gridcomp/world.h"
#include "json.hpp"

namespace gridcomp {

// Pre-bound name for the set of all objects in the world.
inline constexpr std::string_view kAllBinding = "all";
inline constexpr std::string_view kTargetBinding = "target";

struct BindingRef {
  std::string name;

  friend bool operator==(const BindingRef&, const BindingRef&) = default;
};

// A literal string or a reference to an earlier output.
using ArgBinding = std::variant<std::string, BindingRef>;

struct ToolCall {
  std::string tool;
  std::vector<std::pair<std::string, ArgBinding>> args;  // descriptor order
  std::string output;
  std::string comment;

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct ToolProgram {
  std::vector<ToolCall> steps;
  std::string target;  // binding holding the answer

  friend bool operator==(const ToolProgram&, const ToolProgram&) = default;
};

ToolProgram Compile(const CommandAst& command,
                    const Lexicon& lexicon = Lexicon::Default());

// Throws kUnknownBinding when a step reads a name that no earlier step
// bound, kUnknownTool for unregistered tools, and kInvalidArgument when the
// program does not end in unique_target writing `target`.
void ValidateProgram(const ToolProgram& program);

// Runs the steps in order and returns the target id. Tool errors
// (kAmbiguousTarget, kNoTarget, ...) propagate.
std::string Execute(const ToolProgram& program, const GridWorld& world);

ObjectSet DenoteBruteForce(const ReferentAst& referent, const GridWorld& world);
inline ObjectSet DenoteBruteForce(const CommandAst& command,
                                  const GridWorld& world) {
  return DenoteBruteForce(command.target, world);
}

// Code-style listing: world document, question, one line per tool call with
// the step comment above it whenever the step changes, then the answer.
std::string RenderDemonstration(const CommandAst& command,
                                const GridWorld& world,
                                const ToolProgram& program,
                                const Lexicon& lexicon = Lexicon::Default());

// {steps: [{tool, args: {name: "literal" | {ref: name}}, output, comment}],
//  target}
nlohmann::json ProgramToJson(const ToolProgram& program);
// Throws kMalformedDocument.
ToolProgram ProgramFromJson(const nlohmann::json& doc);

}  // namespace gridcomp

#endif  // GRIDCOMP_RESOLVER_H_
