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


// Prompt pack: a plain-text bundle an external agent can be primed with.
//
//   === TOOLS ===
//   === INSTRUCTION ===
//   === DEMONSTRATION 1 === ... === DEMONSTRATION k ===
//   === TEST ===
//
// The test section holds {world} and {question} placeholders.

#ifndef GRIDCOMP_PROMPT_H_
#define GRIDCOMP_PROMPT_H_

#include <string>
#include <string_view>
#include <vector>

#include "gridcomp/benchgen.h"

namespace gridcomp {

inline constexpr int kDefaultDemonstrations = 3;

struct PromptPack {
  std::string tools;
  std::string instruction;
  std::vector<std::string> demonstrations;
  std::string test_slot;
};

std::string ToolDescriptionText();
std::string TaskInstructionText();

// Uses the first k episodes. Throws kInvalidArgument when k < 1 or there
// are fewer than k episodes.
std::string EmitPromptPack(const std::vector<Episode>& episodes, int k,
                           const Lexicon& lexicon = Lexicon::Default());

// Throws kMalformedDocument.
PromptPack ParsePromptPack(std::string_view text);

}  // namespace gridcomp

#endif  // GRIDCOMP_PROMPT_H_
