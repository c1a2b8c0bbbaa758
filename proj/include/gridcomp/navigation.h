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

#ifndef GRIDCOMP_NAVIGATION_H_
#define GRIDCOMP_NAVIGATION_H_

#include <string>
#include <string_view>
#include <vector>

#include "gridcomp/world.h"

namespace gridcomp {

enum class Action { kTurnLeft, kTurnRight, kWalk };

std::string_view ActionName(Action action);  // "turn_left", ...

// Space-separated lowercase tokens; the empty plan is "".
std::string ActionsToString(const std::vector<Action>& actions);
// Throws kInvalidArgument on unknown tokens.
std::vector<Action> ActionsFromString(std::string_view text);

Orientation TurnLeft(Orientation o);
Orientation TurnRight(Orientation o);
// One step forward; may leave the grid.
Position Forward(Position p, Orientation o);

// Shortest action sequence putting the agent on the target's anchor cell.
// Objects are not obstacles. Among shortest plans the row leg comes first
// unless going column-first is strictly shorter, and a half turn is two
// right turns. Throws kUnknownTarget.
std::vector<Action> PlanActions(const GridWorld& world, std::string_view target_id);

// Folds the actions over the world's agent. Throws kWalkedOffGrid with the
// index of the offending action.
Agent Simulate(const GridWorld& world, const std::vector<Action>& actions);

}  // namespace gridcomp

#endif  // GRIDCOMP_NAVIGATION_H_
