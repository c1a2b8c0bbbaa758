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

#include "gridcomp/navigation.h"

#include <cstdlib>
#include <optional>
#include <sstream>

namespace gridcomp {
namespace {

// Turns needed to face `to` from `from`, appended to `out`.
void AppendTurns(Orientation from, Orientation to, std::vector<Action>& out) {
  if (TurnRight(from) == to) {
    out.push_back(Action::kTurnRight);
  } else if (TurnLeft(from) == to) {
    out.push_back(Action::kTurnLeft);
  } else if (from != to) {
    out.push_back(Action::kTurnRight);
    out.push_back(Action::kTurnRight);
  }
}

// Straight legs in the given order; a leg of length zero is skipped.
std::vector<Action> LegPlan(Orientation facing,
                            const std::vector<std::pair<Orientation, int>>& legs) {
  std::vector<Action> plan;
  for (const auto& [direction, length] : legs) {
    if (length == 0) continue;
    AppendTurns(facing, direction, plan);
    facing = direction;
    plan.insert(plan.end(), length, Action::kWalk);
  }
  return plan;
}

}  // namespace

std::string_view ActionName(Action action) {
  switch (action) {
    case Action::kTurnLeft: return "turn_left";
    case Action::kTurnRight: return "turn_right";
    case Action::kWalk: return "walk";
  }
  return "?";
}

std::string ActionsToString(const std::vector<Action>& actions) {
  std::string out;
  for (Action a : actions) {
    if (!out.empty()) out += ' ';
    out += ActionName(a);
  }
  return out;
}

std::vector<Action> ActionsFromString(std::string_view text) {
  std::vector<Action> actions;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == "turn_left") {
      actions.push_back(Action::kTurnLeft);
    } else if (token == "turn_right") {
      actions.push_back(Action::kTurnRight);
    } else if (token == "walk") {
      actions.push_back(Action::kWalk);
    } else {
      throw Error(ErrorKind::kInvalidArgument, "unknown action '" + token + "'");
    }
  }
  return actions;
}

Orientation TurnLeft(Orientation o) {
  switch (o) {
    case Orientation::kNorth: return Orientation::kWest;
    case Orientation::kWest: return Orientation::kSouth;
    case Orientation::kSouth: return Orientation::kEast;
    case Orientation::kEast: return Orientation::kNorth;
  }
  return o;
}

Orientation TurnRight(Orientation o) {
  switch (o) {
    case Orientation::kNorth: return Orientation::kEast;
    case Orientation::kEast: return Orientation::kSouth;
    case Orientation::kSouth: return Orientation::kWest;
    case Orientation::kWest: return Orientation::kNorth;
  }
  return o;
}

Position Forward(Position p, Orientation o) {
  switch (o) {
    case Orientation::kNorth: return {p.row - 1, p.col};
    case Orientation::kSouth: return {p.row + 1, p.col};
    case Orientation::kEast: return {p.row, p.col + 1};
    case Orientation::kWest: return {p.row, p.col - 1};
  }
  return p;
}

std::vector<Action> PlanActions(const GridWorld& world, std::string_view target_id) {
  const Obj* target = world.Find(target_id);
  if (target == nullptr) {
    throw Error(ErrorKind::kUnknownTarget,
                "target '" + std::string(target_id) + "' is not in the world");
  }
  const Agent& agent = world.agent();
  const int dr = target->position.row - agent.position.row;
  const int dc = target->position.col - agent.position.col;
  const Orientation vertical = dr >= 0 ? Orientation::kSouth : Orientation::kNorth;
  const Orientation horizontal = dc >= 0 ? Orientation::kEast : Orientation::kWest;

  // Any shortest route is an L with at most one bend; only the leg order
  // can change the number of turns.
  std::vector<Action> row_first = LegPlan(
      agent.orientation, {{vertical, std::abs(dr)}, {horizontal, std::abs(dc)}});
  std::vector<Action> col_first = LegPlan(
      agent.orientation, {{horizontal, std::abs(dc)}, {vertical, std::abs(dr)}});
  return col_first.size() < row_first.size() ? col_first : row_first;
}

Agent Simulate(const GridWorld& world, const std::vector<Action>& actions) {
  Agent agent = world.agent();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    switch (actions[i]) {
      case Action::kTurnLeft:
        agent.orientation = TurnLeft(agent.orientation);
        break;
      case Action::kTurnRight:
        agent.orientation = TurnRight(agent.orientation);
        break;
      case Action::kWalk: {
        const Position next = Forward(agent.position, agent.orientation);
        if (!world.InBounds(next)) {
          throw Error(ErrorKind::kWalkedOffGrid,
                      "action " + std::to_string(i) + " walks off the grid", i);
        }
        agent.position = next;
        break;
      }
    }
  }
  return agent;
}

}  // namespace gridcomp
