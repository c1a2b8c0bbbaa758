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


// Independent oracles and random generators shared by the unit tests and
// the acceptance binary. Nothing here calls the code it is used to check.

#ifndef GRIDCOMP_TESTS_SUPPORT_H_
#define GRIDCOMP_TESTS_SUPPORT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gridcomp/language.h"
#include "gridcomp/random.h"
#include "gridcomp/world.h"

namespace gridcomp::testing {

// Cells of a box's block, enumerated one by one.
std::vector<Position> BlockCells(const Obj& box);

// Shortest action count from the agent to `target` by breadth-first search
// over (row, col, orientation) states.
int BfsPlanLength(const GridWorld& world, Position target);

// EM in tenths by long division: floor(1000 m / n), plus one when the
// remainder is at least half of n.
std::string EmOracle(int n_match, int n_total);

// Brute-force filters, one object at a time.
std::vector<std::string> OracleAttribute(const GridWorld& world,
                                         const std::vector<std::string>& ids,
                                         bool by_color, const std::string& value);
std::vector<std::string> OracleRelation(const GridWorld& world,
                                        const std::vector<std::string>& heads,
                                        const std::string& relation,
                                        const std::vector<std::string>& tails);
std::vector<std::string> OracleSize(const GridWorld& world,
                                    const std::vector<std::string>& ids, bool small);

// Random valid command with exactly `clauses` relative clauses. Only the
// last clause of a group may carry further clauses.
CommandAst RandomCommand(Rng& rng, int clauses);

// Random world through repeated placement; collisions are skipped.
GridWorld RandomWorld(Rng& rng, int d, int max_objects);

// A fresh temporary directory under the system temp path.
std::string TempDir(const std::string& tag);

}  // namespace gridcomp::testing

#endif  // GRIDCOMP_TESTS_SUPPORT_H_
