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


#include "support.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <deque>
#include <filesystem>
#include <map>
#include <set>

#include <unistd.h>

namespace gridcomp::testing {

std::vector<Position> BlockCells(const Obj& box) {
  std::vector<Position> cells;
  for (int r = 0; r < box.size; ++r) {
    for (int c = 0; c < box.size; ++c) {
      cells.push_back({box.position.row + r, box.position.col + c});
    }
  }
  return cells;
}

int BfsPlanLength(const GridWorld& world, Position target) {
  // Orientation index: 0 north, 1 east, 2 south, 3 west (clockwise).
  static constexpr std::array<int, 4> kDr = {-1, 0, 1, 0};
  static constexpr std::array<int, 4> kDc = {0, 1, 0, -1};
  int start_o = 0;
  switch (world.agent().orientation) {
    case Orientation::kNorth: start_o = 0; break;
    case Orientation::kEast: start_o = 1; break;
    case Orientation::kSouth: start_o = 2; break;
    case Orientation::kWest: start_o = 3; break;
  }
  const int d = world.dimension();
  std::vector<int> dist(d * d * 4, -1);
  auto key = [d](int r, int c, int o) { return (r * d + c) * 4 + o; };
  std::deque<std::array<int, 3>> queue;
  const Position s = world.agent().position;
  dist[key(s.row, s.col, start_o)] = 0;
  queue.push_back({s.row, s.col, start_o});
  while (!queue.empty()) {
    auto [r, c, o] = queue.front();
    queue.pop_front();
    const int here = dist[key(r, c, o)];
    if (r == target.row && c == target.col) return here;
    std::vector<std::array<int, 3>> next = {{r, c, (o + 1) % 4}, {r, c, (o + 3) % 4}};
    const int nr = r + kDr[o];
    const int nc = c + kDc[o];
    if (nr >= 0 && nr < d && nc >= 0 && nc < d) next.push_back({nr, nc, o});
    for (const auto& n : next) {
      int& slot = dist[key(n[0], n[1], n[2])];
      if (slot < 0) {
        slot = here + 1;
        queue.push_back(n);
      }
    }
  }
  return -1;
}

std::string EmOracle(int n_match, int n_total) {
  if (n_total == 0) return "0.0";
  const long long scaled = 1000LL * n_match;
  long long tenths = scaled / n_total;
  if (2 * (scaled % n_total) >= n_total) ++tenths;
  std::string digits = std::to_string(tenths);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return digits.substr(0, digits.size() - 1) + "." + digits.back();
}

namespace {

const Obj& Get(const GridWorld& world, const std::string& id) {
  for (const Obj& o : world.objects()) {
    if (o.id == id) return o;
  }
  throw std::runtime_error("oracle: no object " + id);
}

const char* ColorText(Color c) {
  switch (c) {
    case Color::kRed: return "red";
    case Color::kBlue: return "blue";
    case Color::kGreen: return "green";
    case Color::kYellow: return "yellow";
  }
  return "";
}

const char* ShapeText(Shape s) {
  switch (s) {
    case Shape::kCircle: return "circle";
    case Shape::kSquare: return "square";
    case Shape::kCylinder: return "cylinder";
    case Shape::kBox: return "box";
  }
  return "";
}

bool Related(const std::string& relation, const Obj& h, const Obj& t) {
  if (relation == "same_row") return h.position.row == t.position.row;
  if (relation == "same_column") return h.position.col == t.position.col;
  if (relation == "same_color") return h.color == t.color;
  if (relation == "same_shape") return h.shape == t.shape;
  if (relation == "same_size") return h.size == t.size;
  if (relation == "inside_of") {
    if (t.shape != Shape::kBox) return false;
    for (const Position& p : BlockCells(t)) {
      if (p == h.position) return true;
    }
    return false;
  }
  throw std::runtime_error("oracle: unknown relation " + relation);
}

}  // namespace

std::vector<std::string> OracleAttribute(const GridWorld& world,
                                         const std::vector<std::string>& ids,
                                         bool by_color, const std::string& value) {
  std::vector<std::string> out;
  for (const std::string& id : ids) {
    const Obj& o = Get(world, id);
    const bool hit = by_color ? value == ColorText(o.color)
                              : (value == "object" || value == ShapeText(o.shape));
    if (hit) out.push_back(id);
  }
  return out;
}

std::vector<std::string> OracleRelation(const GridWorld& world,
                                        const std::vector<std::string>& heads,
                                        const std::string& relation,
                                        const std::vector<std::string>& tails) {
  std::vector<std::string> out;
  for (const std::string& h : heads) {
    bool witness = false;
    for (const std::string& t : tails) {
      if (t != h && Related(relation, Get(world, h), Get(world, t))) witness = true;
    }
    if (witness) out.push_back(h);
  }
  return out;
}

std::vector<std::string> OracleSize(const GridWorld& world,
                                    const std::vector<std::string>& ids, bool small) {
  std::vector<std::string> out;
  for (const std::string& id : ids) {
    const int s = Get(world, id).size;
    bool extreme = true;
    for (const std::string& other : ids) {
      const int t = Get(world, other).size;
      if (small ? t < s : t > s) extreme = false;
    }
    if (extreme) out.push_back(id);
  }
  return out;
}

namespace {

ReferentAst RandomReferent(Rng& rng, bool top, bool box_tail,
                           const std::vector<int>& groups, std::size_t level) {
  ReferentAst r;
  r.determiner = top ? Determiner::kThe : Determiner::kA;
  if (rng.Chance(1, 3)) r.size_word = rng.Chance(1, 2) ? SizeWord::kSmall : SizeWord::kBig;
  if (rng.Chance(1, 2)) r.color = kAllColors[rng.Uniform(4)];
  if (box_tail) {
    if (rng.Chance(2, 3)) r.noun = Shape::kBox;
  } else if (rng.Chance(4, 5)) {
    r.noun = kAllShapes[rng.Uniform(4)];
  }
  if (level < groups.size()) {
    for (int j = 0; j < groups[level]; ++j) {
      RelClause clause;
      clause.relation = kAllRelations[rng.Uniform(6)];
      const bool last = j + 1 == groups[level];
      clause.tail = RandomReferent(rng, false, clause.relation == Relation::kInsideOf,
                                   groups, last ? level + 1 : groups.size());
      r.clauses.push_back(std::move(clause));
    }
  }
  return r;
}

}  // namespace

CommandAst RandomCommand(Rng& rng, int clauses) {
  std::vector<int> groups;
  int left = clauses;
  while (left > 0) {
    const int g = 1 + rng.Uniform(left);
    groups.push_back(g);
    left -= g;
  }
  CommandAst cmd;
  cmd.target = RandomReferent(rng, true, false, groups, 0);
  return cmd;
}

GridWorld RandomWorld(Rng& rng, int d, int max_objects) {
  GridWorld world = NewWorld(d, Agent{{rng.Uniform(d), rng.Uniform(d)},
                                      kAllOrientations[rng.Uniform(4)]});
  const int n = rng.Between(0, max_objects);
  for (int i = 0; i < n; ++i) {
    Obj o;
    o.id = "o" + std::to_string(i);
    o.shape = kAllShapes[rng.Uniform(4)];
    o.color = kAllColors[rng.Uniform(4)];
    o.size = rng.Between(1, 4);
    const int extent = o.shape == Shape::kBox ? o.size : 1;
    if (extent > d) continue;
    o.position = {rng.Uniform(d - extent + 1), rng.Uniform(d - extent + 1)};
    try {
      world = PlaceObject(world, o);
    } catch (const std::exception&) {
    }
  }
  return world;
}

std::string TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto path = std::filesystem::temp_directory_path() /
                    ("gridcomp-" + tag + "-" + std::to_string(::getpid()) + "-" +
                     std::to_string(counter++));
  std::filesystem::remove_all(path);
  std::filesystem::create_directories(path);
  return path.string();
}

}  // namespace gridcomp::testing
