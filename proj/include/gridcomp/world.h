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

// Grid-world model: a d x d board holding attributed objects and one agent.
//
// Coordinates put row 0 at the top and column 0 at the left. A box of size s
// covers the s x s block whose top-left cell is its anchor; every other shape
// occupies only its anchor cell. Non-box objects never share a cell, boxes
// never overlap each other, and a box may contain non-box objects.
//
// GridWorld values are immutable; PlaceObject returns a new world.

#ifndef GRIDCOMP_WORLD_H_
#define GRIDCOMP_WORLD_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridcomp/error.h"

namespace gridcomp {

inline constexpr int kDefaultGridSize = 6;
inline constexpr int kMinObjectSize = 1;
inline constexpr int kMaxObjectSize = 4;
inline constexpr int kWorldSchemaVersion = 1;

enum class Shape { kCircle, kSquare, kCylinder, kBox };
enum class Color { kRed, kBlue, kGreen, kYellow };
enum class Orientation { kNorth, kEast, kSouth, kWest };

inline constexpr std::array<Shape, 4> kAllShapes = {
    Shape::kCircle, Shape::kSquare, Shape::kCylinder, Shape::kBox};
inline constexpr std::array<Color, 4> kAllColors = {
    Color::kRed, Color::kBlue, Color::kGreen, Color::kYellow};
inline constexpr std::array<Orientation, 4> kAllOrientations = {
    Orientation::kNorth, Orientation::kEast, Orientation::kSouth,
    Orientation::kWest};

std::string_view ShapeName(Shape shape);
std::string_view ColorName(Color color);
std::string_view OrientationName(Orientation orientation);
std::optional<Shape> ParseShape(std::string_view name);
std::optional<Color> ParseColor(std::string_view name);
std::optional<Orientation> ParseOrientation(std::string_view name);

struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

struct Obj {
  std::string id;
  Shape shape = Shape::kCircle;
  Color color = Color::kRed;
  int size = 1;
  Position position;

  friend bool operator==(const Obj&, const Obj&) = default;
};

struct Agent {
  Position position;
  Orientation orientation = Orientation::kSouth;

  friend bool operator==(const Agent&, const Agent&) = default;
};

// True iff `p` lies in the size x size block anchored at `box.position`.
// Throws kNotABox for any other shape.
bool Covers(const Obj& box, Position p);

class GridWorld {
 public:
  int dimension() const { return dimension_; }
  const Agent& agent() const { return agent_; }
  const std::vector<Obj>& objects() const { return objects_; }

  bool InBounds(Position p) const {
    return p.row >= 0 && p.col >= 0 && p.row < dimension_ &&
           p.col < dimension_;
  }

  // nullptr when no object has this id.
  const Obj* Find(std::string_view id) const;

  // Same world with the agent replaced.
  GridWorld WithAgent(const Agent& agent) const;

  friend bool operator==(const GridWorld&, const GridWorld&) = default;

 private:
  friend GridWorld NewWorld(int d, const Agent& agent);
  friend GridWorld PlaceObject(const GridWorld& world, const Obj& obj);

  GridWorld(int dimension, Agent agent)
      : dimension_(dimension), agent_(agent) {}

  int dimension_;
  Agent agent_;
  std::vector<Obj> objects_;
};

// Empty world. Errors: kDimensionTooSmall (d < 2), kAgentOutOfBounds.
GridWorld NewWorld(int d, const Agent& agent);

// Returns `world` plus `obj`; the input is left untouched. Errors:
// kInvariantViolation (size outside 1..4 or empty id), kOutOfBounds,
// kDuplicateId, kCellOccupied.
GridWorld PlaceObject(const GridWorld& world, const Obj& obj);

// JSON document: {schema_version, d, agent{row,col,orientation},
// objects[{id,shape,color,size,row,col}]}. Output is byte-stable.
std::string SerializeWorld(const GridWorld& world);

// Errors: kMalformedDocument for structural problems, kInvariantViolation
// when the document decodes but describes an invalid world.
GridWorld DeserializeWorld(std::string_view text);

}  // namespace gridcomp

#endif  // GRIDCOMP_WORLD_H_
