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

#include "gridcomp/world.h"

#include <algorithm>
#include <string>

#include "gridcomp/world_json.h"

namespace gridcomp {
namespace {

using nlohmann::json;

std::string PositionText(Position p) {
  return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

int Extent(const Obj& obj) {
  return obj.shape == Shape::kBox ? obj.size : 1;
}

bool BlocksOverlap(const Obj& a, const Obj& b) {
  const int ea = Extent(a);
  const int eb = Extent(b);
  return a.position.row < b.position.row + eb &&
         b.position.row < a.position.row + ea &&
         a.position.col < b.position.col + eb &&
         b.position.col < a.position.col + ea;
}

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorKind::kMalformedDocument, "malformed world document: " + what);
}

const json& Field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) Malformed(std::string("missing field '") + name + "'");
  return *it;
}

int IntField(const json& doc, const char* name) {
  const json& v = Field(doc, name);
  if (!v.is_number_integer()) {
    Malformed(std::string("field '") + name + "' must be an integer");
  }
  return v.get<int>();
}

std::string StringField(const json& doc, const char* name) {
  const json& v = Field(doc, name);
  if (!v.is_string()) {
    Malformed(std::string("field '") + name + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

std::string_view ShapeName(Shape shape) {
  switch (shape) {
    case Shape::kCircle: return "circle";
    case Shape::kSquare: return "square";
    case Shape::kCylinder: return "cylinder";
    case Shape::kBox: return "box";
  }
  return "?";
}

std::string_view ColorName(Color color) {
  switch (color) {
    case Color::kRed: return "red";
    case Color::kBlue: return "blue";
    case Color::kGreen: return "green";
    case Color::kYellow: return "yellow";
  }
  return "?";
}

std::string_view OrientationName(Orientation orientation) {
  switch (orientation) {
    case Orientation::kNorth: return "north";
    case Orientation::kEast: return "east";
    case Orientation::kSouth: return "south";
    case Orientation::kWest: return "west";
  }
  return "?";
}

std::optional<Shape> ParseShape(std::string_view name) {
  for (Shape s : kAllShapes) {
    if (ShapeName(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<Color> ParseColor(std::string_view name) {
  for (Color c : kAllColors) {
    if (ColorName(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<Orientation> ParseOrientation(std::string_view name) {
  for (Orientation o : kAllOrientations) {
    if (OrientationName(o) == name) return o;
  }
  return std::nullopt;
}

bool Covers(const Obj& box, Position p) {
  if (box.shape != Shape::kBox) {
    throw Error(ErrorKind::kNotABox, "object '" + box.id + "' is not a box");
  }
  return p.row >= box.position.row && p.row < box.position.row + box.size &&
         p.col >= box.position.col && p.col < box.position.col + box.size;
}

const Obj* GridWorld::Find(std::string_view id) const {
  auto it = std::find_if(objects_.begin(), objects_.end(),
                         [&](const Obj& o) { return o.id == id; });
  return it == objects_.end() ? nullptr : &*it;
}

GridWorld GridWorld::WithAgent(const Agent& agent) const {
  if (!InBounds(agent.position)) {
    throw Error(ErrorKind::kAgentOutOfBounds,
                "agent at " + PositionText(agent.position) +
                    " is outside the grid");
  }
  GridWorld copy = *this;
  copy.agent_ = agent;
  return copy;
}

GridWorld NewWorld(int d, const Agent& agent) {
  if (d < 2) {
    throw Error(ErrorKind::kDimensionTooSmall,
                "grid dimension " + std::to_string(d) + " is below 2");
  }
  GridWorld world(d, agent);
  if (!world.InBounds(agent.position)) {
    throw Error(ErrorKind::kAgentOutOfBounds,
                "agent at " + PositionText(agent.position) +
                    " is outside a " + std::to_string(d) + "x" +
                    std::to_string(d) + " grid");
  }
  return world;
}

GridWorld PlaceObject(const GridWorld& world, const Obj& obj) {
  if (obj.id.empty()) {
    throw Error(ErrorKind::kInvariantViolation, "object id must not be empty");
  }
  if (obj.size < kMinObjectSize || obj.size > kMaxObjectSize) {
    throw Error(ErrorKind::kInvariantViolation,
                "object '" + obj.id + "' has size " + std::to_string(obj.size) +
                    " outside 1..4");
  }
  const int extent = Extent(obj);
  const Position far{obj.position.row + extent - 1,
                     obj.position.col + extent - 1};
  if (!world.InBounds(obj.position) || !world.InBounds(far)) {
    throw Error(ErrorKind::kOutOfBounds,
                "object '" + obj.id + "' at " + PositionText(obj.position) +
                    " does not fit in the grid");
  }
  if (world.Find(obj.id) != nullptr) {
    throw Error(ErrorKind::kDuplicateId, "duplicate object id '" + obj.id + "'");
  }
  for (const Obj& other : world.objects()) {
    const bool obj_box = obj.shape == Shape::kBox;
    const bool other_box = other.shape == Shape::kBox;
    bool collides = false;
    if (obj_box && other_box) {
      collides = BlocksOverlap(obj, other);
    } else if (!obj_box && !other_box) {
      collides = obj.position == other.position;
    }
    if (collides) {
      throw Error(ErrorKind::kCellOccupied,
                  "object '" + obj.id + "' collides with '" + other.id + "'");
    }
  }
  GridWorld next = world;
  next.objects_.push_back(obj);
  return next;
}

json WorldToJson(const GridWorld& world) {
  json objects = json::array();
  for (const Obj& o : world.objects()) {
    objects.push_back({{"id", o.id},
                       {"shape", ShapeName(o.shape)},
                       {"color", ColorName(o.color)},
                       {"size", o.size},
                       {"row", o.position.row},
                       {"col", o.position.col}});
  }
  const Agent& a = world.agent();
  return {{"schema_version", kWorldSchemaVersion},
          {"d", world.dimension()},
          {"agent",
           {{"row", a.position.row},
            {"col", a.position.col},
            {"orientation", OrientationName(a.orientation)}}},
          {"objects", std::move(objects)}};
}

GridWorld WorldFromJson(const json& doc) {
  if (!doc.is_object()) Malformed("document must be an object");
  const int version = IntField(doc, "schema_version");
  if (version != kWorldSchemaVersion) {
    Malformed("unsupported schema_version " + std::to_string(version));
  }
  const int d = IntField(doc, "d");
  const json& agent_doc = Field(doc, "agent");
  if (!agent_doc.is_object()) Malformed("agent must be an object");
  const std::string orientation_name = StringField(agent_doc, "orientation");
  auto orientation = ParseOrientation(orientation_name);
  if (!orientation) Malformed("unknown orientation '" + orientation_name + "'");
  Agent agent{{IntField(agent_doc, "row"), IntField(agent_doc, "col")},
              *orientation};
  const json& objects = Field(doc, "objects");
  if (!objects.is_array()) Malformed("objects must be an array");

  // Structural decoding first, then invariant checks via the constructors.
  std::vector<Obj> decoded;
  for (const json& od : objects) {
    if (!od.is_object()) Malformed("object entries must be objects");
    const std::string shape_name = StringField(od, "shape");
    const std::string color_name = StringField(od, "color");
    auto shape = ParseShape(shape_name);
    auto color = ParseColor(color_name);
    if (!shape) Malformed("unknown shape '" + shape_name + "'");
    if (!color) Malformed("unknown color '" + color_name + "'");
    decoded.push_back(Obj{StringField(od, "id"), *shape, *color,
                          IntField(od, "size"),
                          {IntField(od, "row"), IntField(od, "col")}});
  }
  try {
    GridWorld world = NewWorld(d, agent);
    for (const Obj& o : decoded) world = PlaceObject(world, o);
    return world;
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvariantViolation,
                std::string("invalid world: ") + e.what());
  }
}

std::string SerializeWorld(const GridWorld& world) {
  return WorldToJson(world).dump();
}

GridWorld DeserializeWorld(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr,
                         /*allow_exceptions=*/false);
  if (doc.is_discarded()) Malformed("not valid JSON");
  return WorldFromJson(doc);
}

}  // namespace gridcomp
