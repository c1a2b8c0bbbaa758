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

#include "gridcomp/toolset.h"

#include <algorithm>
#include <climits>

namespace gridcomp {
namespace {

const Obj& Resolve(const GridWorld& world, const std::string& id) {
  const Obj* obj = world.Find(id);
  if (obj == nullptr) {
    throw Error(ErrorKind::kUnknownObject, "object '" + id + "' is not in the world");
  }
  return *obj;
}

template <typename Pred>
ObjectSet Keep(const GridWorld& world, const ObjectSet& objects, Pred pred) {
  std::vector<std::string> kept;
  for (const std::string& id : objects.ids()) {
    if (pred(Resolve(world, id))) kept.push_back(id);
  }
  return ObjectSet(std::move(kept));
}

const ToolValue& Arg(const ToolArgs& args, std::string_view tool,
                     std::string_view name) {
  auto it = args.find(name);
  if (it == args.end()) {
    throw Error(ErrorKind::kInvalidArgument, std::string(tool) +
                                                 ": missing argument '" +
                                                 std::string(name) + "'");
  }
  return it->second;
}

const ObjectSet& SetArg(const ToolArgs& args, std::string_view tool,
                        std::string_view name) {
  const ToolValue& v = Arg(args, tool, name);
  if (!std::holds_alternative<ObjectSet>(v)) {
    throw Error(ErrorKind::kInvalidArgument, std::string(tool) + ": argument '" +
                                                 std::string(name) +
                                                 "' must be an object set");
  }
  return std::get<ObjectSet>(v);
}

const std::string& StringArg(const ToolArgs& args, std::string_view tool,
                             std::string_view name) {
  const ToolValue& v = Arg(args, tool, name);
  if (!std::holds_alternative<std::string>(v)) {
    throw Error(ErrorKind::kInvalidArgument, std::string(tool) + ": argument '" +
                                                 std::string(name) +
                                                 "' must be a string");
  }
  return std::get<std::string>(v);
}

}  // namespace

ObjectSet::ObjectSet(std::vector<std::string> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

ObjectSet ObjectSet::All(const GridWorld& world) {
  std::vector<std::string> ids;
  for (const Obj& o : world.objects()) ids.push_back(o.id);
  return ObjectSet(std::move(ids));
}

bool ObjectSet::Contains(std::string_view id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

void ObjectSet::CheckBound(const GridWorld& world) const {
  for (const std::string& id : ids_) Resolve(world, id);
}

ObjectSet FilterByAttribute(const GridWorld& world, const ObjectSet& objects,
                            const Attribute& attribute) {
  if (attribute.kind == AttributeKind::kColor) {
    auto color = ParseColor(attribute.value);
    if (!color) {
      throw Error(ErrorKind::kUnknownAttributeValue,
                  "unknown color '" + attribute.value + "'");
    }
    return Keep(world, objects, [&](const Obj& o) { return o.color == *color; });
  }
  if (attribute.value == kWildcardNoun) {
    return Keep(world, objects, [](const Obj&) { return true; });
  }
  auto shape = ParseShape(attribute.value);
  if (!shape) {
    throw Error(ErrorKind::kUnknownAttributeValue,
                "unknown shape '" + attribute.value + "'");
  }
  return Keep(world, objects, [&](const Obj& o) { return o.shape == *shape; });
}

bool RelationHolds(Relation relation, const Obj& head, const Obj& tail) {
  switch (relation) {
    case Relation::kSameRow: return head.position.row == tail.position.row;
    case Relation::kSameColumn: return head.position.col == tail.position.col;
    case Relation::kSameColor: return head.color == tail.color;
    case Relation::kSameShape: return head.shape == tail.shape;
    case Relation::kSameSize: return head.size == tail.size;
    case Relation::kInsideOf:
      return tail.shape == Shape::kBox && Covers(tail, head.position);
  }
  return false;
}

ObjectSet FilterRelationship(const GridWorld& world,
                             const ObjectSet& head_objects, Relation condition,
                             const ObjectSet& tail_objects) {
  std::vector<const Obj*> tails;
  for (const std::string& id : tail_objects.ids()) {
    tails.push_back(&Resolve(world, id));
  }
  return Keep(world, head_objects, [&](const Obj& head) {
    return std::any_of(tails.begin(), tails.end(), [&](const Obj* tail) {
      return tail->id != head.id && RelationHolds(condition, head, *tail);
    });
  });
}

ObjectSet FilterSize(const GridWorld& world, const ObjectSet& objects,
                     SizeWord size_word) {
  int lo = INT_MAX;
  int hi = INT_MIN;
  for (const std::string& id : objects.ids()) {
    const int s = Resolve(world, id).size;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const int wanted = size_word == SizeWord::kSmall ? lo : hi;
  return Keep(world, objects, [&](const Obj& o) { return o.size == wanted; });
}

std::string UniqueTarget(const ObjectSet& objects) {
  if (objects.empty()) {
    throw Error(ErrorKind::kNoTarget, "no object satisfies the description");
  }
  if (objects.size() > 1) {
    throw Error(ErrorKind::kAmbiguousTarget,
                std::to_string(objects.size()) +
                    " objects satisfy the description");
  }
  return objects.ids().front();
}

const std::vector<ToolDescriptor>& DescribeTools() {
  static const auto* tools = new std::vector<ToolDescriptor>{
      {std::string(kFilterByAttribute),
       {{"objects", "object_set", "candidate objects"},
        {"kind", "string", "\"color\" or \"shape\""},
        {"value", "string",
         "a color (red, blue, green, yellow) or a shape (circle, square, "
         "cylinder, box); the shape \"object\" matches every shape"}},
       "the candidates whose attribute equals the value, in input order",
       "Select objects by color or by shape."},
      {std::string(kFilterRelationship),
       {{"head_objects", "object_set", "objects the relative clause describes"},
        {"condition", "string",
         "one of same_row, same_column, same_color, same_shape, same_size, "
         "inside_of"},
        {"tail_objects", "object_set",
         "objects the clause refers to (the referent after the relation)"}},
       "the head objects related by the condition to at least one tail "
       "object other than themselves, in input order",
       "Apply a relative clause: keep heads that stand in the relation to "
       "some tail object."},
      {std::string(kFilterSize),
       {{"objects", "object_set", "candidate objects"},
        {"size_word", "string", "\"small\" or \"big\""}},
       "the candidates of minimum size (small) or maximum size (big) among "
       "the candidates; ties are all kept",
       "Resolve a relative size word against the other candidates."},
      {std::string(kUniqueTarget),
       {{"objects", "object_set", "the fully filtered candidates"}},
       "the id of the single remaining object; an error when none or several "
       "remain",
       "Commit to the target object."},
  };
  return *tools;
}

nlohmann::json ToolDescriptorToJson(const ToolDescriptor& descriptor) {
  nlohmann::json args = nlohmann::json::array();
  for (const ArgumentSpec& a : descriptor.arguments) {
    args.push_back(
        {{"name", a.name}, {"type", a.type}, {"description", a.description}});
  }
  return {{"name", descriptor.name},
          {"arguments", std::move(args)},
          {"output", descriptor.output},
          {"purpose", descriptor.purpose}};
}

ToolValue InvokeTool(const GridWorld& world, std::string_view name,
                     const ToolArgs& args) {
  if (name == kFilterByAttribute) {
    const std::string& kind = StringArg(args, name, "kind");
    Attribute attribute;
    if (kind == "color") {
      attribute.kind = AttributeKind::kColor;
    } else if (kind == "shape") {
      attribute.kind = AttributeKind::kShape;
    } else {
      throw Error(ErrorKind::kInvalidArgument,
                  "filter_by_attribute: kind must be \"color\" or \"shape\"");
    }
    attribute.value = StringArg(args, name, "value");
    return FilterByAttribute(world, SetArg(args, name, "objects"), attribute);
  }
  if (name == kFilterRelationship) {
    const std::string& condition = StringArg(args, name, "condition");
    auto relation = ParseRelation(condition);
    if (!relation) {
      throw Error(ErrorKind::kUnknownRelation,
                  "unknown relation '" + condition + "'");
    }
    return FilterRelationship(world, SetArg(args, name, "head_objects"),
                              *relation, SetArg(args, name, "tail_objects"));
  }
  if (name == kFilterSize) {
    const std::string& word = StringArg(args, name, "size_word");
    auto size_word = ParseSizeWord(word);
    if (!size_word) {
      throw Error(ErrorKind::kUnknownAttributeValue,
                  "unknown size word '" + word + "'");
    }
    return FilterSize(world, SetArg(args, name, "objects"), *size_word);
  }
  if (name == kUniqueTarget) {
    const ObjectSet& objects = SetArg(args, name, "objects");
    objects.CheckBound(world);
    return UniqueTarget(objects);
  }
  throw Error(ErrorKind::kUnknownTool, "unknown tool '" + std::string(name) + "'");
}

}  // namespace gridcomp
