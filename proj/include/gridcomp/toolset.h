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

// Reference tools over object sets. Every filter returns a subset of its
// input in input order.

#ifndef GRIDCOMP_TOOLSET_H_
#define GRIDCOMP_TOOLSET_H_

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridcomp/language.h"
#include "gridcomp/world.h"
#include "json.hpp"

namespace gridcomp {

// Sorted, duplicate-free list of object ids.
class ObjectSet {
 public:
  ObjectSet() = default;
  explicit ObjectSet(std::vector<std::string> ids);

  static ObjectSet All(const GridWorld& world);

  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool Contains(std::string_view id) const;

  // Throws kUnknownObject for ids missing from `world`.
  void CheckBound(const GridWorld& world) const;

  friend bool operator==(const ObjectSet&, const ObjectSet&) = default;

 private:
  std::vector<std::string> ids_;
};

enum class AttributeKind { kColor, kShape };

struct Attribute {
  AttributeKind kind = AttributeKind::kColor;
  // Color name, shape name, or "object" (matches every shape).
  std::string value;
};

// Errors: kUnknownAttributeValue, kUnknownObject.
ObjectSet FilterByAttribute(const GridWorld& world, const ObjectSet& objects,
                            const Attribute& attribute);

// Heads with at least one tail witness t != h for which the relation holds.
bool RelationHolds(Relation relation, const Obj& head, const Obj& tail);
ObjectSet FilterRelationship(const GridWorld& world,
                             const ObjectSet& head_objects, Relation condition,
                             const ObjectSet& tail_objects);

// Keeps the objects whose size equals the minimum (small) or maximum (big)
// size present in `objects`.
ObjectSet FilterSize(const GridWorld& world, const ObjectSet& objects,
                     SizeWord size_word);

// Errors: kAmbiguousTarget, kNoTarget.
std::string UniqueTarget(const ObjectSet& objects);

// ---------------------------------------------------------------------------
// Registry

inline constexpr std::string_view kFilterByAttribute = "filter_by_attribute";
inline constexpr std::string_view kFilterRelationship = "filter_relationship";
inline constexpr std::string_view kFilterSize = "filter_size";
inline constexpr std::string_view kUniqueTarget = "unique_target";

struct ArgumentSpec {
  std::string name;
  std::string type;  // "object_set" or "string"
  std::string description;
};

struct ToolDescriptor {
  std::string name;
  std::vector<ArgumentSpec> arguments;
  std::string output;
  std::string purpose;
};

const std::vector<ToolDescriptor>& DescribeTools();
nlohmann::json ToolDescriptorToJson(const ToolDescriptor& descriptor);

// Untyped tool invocation shared by the program executor and the protocol
// server. Argument values are object sets or strings; the result is an
// object set, or an object id for unique_target.
using ToolValue = std::variant<ObjectSet, std::string>;
using ToolArgs = std::map<std::string, ToolValue, std::less<>>;

// Errors: kUnknownTool, kInvalidArgument for missing or mistyped arguments,
// plus whatever the tool itself raises.
ToolValue InvokeTool(const GridWorld& world, std::string_view name,
                     const ToolArgs& args);

}  // namespace gridcomp

#endif  // GRIDCOMP_TOOLSET_H_
