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

#ifndef GRIDCOMP_ERROR_H_
#define GRIDCOMP_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gridcomp {

// Every failure the library reports. The kebab-case name of each kind is
// stable and appears in protocol error payloads.
enum class ErrorKind {
  // world
  kDimensionTooSmall,
  kAgentOutOfBounds,
  kCellOccupied,
  kDuplicateId,
  kOutOfBounds,
  kNotABox,
  kMalformedDocument,
  kInvariantViolation,
  kUnknownObject,
  // language
  kUnknownToken,
  kSyntaxError,
  kInvalidLexicon,
  kInvalidAst,
  // toolset / resolver
  kUnknownAttributeValue,
  kUnknownRelation,
  kAmbiguousTarget,
  kNoTarget,
  kUnknownBinding,
  kUnknownTool,
  kInvalidArgument,
  // navigation
  kUnknownTarget,
  kWalkedOffGrid,
  // benchgen
  kUnplaceable,
  kUnsatisfiableAfterRetries,
  kUnsatisfiableSpec,
  // harness
  kUnknownEpisodeId,
  kEndpointUnreachable,
  kProtocolViolation,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), kind_(kind), position_(position) {}

  ErrorKind kind() const { return kind_; }

  // Character offset (tokenizer), token index (parser) or action index
  // (simulator), when the failure has a location.
  std::optional<std::size_t> position() const { return position_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> position_;
};

}  // namespace gridcomp

#endif  // GRIDCOMP_ERROR_H_
