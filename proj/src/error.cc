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

#include "gridcomp/error.h"

namespace gridcomp {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionTooSmall: return "dimension-too-small";
    case ErrorKind::kAgentOutOfBounds: return "agent-out-of-bounds";
    case ErrorKind::kCellOccupied: return "cell-occupied";
    case ErrorKind::kDuplicateId: return "duplicate-id";
    case ErrorKind::kOutOfBounds: return "out-of-bounds";
    case ErrorKind::kNotABox: return "not-a-box";
    case ErrorKind::kMalformedDocument: return "malformed-document";
    case ErrorKind::kInvariantViolation: return "invariant-violation";
    case ErrorKind::kUnknownObject: return "unknown-object";
    case ErrorKind::kUnknownToken: return "unknown-token";
    case ErrorKind::kSyntaxError: return "syntax-error";
    case ErrorKind::kInvalidLexicon: return "invalid-lexicon";
    case ErrorKind::kInvalidAst: return "invalid-ast";
    case ErrorKind::kUnknownAttributeValue: return "unknown-attribute-value";
    case ErrorKind::kUnknownRelation: return "unknown-relation";
    case ErrorKind::kAmbiguousTarget: return "ambiguous-target";
    case ErrorKind::kNoTarget: return "no-target";
    case ErrorKind::kUnknownBinding: return "unknown-binding";
    case ErrorKind::kUnknownTool: return "unknown-tool";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kUnknownTarget: return "unknown-target";
    case ErrorKind::kWalkedOffGrid: return "walked-off-grid";
    case ErrorKind::kUnplaceable: return "unplaceable";
    case ErrorKind::kUnsatisfiableAfterRetries:
      return "unsatisfiable-after-retries";
    case ErrorKind::kUnsatisfiableSpec: return "unsatisfiable-spec";
    case ErrorKind::kUnknownEpisodeId: return "unknown-episode-id";
    case ErrorKind::kEndpointUnreachable: return "endpoint-unreachable";
    case ErrorKind::kProtocolViolation: return "protocol-violation";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace gridcomp
