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


// Mechanized tool verification. A candidate tool sits behind an endpoint
// that speaks the tool.call protocol; it is checked against the reference
// toolset on 3 build examples and then 5 validation examples, all on one
// fixed world. The report carries the first divergence so that a tool
// author (human or model) can repair the tool and try again.

#ifndef GRIDCOMP_VERIFY_H_
#define GRIDCOMP_VERIFY_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridcomp/protocol.h"
#include "gridcomp/toolset.h"
#include "json.hpp"

namespace gridcomp {

// Request/response transport to a candidate. Throws kEndpointUnreachable
// when the transport fails and kProtocolViolation when the reply is not a
// JSON object.
class ToolEndpoint {
 public:
  virtual ~ToolEndpoint() = default;
  virtual nlohmann::json Request(const nlohmann::json& request) = 0;
};

// In-process session.
class LocalEndpoint : public ToolEndpoint {
 public:
  explicit LocalEndpoint(ToolInvoker invoker = InvokeTool);
  nlohmann::json Request(const nlohmann::json& request) override;

 private:
  Session session_;
};

// Child process speaking the protocol on its standard streams.
class ProcessEndpoint : public ToolEndpoint {
 public:
  // Throws kEndpointUnreachable if the program cannot be started.
  explicit ProcessEndpoint(std::vector<std::string> argv);
  ~ProcessEndpoint() override;
  ProcessEndpoint(const ProcessEndpoint&) = delete;
  ProcessEndpoint& operator=(const ProcessEndpoint&) = delete;

  nlohmann::json Request(const nlohmann::json& request) override;

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
};

// Unix-domain socket client.
class SocketEndpoint : public ToolEndpoint {
 public:
  // Throws kEndpointUnreachable if the connection fails.
  explicit SocketEndpoint(const std::string& path);
  ~SocketEndpoint() override;
  SocketEndpoint(const SocketEndpoint&) = delete;
  SocketEndpoint& operator=(const SocketEndpoint&) = delete;

  nlohmann::json Request(const nlohmann::json& request) override;

 private:
  int fd_ = -1;
  std::string pending_;
};

// Deliberately broken tools used to check that verification catches faults.
struct Mutant {
  std::string name;
  std::string tool;  // the tool it breaks
  std::string fault;
  ToolInvoker invoker;
};

// relation-swap, no-self-exclusion, size-swap, attribute-swap, tail-ignored,
// unique-first.
const std::vector<Mutant>& BuiltinMutants();
// Throws kInvalidArgument.
const Mutant& FindMutant(std::string_view name);

struct ToolExample {
  ToolArgs args;
};

// The fixed world every example runs on.
const GridWorld& VerificationWorld();
// 3 examples. Throws kUnknownTool.
const std::vector<ToolExample>& BuildExamples(std::string_view tool);
// 5 examples. Throws kUnknownTool.
const std::vector<ToolExample>& ValidationExamples(std::string_view tool);

struct Divergence {
  std::string phase;  // "build" or "validation"
  int index = 0;      // within the phase
  nlohmann::json inputs;
  nlohmann::json expected;  // ids, an id, or {error: kind}
  nlohmann::json actual;
};

struct VerificationReport {
  std::string tool;
  int build_passed = 0;       // of 3
  int validation_passed = 0;  // of 5
  std::optional<Divergence> first_divergence;
  bool pass = false;  // all 8 examples agree
  // "", "divergence" or "protocol-violation".
  std::string failure;
  std::string failure_phase;
  std::string message;
};

// Runs the candidate over the build examples, stopping at the first
// divergence, then over the validation examples likewise. An error reply,
// a malformed reply or a mismatched id stops everything and is reported as
// a protocol violation. Throws kEndpointUnreachable and kUnknownTool.
VerificationReport VerifyTool(ToolEndpoint& candidate, std::string_view tool);

std::string VerificationTable(const std::vector<VerificationReport>& reports);
nlohmann::json VerificationReportToJson(const VerificationReport& report);

}  // namespace gridcomp

#endif  // GRIDCOMP_VERIFY_H_
