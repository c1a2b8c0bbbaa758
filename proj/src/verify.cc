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


#include "gridcomp/verify.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <thread>

#include "gridcomp/world_json.h"

namespace gridcomp {
namespace {

using nlohmann::json;

constexpr int kReplyTimeoutMs = 10000;

[[noreturn]] void Unreachable(const std::string& what) {
  throw Error(ErrorKind::kEndpointUnreachable, what);
}

const ObjectSet& SetArg(const ToolArgs& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || !std::holds_alternative<ObjectSet>(it->second)) {
    throw Error(ErrorKind::kInvalidArgument, std::string("missing object set '") + key + "'");
  }
  return std::get<ObjectSet>(it->second);
}

const std::string& StrArg(const ToolArgs& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || !std::holds_alternative<std::string>(it->second)) {
    throw Error(ErrorKind::kInvalidArgument, std::string("missing string '") + key + "'");
  }
  return std::get<std::string>(it->second);
}

// Writes one line, then reads one line, from a pair of descriptors.
json LineRoundTrip(int out_fd, int in_fd, std::string& pending, const json& request,
                   bool socket) {
  std::string line = request.dump() + "\n";
  std::string_view rest(line);
  while (!rest.empty()) {
    const ssize_t n = socket ? ::send(out_fd, rest.data(), rest.size(), MSG_NOSIGNAL)
                             : ::write(out_fd, rest.data(), rest.size());
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) Unreachable(std::string("write failed: ") + std::strerror(errno));
    rest.remove_prefix(static_cast<std::size_t>(n));
  }
  std::size_t nl;
  while ((nl = pending.find('\n')) == std::string::npos) {
    pollfd pfd{in_fd, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, kReplyTimeoutMs);
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) Unreachable("no reply within timeout");
    char chunk[4096];
    const ssize_t n = ::read(in_fd, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) Unreachable("endpoint closed the connection");
    pending.append(chunk, static_cast<std::size_t>(n));
  }
  const std::string reply = pending.substr(0, nl);
  pending.erase(0, nl + 1);
  json doc = json::parse(reply, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kProtocolViolation, "reply is not a JSON object: " + reply);
  }
  return doc;
}

// --- mutants -------------------------------------------------------------

ToolValue RelationSwap(const GridWorld& w, std::string_view name, const ToolArgs& args) {
  if (name != kFilterRelationship) return InvokeTool(w, name, args);
  ToolArgs changed = args;
  const std::string& c = StrArg(args, "condition");
  if (c == "same_row") changed["condition"] = std::string("same_column");
  if (c == "same_column") changed["condition"] = std::string("same_row");
  return InvokeTool(w, name, changed);
}

ToolValue NoSelfExclusion(const GridWorld& w, std::string_view name,
                          const ToolArgs& args) {
  if (name != kFilterRelationship) return InvokeTool(w, name, args);
  auto relation = ParseRelation(StrArg(args, "condition"));
  if (!relation) return InvokeTool(w, name, args);
  const ObjectSet& tails = SetArg(args, "tail_objects");
  std::vector<std::string> keep;
  for (const std::string& h : SetArg(args, "head_objects").ids()) {
    for (const std::string& t : tails.ids()) {
      if (RelationHolds(*relation, *w.Find(h), *w.Find(t))) {
        keep.push_back(h);
        break;
      }
    }
  }
  return ObjectSet(std::move(keep));
}

ToolValue SizeSwap(const GridWorld& w, std::string_view name, const ToolArgs& args) {
  if (name != kFilterSize) return InvokeTool(w, name, args);
  ToolArgs changed = args;
  const std::string& word = StrArg(args, "size_word");
  changed["size_word"] = std::string(word == "small" ? "big" : "small");
  return InvokeTool(w, name, changed);
}

ToolValue AttributeSwap(const GridWorld& w, std::string_view name,
                        const ToolArgs& args) {
  if (name != kFilterByAttribute) return InvokeTool(w, name, args);
  const bool color = StrArg(args, "kind") == "color";
  const std::string& value = StrArg(args, "value");
  std::vector<std::string> keep;
  for (const std::string& id : SetArg(args, "objects").ids()) {
    const Obj& o = *w.Find(id);
    // Reads the other attribute of the object.
    const std::string_view seen = color ? ShapeName(o.shape) : ColorName(o.color);
    if (value == "object" || seen == value) keep.push_back(id);
  }
  return ObjectSet(std::move(keep));
}

ToolValue TailIgnored(const GridWorld& w, std::string_view name, const ToolArgs& args) {
  if (name != kFilterRelationship) return InvokeTool(w, name, args);
  ToolArgs changed = args;
  changed["tail_objects"] = ObjectSet::All(w);
  return InvokeTool(w, name, changed);
}

ToolValue UniqueFirst(const GridWorld& w, std::string_view name, const ToolArgs& args) {
  if (name != kUniqueTarget) return InvokeTool(w, name, args);
  const ObjectSet& objects = SetArg(args, "objects");
  if (objects.empty()) return InvokeTool(w, name, args);
  return objects.ids().front();
}

// --- examples ------------------------------------------------------------

ObjectSet Ids(std::initializer_list<const char*> ids) {
  return ObjectSet(std::vector<std::string>(ids.begin(), ids.end()));
}

ToolArgs AttributeArgs(ObjectSet objects, const char* kind, const char* value) {
  return {{"objects", std::move(objects)}, {"kind", std::string(kind)},
          {"value", std::string(value)}};
}

ToolArgs RelationArgs(ObjectSet heads, const char* condition, ObjectSet tails) {
  return {{"head_objects", std::move(heads)},
          {"condition", std::string(condition)},
          {"tail_objects", std::move(tails)}};
}

ToolArgs SizeArgs(ObjectSet objects, const char* word) {
  return {{"objects", std::move(objects)}, {"size_word", std::string(word)}};
}

ToolArgs UniqueArgs(ObjectSet objects) { return {{"objects", std::move(objects)}}; }

struct ExampleSet {
  std::vector<ToolExample> build;
  std::vector<ToolExample> validation;
};

const ExampleSet& ExamplesFor(std::string_view tool) {
  static const auto* table = [] {
    const ObjectSet all = ObjectSet::All(VerificationWorld());
    auto* t = new std::map<std::string, ExampleSet, std::less<>>;
    (*t)[std::string(kFilterByAttribute)] = {
        {{AttributeArgs(all, "color", "red")},
         {AttributeArgs(all, "shape", "square")},
         {AttributeArgs(Ids({"o1", "o3", "o6"}), "color", "green")}},
        {{AttributeArgs(all, "shape", "object")},
         {AttributeArgs(all, "color", "yellow")},
         {AttributeArgs(Ids({"o2", "o6"}), "shape", "circle")},
         {AttributeArgs(all, "shape", "box")},
         {AttributeArgs(Ids({"o1", "o2"}), "color", "blue")}}};
    (*t)[std::string(kFilterRelationship)] = {
        {{RelationArgs(Ids({"o1"}), "same_row", Ids({"o2"}))},
         {RelationArgs(Ids({"o1", "o6"}), "same_row", Ids({"o1", "o6"}))},
         {RelationArgs(Ids({"o1"}), "same_row", Ids({"o6"}))}},
        {{RelationArgs(all, "same_color", all)},
         {RelationArgs(all, "inside_of", Ids({"o4"}))},
         {RelationArgs(all, "same_size", Ids({"o1"}))},
         {RelationArgs(all, "same_shape", Ids({"o3"}))},
         {RelationArgs(all, "same_column", Ids({"o1", "o3"}))}}};
    (*t)[std::string(kFilterSize)] = {
        {{SizeArgs(all, "small")},
         {SizeArgs(all, "big")},
         {SizeArgs(Ids({"o3", "o4"}), "small")}},
        {{SizeArgs(Ids({"o2", "o3"}), "big")},
         {SizeArgs(Ids({"o2", "o3"}), "small")},
         {SizeArgs(Ids({"o6"}), "big")},
         {SizeArgs(Ids({}), "small")},
         {SizeArgs(Ids({"o1", "o2", "o5"}), "small")}}};
    (*t)[std::string(kUniqueTarget)] = {
        {{UniqueArgs(Ids({"o3"}))}, {UniqueArgs(Ids({"o5"}))}, {UniqueArgs(Ids({"o2"}))}},
        {{UniqueArgs(Ids({"o1", "o2"}))},
         {UniqueArgs(Ids({}))},
         {UniqueArgs(Ids({"o4"}))},
         {UniqueArgs(Ids({"o3", "o5", "o6"}))},
         {UniqueArgs(Ids({"o6"}))}}};
    return t;
  }();
  auto it = table->find(tool);
  if (it == table->end()) {
    throw Error(ErrorKind::kUnknownTool, "no examples for tool '" + std::string(tool) + "'");
  }
  return it->second;
}

json ArgsToJson(const ToolArgs& args) {
  json out = json::object();
  for (const auto& [key, value] : args) out[key] = ToolValueToJson(value);
  return out;
}

// Reference outcome: the value, or {error: kind}.
json ReferenceOutcome(std::string_view tool, const ToolArgs& args) {
  try {
    return ToolValueToJson(InvokeTool(VerificationWorld(), tool, args));
  } catch (const Error& e) {
    return {{"error", ErrorKindName(e.kind())}};
  }
}

struct Violation {
  std::string message;
};

// Sends one request and checks the envelope. Error replies come back as
// {error: kind} when `allow_error`; otherwise they are violations.
json Exchange(ToolEndpoint& endpoint, int id, const std::string& method,
              json params, bool allow_error) {
  json reply;
  try {
    reply = endpoint.Request({{"id", id}, {"method", method}, {"params", std::move(params)}});
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kProtocolViolation) throw Violation{e.what()};
    throw;
  }
  if (!reply.contains("id") || reply["id"] != id) {
    throw Violation{"reply id does not match request id " + std::to_string(id)};
  }
  if (reply.contains("error")) {
    const json& err = reply["error"];
    std::string kind;
    if (err.is_object() && err.contains("data") && err["data"].is_object() &&
        err["data"].contains("kind") && err["data"]["kind"].is_string()) {
      kind = err["data"]["kind"].get<std::string>();
    }
    std::string message = err.is_object() && err.contains("message") && err["message"].is_string()
                              ? err["message"].get<std::string>()
                              : err.dump();
    if (allow_error && !kind.empty()) return {{"error", kind}};
    throw Violation{method + " failed: " + message};
  }
  if (!reply.contains("result")) throw Violation{"reply has neither result nor error"};
  return reply["result"];
}

}  // namespace

// --- endpoints -----------------------------------------------------------

LocalEndpoint::LocalEndpoint(ToolInvoker invoker)
    : session_(SessionConfig{nullptr, Lexicon::Default(), std::move(invoker)}) {}

json LocalEndpoint::Request(const json& request) { return session_.Handle(request); }

ProcessEndpoint::ProcessEndpoint(std::vector<std::string> argv) {
  if (argv.empty()) Unreachable("empty command");
  ::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) < 0) Unreachable("pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) < 0) Unreachable("pipe failed");
  if (::pipe2(err_pipe, O_CLOEXEC) < 0) Unreachable("pipe failed");
  std::vector<char*> args;
  for (std::string& a : argv) args.push_back(a.data());
  args.push_back(nullptr);
  const pid_t pid = ::fork();
  if (pid < 0) Unreachable("fork failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execvp(args[0], args.data());
    const int err = errno;
    (void)!::write(err_pipe[1], &err, sizeof(err));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  int err = 0;
  const ssize_t n = ::read(err_pipe[0], &err, sizeof(err));
  ::close(err_pipe[0]);
  if (n == sizeof(err)) {
    ::close(to_child_);
    ::close(from_child_);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
    Unreachable("cannot start '" + argv[0] + "': " + std::strerror(err));
  }
}

ProcessEndpoint::~ProcessEndpoint() {
  if (pid_ < 0) return;
  ::close(to_child_);
  ::close(from_child_);
  for (int i = 0; i < 50; ++i) {
    if (::waitpid(pid_, nullptr, WNOHANG) == pid_) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
}

json ProcessEndpoint::Request(const json& request) {
  return LineRoundTrip(to_child_, from_child_, pending_, request, /*socket=*/false);
}

SocketEndpoint::SocketEndpoint(const std::string& path) {
  sockaddr_un addr{};
  if (path.size() >= sizeof(addr.sun_path)) Unreachable("socket path too long");
  fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) Unreachable("socket failed");
  addr.sun_family = AF_UNIX;
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    const std::string why = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    Unreachable("cannot connect to " + path + ": " + why);
  }
}

SocketEndpoint::~SocketEndpoint() {
  if (fd_ >= 0) ::close(fd_);
}

json SocketEndpoint::Request(const json& request) {
  return LineRoundTrip(fd_, fd_, pending_, request, /*socket=*/true);
}

// --- mutants ---------------------------------------------------------------

const std::vector<Mutant>& BuiltinMutants() {
  static const auto* mutants = new std::vector<Mutant>{
      {"relation-swap", std::string(kFilterRelationship),
       "same_row and same_column exchanged", RelationSwap},
      {"no-self-exclusion", std::string(kFilterRelationship),
       "a head may witness itself", NoSelfExclusion},
      {"size-swap", std::string(kFilterSize), "small and big exchanged", SizeSwap},
      {"attribute-swap", std::string(kFilterByAttribute),
       "reads the shape for color filters and vice versa", AttributeSwap},
      {"tail-ignored", std::string(kFilterRelationship),
       "checks the relation against every object", TailIgnored},
      {"unique-first", std::string(kUniqueTarget),
       "returns the first id instead of failing on several", UniqueFirst},
  };
  return *mutants;
}

const Mutant& FindMutant(std::string_view name) {
  for (const Mutant& m : BuiltinMutants()) {
    if (m.name == name) return m;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown mutant '" + std::string(name) + "'");
}

// --- verification ----------------------------------------------------------

const GridWorld& VerificationWorld() {
  static const GridWorld* world = [] {
    GridWorld w = NewWorld(6, Agent{{0, 0}, Orientation::kSouth});
    w = PlaceObject(w, {"o1", Shape::kSquare, Color::kRed, 1, {1, 1}});
    w = PlaceObject(w, {"o2", Shape::kCircle, Color::kRed, 3, {1, 4}});
    w = PlaceObject(w, {"o3", Shape::kSquare, Color::kGreen, 2, {3, 1}});
    w = PlaceObject(w, {"o4", Shape::kBox, Color::kBlue, 2, {4, 4}});
    w = PlaceObject(w, {"o5", Shape::kCylinder, Color::kYellow, 4, {5, 5}});
    w = PlaceObject(w, {"o6", Shape::kCircle, Color::kGreen, 1, {3, 3}});
    return new GridWorld(std::move(w));
  }();
  return *world;
}

const std::vector<ToolExample>& BuildExamples(std::string_view tool) {
  return ExamplesFor(tool).build;
}

const std::vector<ToolExample>& ValidationExamples(std::string_view tool) {
  return ExamplesFor(tool).validation;
}

VerificationReport VerifyTool(ToolEndpoint& candidate, std::string_view tool) {
  const ExampleSet& examples = ExamplesFor(tool);
  VerificationReport report;
  report.tool = std::string(tool);
  int next_id = 1;
  std::string phase = "setup";
  try {
    Exchange(candidate, next_id++, "session.load_world",
             {{"world", WorldToJson(VerificationWorld())}}, false);
    for (const auto& [name, list, passed] :
         {std::tuple{"build", &examples.build, &report.build_passed},
          std::tuple{"validation", &examples.validation, &report.validation_passed}}) {
      phase = name;
      for (std::size_t i = 0; i < list->size(); ++i) {
        const ToolArgs& args = (*list)[i].args;
        const json expected = ReferenceOutcome(tool, args);
        const json params = {{"name", tool}, {"args", ArgsToJson(args)}};
        json actual = Exchange(candidate, next_id++, "tool.call", params,
                               expected.is_object());
        if (actual.is_object() && actual.contains("result")) actual = actual["result"];
        if (actual == expected) {
          ++*passed;
          continue;
        }
        if (!report.first_divergence) {
          report.first_divergence =
              Divergence{name, static_cast<int>(i), params, expected, actual};
        }
        break;
      }
    }
  } catch (const Violation& v) {
    report.failure = "protocol-violation";
    report.failure_phase = phase;
    report.message = v.message;
    return report;
  }
  report.pass = report.build_passed == static_cast<int>(examples.build.size()) &&
                report.validation_passed == static_cast<int>(examples.validation.size());
  if (!report.pass) {
    report.failure = "divergence";
    report.failure_phase = report.first_divergence->phase;
    report.message = "expected " + report.first_divergence->expected.dump() +
                     ", got " + report.first_divergence->actual.dump();
  }
  return report;
}

std::string VerificationTable(const std::vector<VerificationReport>& reports) {
  std::size_t width = 22;
  for (const VerificationReport& r : reports) width = std::max(width, r.tool.size() + 2);
  const int w = static_cast<int>(width);
  std::ostringstream out;
  out << std::left << std::setw(w) << "tool" << std::setw(8) << "build"
      << std::setw(12) << "validation" << std::setw(6) << "pass" << "detail\n";
  for (const VerificationReport& r : reports) {
    std::ostringstream detail;
    if (r.failure == "divergence") {
      const Divergence& d = *r.first_divergence;
      detail << d.phase << "[" << d.index << "] args=" << d.inputs["args"].dump()
             << " expected=" << d.expected.dump() << " actual=" << d.actual.dump();
    } else if (!r.failure.empty()) {
      detail << r.failure << " (" << r.failure_phase << "): " << r.message;
    }
    out << std::left << std::setw(w) << r.tool << std::setw(8)
        << (std::to_string(r.build_passed) + "/3") << std::setw(12)
        << (std::to_string(r.validation_passed) + "/5") << std::setw(6)
        << (r.pass ? "yes" : "no") << detail.str() << "\n";
  }
  return out.str();
}

json VerificationReportToJson(const VerificationReport& r) {
  json out = {{"tool", r.tool},
              {"build_passed", r.build_passed},
              {"build_total", 3},
              {"validation_passed", r.validation_passed},
              {"validation_total", 5},
              {"pass", r.pass}};
  if (r.first_divergence) {
    const Divergence& d = *r.first_divergence;
    out["first_divergence"] = {{"phase", d.phase},
                               {"index", d.index},
                               {"inputs", d.inputs},
                               {"expected", d.expected},
                               {"actual", d.actual}};
  }
  if (!r.failure.empty()) {
    out["failure"] = {{"kind", r.failure}, {"phase", r.failure_phase},
                      {"message", r.message}};
  }
  return out;
}

}  // namespace gridcomp
