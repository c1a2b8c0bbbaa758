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


// Line-delimited JSON request/response protocol that lets an external agent
// drive the toolset. A request is {id, method, params}; the reply echoes the
// id with either a result or an error {code, message, data}.
//
// Methods:
//   session.load_world {world} | {episode_id}   -> {d, objects}
//   lang.parse         {text}                   -> {ast, clause_count, program}
//   tool.list                                   -> {tools}
//   tool.call          {name, args}             -> {result}
//   episode.next                                -> {episode_id, question, world}
//                                                  or {done: true}
//   resolve.submit     {episode_id, target_id}  -> {correct}
//   resolve.batch      {items: [{program, episode_id?}]}
//                                               -> {results: [{target_id, correct?}
//                                                  | {error}]}
//
// In tool.call, an object-set argument is an array of ids or the string
// "all"; a set result is an array of ids and unique_target yields an id.

#ifndef GRIDCOMP_PROTOCOL_H_
#define GRIDCOMP_PROTOCOL_H_

#include <atomic>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gridcomp/benchgen.h"
#include "gridcomp/toolset.h"
#include "json.hpp"

namespace gridcomp {

namespace rpc {
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;  // also unknown tools
inline constexpr int kInvalidParams = -32602;
inline constexpr int kInternalError = -32603;
// Library errors use kDomainBase + the ErrorKind ordinal; data.kind carries
// the kind's name.
inline constexpr int kDomainBase = 1000;
}  // namespace rpc

// Tool implementation used by a session. InvokeTool by default; the
// verification mutants swap in faulty ones.
using ToolInvoker =
    std::function<ToolValue(const GridWorld&, std::string_view, const ToolArgs&)>;

struct SessionConfig {
  std::shared_ptr<const std::vector<Episode>> episodes;  // may be null
  Lexicon lexicon = Lexicon::Default();
  ToolInvoker invoker = InvokeTool;
};

nlohmann::json ToolValueToJson(const ToolValue& value);

// One client's state: the loaded world and the episode cursor. Not
// thread-safe; the server gives every connection its own session.
class Session {
 public:
  explicit Session(SessionConfig config);

  // Never throws for bad input; every failure becomes an error response.
  nlohmann::json Handle(const nlohmann::json& request);
  // Parses one line; unparsable text yields a parse-error response.
  std::string HandleLine(std::string_view line);

  int submitted() const { return submitted_; }
  int correct() const { return correct_; }

 private:
  nlohmann::json Dispatch(const std::string& method, const nlohmann::json& params);
  const GridWorld& RequireWorld() const;
  const Episode& FindEpisode(const std::string& id) const;

  SessionConfig config_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::optional<GridWorld> world_;
  std::size_t cursor_ = 0;
  int submitted_ = 0;
  int correct_ = 0;
};

// Serves requests read from `in` until end of input, one reply per line.
void ServeStream(std::istream& in, std::ostream& out, const SessionConfig& config);

// Unix-domain socket server: one thread and one session per connection.
class UnixServer {
 public:
  UnixServer(std::string path, SessionConfig config);
  ~UnixServer();
  UnixServer(const UnixServer&) = delete;
  UnixServer& operator=(const UnixServer&) = delete;

  // Binds and starts accepting in the background. Throws kIo.
  void Start();
  // Stops accepting, closes live connections and joins all threads.
  void Stop();

 private:
  void AcceptLoop();
  void ServeConnection(int fd);

  std::string path_;
  SessionConfig config_;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<int> open_fds_;
  std::vector<std::thread> workers_;
};

}  // namespace gridcomp

#endif  // GRIDCOMP_PROTOCOL_H_
