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


#include "gridcomp/protocol.h"

#include <poll.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>

#include "gridcomp/resolver.h"
#include "gridcomp/world_json.h"

namespace gridcomp {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxLine = 16u << 20;

// A failure that maps onto one of the fixed protocol codes.
struct RpcFailure {
  int code;
  std::string message;
};

json ErrorResponse(const json& id, int code, const std::string& message,
                   json data = json::object()) {
  json error = {{"code", code}, {"message", message}};
  if (!data.empty()) error["data"] = std::move(data);
  return {{"id", id}, {"error", std::move(error)}};
}

json DomainError(const json& id, const Error& e) {
  json data = {{"kind", ErrorKindName(e.kind())}};
  if (e.position()) data["position"] = *e.position();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    data["expected"] = pe->expected();
  }
  return ErrorResponse(id, rpc::kDomainBase + static_cast<int>(e.kind()), e.what(),
                       std::move(data));
}

const std::string& StringParam(const json& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end() || !it->is_string()) {
    throw RpcFailure{rpc::kInvalidParams,
                     std::string("params.") + key + " must be a string"};
  }
  return it->get_ref<const std::string&>();
}

const ToolDescriptor* FindTool(std::string_view name) {
  for (const ToolDescriptor& d : DescribeTools()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

ToolArgs ArgsFromJson(const ToolDescriptor& tool, const json& args,
                      const GridWorld& world) {
  if (!args.is_object()) throw RpcFailure{rpc::kInvalidParams, "params.args must be an object"};
  ToolArgs out;
  for (const auto& [key, value] : args.items()) {
    auto spec = std::find_if(tool.arguments.begin(), tool.arguments.end(),
                             [&](const ArgumentSpec& a) { return a.name == key; });
    if (spec == tool.arguments.end()) {
      throw RpcFailure{rpc::kInvalidParams,
                       tool.name + " has no argument '" + key + "'"};
    }
    if (spec->type == "object_set") {
      if (value.is_string() && value.get_ref<const std::string&>() == "all") {
        out.emplace(key, ObjectSet::All(world));
        continue;
      }
      if (!value.is_array()) {
        throw RpcFailure{rpc::kInvalidParams,
                         "argument '" + key + "' must be an id array or \"all\""};
      }
      std::vector<std::string> ids;
      for (const json& id : value) {
        if (!id.is_string()) {
          throw RpcFailure{rpc::kInvalidParams,
                           "argument '" + key + "' must contain only string ids"};
        }
        ids.push_back(id.get<std::string>());
      }
      ObjectSet set(std::move(ids));
      set.CheckBound(world);
      out.emplace(key, std::move(set));
    } else {
      if (!value.is_string()) {
        throw RpcFailure{rpc::kInvalidParams, "argument '" + key + "' must be a string"};
      }
      out.emplace(key, value.get<std::string>());
    }
  }
  return out;
}

bool WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace

json ToolValueToJson(const ToolValue& value) {
  if (const auto* set = std::get_if<ObjectSet>(&value)) return set->ids();
  return std::get<std::string>(value);
}

Session::Session(SessionConfig config) : config_(std::move(config)) {
  if (!config_.invoker) config_.invoker = InvokeTool;
  if (config_.episodes) {
    for (std::size_t i = 0; i < config_.episodes->size(); ++i) {
      index_.emplace((*config_.episodes)[i].episode_id, i);
    }
  }
}

const GridWorld& Session::RequireWorld() const {
  if (!world_) {
    throw Error(ErrorKind::kInvalidArgument,
                "no world loaded; call session.load_world or episode.next first");
  }
  return *world_;
}

const Episode& Session::FindEpisode(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorKind::kUnknownEpisodeId, "unknown episode '" + id + "'");
  }
  return (*config_.episodes)[it->second];
}

json Session::Dispatch(const std::string& method, const json& params) {
  if (method == "session.load_world") {
    if (params.contains("episode_id")) {
      world_ = FindEpisode(StringParam(params, "episode_id")).world;
    } else if (params.contains("world")) {
      world_ = WorldFromJson(params["world"]);
    } else {
      throw RpcFailure{rpc::kInvalidParams, "expected params.world or params.episode_id"};
    }
    return {{"d", world_->dimension()}, {"objects", world_->objects().size()}};
  }
  if (method == "lang.parse") {
    const CommandAst ast = ParseText(StringParam(params, "text"), config_.lexicon);
    return {{"ast", CommandToJson(ast)},
            {"clause_count", ClauseCount(ast)},
            {"program", ProgramToJson(Compile(ast, config_.lexicon))}};
  }
  if (method == "tool.list") {
    json tools = json::array();
    for (const ToolDescriptor& d : DescribeTools()) tools.push_back(ToolDescriptorToJson(d));
    return {{"tools", std::move(tools)}};
  }
  if (method == "tool.call") {
    const std::string& name = StringParam(params, "name");
    const ToolDescriptor* tool = FindTool(name);
    if (tool == nullptr) {
      throw RpcFailure{rpc::kMethodNotFound, "unknown tool '" + name + "'"};
    }
    const GridWorld& world = RequireWorld();
    const json args = params.contains("args") ? params["args"] : json::object();
    return {{"result", ToolValueToJson(config_.invoker(world, name,
                                                       ArgsFromJson(*tool, args, world)))}};
  }
  if (method == "episode.next") {
    if (!config_.episodes || cursor_ >= config_.episodes->size()) {
      return {{"done", true}};
    }
    const Episode& e = (*config_.episodes)[cursor_++];
    world_ = e.world;
    return {{"episode_id", e.episode_id},
            {"question", e.question},
            {"world", WorldToJson(e.world)}};
  }
  if (method == "resolve.submit") {
    const Episode& e = FindEpisode(StringParam(params, "episode_id"));
    const bool correct = StringParam(params, "target_id") == e.target_id;
    ++submitted_;
    if (correct) ++correct_;
    return {{"correct", correct}};
  }
  if (method == "resolve.batch") {
    auto items = params.find("items");
    if (items == params.end() || !items->is_array()) {
      throw RpcFailure{rpc::kInvalidParams, "params.items must be an array"};
    }
    json results = json::array();
    for (const json& item : *items) {
      if (!item.is_object() || !item.contains("program")) {
        throw RpcFailure{rpc::kInvalidParams, "each item needs a program"};
      }
      json row = json::object();
      try {
        const Episode* episode = nullptr;
        if (item.contains("episode_id")) {
          if (!item["episode_id"].is_string()) {
            throw RpcFailure{rpc::kInvalidParams, "item episode_id must be a string"};
          }
          episode = &FindEpisode(item["episode_id"].get<std::string>());
        }
        const ToolProgram program = ProgramFromJson(item["program"]);
        ValidateProgram(program);
        const std::string target =
            Execute(program, episode != nullptr ? episode->world : RequireWorld());
        row["target_id"] = target;
        if (episode != nullptr) row["correct"] = target == episode->target_id;
      } catch (const Error& e) {
        row["error"] = {{"kind", ErrorKindName(e.kind())}, {"message", e.what()}};
      }
      results.push_back(std::move(row));
    }
    return {{"results", std::move(results)}};
  }
  throw RpcFailure{rpc::kMethodNotFound, "unknown method '" + method + "'"};
}

json Session::Handle(const json& request) {
  if (!request.is_object()) {
    return ErrorResponse(nullptr, rpc::kInvalidRequest, "request must be an object");
  }
  auto id_it = request.find("id");
  if (id_it == request.end() ||
      !(id_it->is_string() || id_it->is_number_integer() || id_it->is_null())) {
    return ErrorResponse(nullptr, rpc::kInvalidRequest,
                         "request needs an id (string, integer or null)");
  }
  const json id = *id_it;
  auto method = request.find("method");
  if (method == request.end() || !method->is_string()) {
    return ErrorResponse(id, rpc::kInvalidRequest, "request needs a string method");
  }
  json params = json::object();
  if (auto p = request.find("params"); p != request.end() && !p->is_null()) {
    if (!p->is_object()) {
      return ErrorResponse(id, rpc::kInvalidParams, "params must be an object");
    }
    params = *p;
  }
  try {
    return {{"id", id}, {"result", Dispatch(method->get<std::string>(), params)}};
  } catch (const RpcFailure& f) {
    return ErrorResponse(id, f.code, f.message);
  } catch (const Error& e) {
    return DomainError(id, e);
  } catch (const std::exception& e) {
    return ErrorResponse(id, rpc::kInternalError, e.what());
  }
}

std::string Session::HandleLine(std::string_view line) {
  json request = json::parse(line, nullptr, /*allow_exceptions=*/false);
  json response = request.is_discarded()
                      ? ErrorResponse(nullptr, rpc::kParseError, "line is not valid JSON")
                      : Handle(request);
  // Replace invalid UTF-8 rather than throwing while echoing input.
  return response.dump(-1, ' ', false, json::error_handler_t::replace);
}

void ServeStream(std::istream& in, std::ostream& out, const SessionConfig& config) {
  Session session(config);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << session.HandleLine(line) << '\n' << std::flush;
  }
}

// --- unix socket ------------------------------------------------------------

UnixServer::UnixServer(std::string path, SessionConfig config)
    : path_(std::move(path)), config_(std::move(config)) {}

UnixServer::~UnixServer() { Stop(); }

void UnixServer::Start() {
  sockaddr_un addr{};
  if (path_.size() >= sizeof(addr.sun_path)) {
    throw Error(ErrorKind::kIo, "socket path too long: " + path_);
  }
  listen_fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw Error(ErrorKind::kIo, std::string("socket: ") + std::strerror(errno));
  addr.sun_family = AF_UNIX;
  std::memcpy(addr.sun_path, path_.c_str(), path_.size() + 1);
  ::unlink(path_.c_str());
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listen_fd_, 16) < 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(ErrorKind::kIo, "cannot listen on " + path_ + ": " + why);
  }
  stopping_ = false;
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

void UnixServer::AcceptLoop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready <= 0) continue;
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { ServeConnection(fd); });
  }
}

void UnixServer::ServeConnection(int fd) {
  Session session(config_);
  std::string buffer;
  char chunk[4096];
  bool alive = true;
  while (alive) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos;
         start = nl + 1) {
      std::string_view line(buffer.data() + start, nl - start);
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      if (!WriteAll(fd, session.HandleLine(line) + "\n")) {
        alive = false;
        break;
      }
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLine) {
      WriteAll(fd, session.HandleLine("") + "\n");
      break;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto it = std::find(open_fds_.begin(), open_fds_.end(), fd);
  if (it != open_fds_.end()) {
    open_fds_.erase(it);
    ::close(fd);
  }
}

void UnixServer::Stop() {
  if (listen_fd_ < 0) return;
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (std::thread& t : workers) t.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
  ::unlink(path_.c_str());
}


}  // namespace gridcomp
