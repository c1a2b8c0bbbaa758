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


#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "gridcomp/protocol.h"
#include "gridcomp/resolver.h"
#include "gridcomp/verify.h"
#include "gridcomp/world_json.h"
#include "gtest_util.h"
#include "support.h"

namespace gridcomp {
namespace {

using nlohmann::json;

std::shared_ptr<const std::vector<Episode>> Dataset() {
  static const auto episodes = [] {
    SplitSpec spec = Preset("B1", 21);
    spec.episodes_per_split = 30;
    spec.train_episodes = 0;
    return std::make_shared<const std::vector<Episode>>(GenerateSplit(spec).test);
  }();
  return episodes;
}

SessionConfig Config() {
  SessionConfig c;
  c.episodes = Dataset();
  return c;
}

json Call(ToolEndpoint& ep, int id, const std::string& method, json params = json::object()) {
  return ep.Request({{"id", id}, {"method", method}, {"params", std::move(params)}});
}

// Replays a compiled program one tool.call at a time, resolving bindings on
// the client side, and returns the final answer.
std::string Replay(ToolEndpoint& ep, const ToolProgram& program, int& id) {
  std::map<std::string, json> bound;
  json last;
  for (const ToolCall& call : program.steps) {
    json args = json::object();
    for (const auto& [name, binding] : call.args) {
      if (const auto* ref = std::get_if<BindingRef>(&binding)) {
        args[name] = ref->name == kAllBinding ? json("all") : bound.at(ref->name);
      } else {
        args[name] = std::get<std::string>(binding);
      }
    }
    const json reply = Call(ep, id++, "tool.call", {{"name", call.tool}, {"args", args}});
    EXPECT_TRUE(reply.contains("result")) << reply.dump();
    last = reply["result"]["result"];
    bound[call.output] = last;
  }
  return last.get<std::string>();
}

TEST(Session, ToolListHasFourDescriptors) {
  Session s(Config());
  const json r = s.Handle({{"id", 1}, {"method", "tool.list"}});
  EXPECT_EQ(r["id"], 1);
  EXPECT_EQ(r["result"]["tools"].size(), 4u);
}

TEST(Session, UnknownToolUsesMethodNotFound) {
  Session s(Config());
  s.Handle({{"id", 1}, {"method", "episode.next"}});
  const json r = s.Handle(
      {{"id", "x"}, {"method", "tool.call"}, {"params", {{"name", "teleport"}, {"args", json::object()}}}});
  EXPECT_EQ(r["id"], "x");
  EXPECT_EQ(r["error"]["code"], rpc::kMethodNotFound);
}

TEST(Session, DomainErrorsCarryKind) {
  Session s(Config());
  json r = s.Handle({{"id", 1}, {"method", "tool.call"},
                     {"params", {{"name", "unique_target"}, {"args", {{"objects", "all"}}}}}});
  EXPECT_EQ(r["error"]["data"]["kind"], "invalid-argument");
  s.Handle({{"id", 2}, {"method", "episode.next"}});
  r = s.Handle({{"id", 3}, {"method", "tool.call"},
                {"params", {{"name", "unique_target"}, {"args", {{"objects", "all"}}}}}});
  EXPECT_EQ(r["error"]["data"]["kind"], "ambiguous-target");
  EXPECT_EQ(r["error"]["code"], rpc::kDomainBase + static_cast<int>(ErrorKind::kAmbiguousTarget));
  r = s.Handle({{"id", 4}, {"method", "tool.call"},
                {"params", {{"name", "unique_target"}, {"args", {{"objects", {"o99"}}}}}}});
  EXPECT_EQ(r["error"]["data"]["kind"], "unknown-object");
  r = s.Handle({{"id", 5}, {"method", "resolve.submit"},
                {"params", {{"episode_id", "nope"}, {"target_id", "o1"}}}});
  EXPECT_EQ(r["error"]["data"]["kind"], "unknown-episode-id");
  r = s.Handle({{"id", 6}, {"method", "lang.parse"}, {"params", {{"text", "walk to the glorp"}}}});
  EXPECT_EQ(r["error"]["data"]["kind"], "unknown-token");
  EXPECT_EQ(r["error"]["data"]["position"], 12);
}

TEST(Session, EnvelopeErrors) {
  Session s(Config());
  EXPECT_EQ(s.Handle(json::array())["error"]["code"], rpc::kInvalidRequest);
  EXPECT_EQ(s.Handle({{"method", "tool.list"}})["error"]["code"], rpc::kInvalidRequest);
  EXPECT_EQ(s.Handle({{"id", 1}})["error"]["code"], rpc::kInvalidRequest);
  EXPECT_EQ(s.Handle({{"id", 1}, {"method", "nope"}})["error"]["code"], rpc::kMethodNotFound);
  EXPECT_EQ(s.Handle({{"id", 1}, {"method", "tool.list"}, {"params", 3}})["error"]["code"],
            rpc::kInvalidParams);
  EXPECT_EQ(s.Handle({{"id", 1}, {"method", "lang.parse"}})["error"]["code"], rpc::kInvalidParams);
  EXPECT_EQ(json::parse(s.HandleLine("{oops"))["error"]["code"], rpc::kParseError);
}

TEST(Session, LangParseReturnsAstAndProgram) {
  Session s(Config());
  const json r = s.Handle({{"id", 1}, {"method", "lang.parse"},
                           {"params", {{"text", "walk to the red square that is in the same row as a circle"}}}});
  EXPECT_EQ(r["result"]["clause_count"], 1);
  EXPECT_EQ(ProgramFromJson(r["result"]["program"]).steps.back().tool, "unique_target");
}

TEST(Session, EpisodeCursorRunsOut) {
  SessionConfig c;
  Session s(c);
  EXPECT_EQ(s.Handle({{"id", 1}, {"method", "episode.next"}})["result"]["done"], true);
}

// A scripted client that knows only the protocol resolves every episode.
TEST(Session, ScriptedReplayIsCorrect) {
  Session s(Config());
  struct SessionEndpoint : ToolEndpoint {
    Session* s;
    json Request(const json& r) override { return s->Handle(r); }
  } ep;
  ep.s = &s;
  int id = 1;
  for (;;) {
    const json next = Call(ep, id++, "episode.next");
    if (next["result"].contains("done")) break;
    const json parsed = Call(ep, id++, "lang.parse", {{"text", next["result"]["question"]}});
    const ToolProgram program = ProgramFromJson(parsed["result"]["program"]);
    const std::string answer = Replay(ep, program, id);
    const json verdict = Call(ep, id++, "resolve.submit",
                              {{"episode_id", next["result"]["episode_id"]}, {"target_id", answer}});
    ASSERT_EQ(verdict["result"]["correct"], true);
  }
  EXPECT_EQ(s.submitted(), 30);
  EXPECT_EQ(s.correct(), 30);
}

TEST(Session, BatchResolve) {
  Session s(Config());
  json items = json::array();
  for (const Episode& e : *Dataset()) {
    items.push_back({{"episode_id", e.episode_id},
                     {"program", ProgramToJson(Compile(e.ast))}});
  }
  items.push_back({{"program", {{"steps", json::array()}, {"target", "target"}}}});
  const json r = s.Handle({{"id", 1}, {"method", "resolve.batch"}, {"params", {{"items", items}}}});
  const json& results = r["result"]["results"];
  ASSERT_EQ(results.size(), Dataset()->size() + 1);
  for (std::size_t i = 0; i < Dataset()->size(); ++i) EXPECT_EQ(results[i]["correct"], true);
  EXPECT_TRUE(results.back().contains("error"));
}

// Any sequence of tool calls through the server equals direct calls.
TEST(Session, EquivalentToDirectToolCalls) {
  Rng rng(31);
  const std::vector<std::string> relations = {"same_row", "same_column", "same_color",
                                              "same_shape", "same_size", "inside_of"};
  for (int trial = 0; trial < 100; ++trial) {
    const GridWorld w = testing::RandomWorld(rng, 6, 15);
    Session s(SessionConfig{});
    s.Handle({{"id", 0}, {"method", "session.load_world"}, {"params", {{"world", WorldToJson(w)}}}});
    for (int k = 0; k < 20; ++k) {
      std::vector<std::string> a, b;
      for (const Obj& o : w.objects()) {
        if (rng.Chance(1, 2)) a.push_back(o.id);
        if (rng.Chance(1, 2)) b.push_back(o.id);
      }
      std::string name;
      ToolArgs args;
      json wire;
      switch (rng.Uniform(4)) {
        case 0: {
          const bool color = rng.Chance(1, 2);
          const std::string value = color ? std::string(ColorName(kAllColors[rng.Uniform(4)]))
                                          : std::string(ShapeName(kAllShapes[rng.Uniform(4)]));
          name = "filter_by_attribute";
          args = {{"objects", ObjectSet(a)}, {"kind", std::string(color ? "color" : "shape")},
                  {"value", value}};
          wire = {{"objects", a}, {"kind", color ? "color" : "shape"}, {"value", value}};
          break;
        }
        case 1: {
          const std::string rel = relations[rng.Uniform(6)];
          name = "filter_relationship";
          args = {{"head_objects", ObjectSet(a)}, {"condition", rel}, {"tail_objects", ObjectSet(b)}};
          wire = {{"head_objects", a}, {"condition", rel}, {"tail_objects", b}};
          break;
        }
        case 2: {
          const std::string word = rng.Chance(1, 2) ? "small" : "big";
          name = "filter_size";
          args = {{"objects", ObjectSet(a)}, {"size_word", word}};
          wire = {{"objects", a}, {"size_word", word}};
          break;
        }
        default:
          name = "unique_target";
          args = {{"objects", ObjectSet(a)}};
          wire = {{"objects", a}};
      }
      const json reply = s.Handle({{"id", k}, {"method", "tool.call"},
                                   {"params", {{"name", name}, {"args", wire}}}});
      try {
        const json direct = ToolValueToJson(InvokeTool(w, name, args));
        ASSERT_EQ(reply["result"]["result"], direct) << reply.dump();
      } catch (const Error& e) {
        ASSERT_EQ(reply["error"]["data"]["kind"], ErrorKindName(e.kind()));
      }
    }
  }
}

// Mangled requests never escape as exceptions and always get an error or
// result object back with an id field.
TEST(Session, FuzzedRequestsYieldStructuredReplies) {
  Rng rng(404);
  Session s(Config());
  const std::vector<std::string> seeds = {
      R"({"id":1,"method":"tool.call","params":{"name":"filter_size","args":{"objects":"all","size_word":"big"}}})",
      R"({"id":2,"method":"session.load_world","params":{"world":{"schema_version":1,"d":3,"agent":{"row":0,"col":0,"orientation":"south"},"objects":[]}}})",
      R"({"id":3,"method":"resolve.submit","params":{"episode_id":"B1-test-00000","target_id":"o1"}})",
      R"({"id":4,"method":"lang.parse","params":{"text":"walk to the red box"}})",
      R"({"id":5,"method":"resolve.batch","params":{"items":[{"program":{"steps":[],"target":"t"}}]}})",
      R"({"id":6,"method":"episode.next"})"};
  const std::string alphabet = "{}[]\":,0123456789abcdefghijklmnopqrstuvwxyz_. \\\xff";
  for (int i = 0; i < 20000; ++i) {
    std::string line = seeds[rng.Uniform(static_cast<int>(seeds.size()))];
    const int edits = rng.Between(1, 6);
    for (int e = 0; e < edits && !line.empty(); ++e) {
      const int pos = rng.Uniform(static_cast<int>(line.size()));
      switch (rng.Uniform(3)) {
        case 0: line.erase(pos, 1); break;
        case 1: line.insert(line.begin() + pos, alphabet[rng.Uniform(static_cast<int>(alphabet.size()))]); break;
        default: line[pos] = alphabet[rng.Uniform(static_cast<int>(alphabet.size()))];
      }
    }
    std::string reply;
    ASSERT_NO_THROW(reply = s.HandleLine(line)) << line;
    const json doc = json::parse(reply);
    ASSERT_TRUE(doc.contains("id"));
    ASSERT_TRUE(doc.contains("result") != doc.contains("error")) << reply;
  }
}

TEST(ServeStream, OneReplyPerLine) {
  std::istringstream in(
      "{\"id\":1,\"method\":\"tool.list\"}\n\nnot json\n{\"id\":2,\"method\":\"episode.next\"}\n");
  std::ostringstream out;
  ServeStream(in, out, Config());
  std::istringstream lines(out.str());
  std::string line;
  std::vector<json> replies;
  while (std::getline(lines, line)) replies.push_back(json::parse(line));
  ASSERT_EQ(replies.size(), 3u);
  EXPECT_EQ(replies[1]["error"]["code"], rpc::kParseError);
  EXPECT_EQ(replies[2]["result"]["episode_id"], "B1-test-00000");
}

TEST(UnixServer, ConcurrentSessionsAreIndependent) {
  const std::string path = testing::TempDir("sock") + "/s";
  UnixServer server(path, Config());
  server.Start();
  auto client = [&](int skip, std::string* first_id) {
    SocketEndpoint ep(path);
    for (int i = 0; i < skip; ++i) Call(ep, i, "episode.next");
    *first_id = Call(ep, 100, "episode.next")["result"]["episode_id"];
    int id = 200;
    for (int i = 0; i < 5; ++i) {
      const json next = Call(ep, id++, "episode.next");
      const std::string qid = next["result"]["episode_id"];
      const json parsed = Call(ep, id++, "lang.parse", {{"text", next["result"]["question"]}});
      const std::string answer = Replay(ep, ProgramFromJson(parsed["result"]["program"]), id);
      EXPECT_EQ(Call(ep, id++, "resolve.submit", {{"episode_id", qid}, {"target_id", answer}})
                    ["result"]["correct"], true);
    }
  };
  std::string a, b;
  std::thread t1(client, 0, &a);
  std::thread t2(client, 3, &b);
  t1.join();
  t2.join();
  EXPECT_EQ(a, "B1-test-00000");
  EXPECT_EQ(b, "B1-test-00003");
  // Garbage on a live connection gets an error reply, not a dropped server.
  SocketEndpoint ep(path);
  EXPECT_EQ(Call(ep, 1, "nope")["error"]["code"], rpc::kMethodNotFound);
  server.Stop();
  EXPECT_ERROR_KIND(SocketEndpoint{path}, ErrorKind::kEndpointUnreachable);
}

}  // namespace
}  // namespace gridcomp
