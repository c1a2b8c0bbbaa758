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


#include "gridcomp/prompt.h"

#include <sstream>

#include "gridcomp/resolver.h"
#include "gridcomp/toolset.h"

namespace gridcomp {
namespace {

constexpr std::string_view kOpen = "=== ";
constexpr std::string_view kClose = " ===";

std::string Header(std::string_view name) {
  return std::string(kOpen) + std::string(name) + std::string(kClose) + "\n";
}

}  // namespace

std::string ToolDescriptionText() {
  std::ostringstream out;
  for (const ToolDescriptor& d : DescribeTools()) {
    out << d.name << "(";
    for (std::size_t i = 0; i < d.arguments.size(); ++i) {
      if (i > 0) out << ", ";
      out << d.arguments[i].name << ": " << d.arguments[i].type;
    }
    out << ") -> " << d.output << "\n";
    out << "    " << d.purpose << "\n";
    for (const ArgumentSpec& a : d.arguments) {
      out << "    " << a.name << ": " << a.description << "\n";
    }
  }
  return out.str();
}

std::string TaskInstructionText() {
  return "Each task shows a grid world as JSON and a question that names one "
         "object in it.\n"
         "Answer by writing a program of tool calls, one per line, in the form\n"
         "  sN = tool(arg=value, ...)\n"
         "The name `all` is bound to every object of the world. Arguments are\n"
         "earlier step names or quoted strings. Finish with\n"
         "  target = unique_target(objects=sN)\n"
         "and then give the answer as `# answer: <object id>`.\n";
}

std::string EmitPromptPack(const std::vector<Episode>& episodes, int k,
                           const Lexicon& lexicon) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one demonstration");
  if (episodes.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::kInvalidArgument,
                "asked for " + std::to_string(k) + " demonstrations but only " +
                    std::to_string(episodes.size()) + " episodes are available");
  }
  std::string out = Header("TOOLS") + ToolDescriptionText() + "\n" +
                    Header("INSTRUCTION") + TaskInstructionText() + "\n";
  for (int i = 0; i < k; ++i) {
    const Episode& e = episodes[i];
    const CommandAst ast = ParseText(e.question, lexicon);
    out += Header("DEMONSTRATION " + std::to_string(i + 1));
    out += RenderDemonstration(ast, e.world, Compile(ast, lexicon), lexicon);
    out += "\n";
  }
  out += Header("TEST");
  out += "# world\n{world}\n# question: {question}\n";
  return out;
}

PromptPack ParsePromptPack(std::string_view text) {
  PromptPack pack;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  std::string body;
  int expected_demo = 1;
  bool seen_tools = false, seen_instruction = false, seen_test = false;
  auto flush = [&] {
    // Sections are separated by one blank line, except the last.
    std::string content = body;
    if (section != "TEST" && content.size() >= 2 &&
        content.compare(content.size() - 2, 2, "\n\n") == 0) {
      content.pop_back();
    }
    if (section == "TOOLS") {
      pack.tools = content;
    } else if (section == "INSTRUCTION") {
      pack.instruction = content;
    } else if (section.rfind("DEMONSTRATION ", 0) == 0) {
      pack.demonstrations.push_back(content);
    } else if (section == "TEST") {
      pack.test_slot = content;
    }
    body.clear();
  };
  while (std::getline(in, line)) {
    if (line.size() > kOpen.size() + kClose.size() && line.rfind(kOpen, 0) == 0 &&
        line.compare(line.size() - kClose.size(), kClose.size(), kClose) == 0) {
      std::string name = line.substr(kOpen.size(), line.size() - kOpen.size() - kClose.size());
      if (!section.empty()) flush();
      if (seen_test) throw Error(ErrorKind::kMalformedDocument, "section after TEST");
      if (name == "TOOLS") {
        if (seen_tools) throw Error(ErrorKind::kMalformedDocument, "duplicate TOOLS");
        seen_tools = true;
      } else if (name == "INSTRUCTION") {
        if (!seen_tools || seen_instruction) {
          throw Error(ErrorKind::kMalformedDocument, "INSTRUCTION out of order");
        }
        seen_instruction = true;
      } else if (name == "DEMONSTRATION " + std::to_string(expected_demo)) {
        if (!seen_instruction) {
          throw Error(ErrorKind::kMalformedDocument, "DEMONSTRATION before INSTRUCTION");
        }
        ++expected_demo;
      } else if (name == "TEST") {
        if (expected_demo == 1) {
          throw Error(ErrorKind::kMalformedDocument, "TEST before any DEMONSTRATION");
        }
        seen_test = true;
      } else {
        throw Error(ErrorKind::kMalformedDocument, "unexpected section '" + name + "'");
      }
      section = name;
      continue;
    }
    if (section.empty()) {
      throw Error(ErrorKind::kMalformedDocument, "text before the first section");
    }
    body += line;
    body += '\n';
  }
  if (!section.empty()) flush();
  if (!seen_test) throw Error(ErrorKind::kMalformedDocument, "missing TEST section");
  return pack;
}

}  // namespace gridcomp
