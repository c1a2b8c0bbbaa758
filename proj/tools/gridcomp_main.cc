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


// gridcomp: generate splits, resolve and score them, serve the tool
// protocol, verify candidate tools and emit prompt packs.

#include <pthread.h>
#include <signal.h>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gridcomp/benchgen.h"
#include "gridcomp/eval.h"
#include "gridcomp/file_io.h"
#include "gridcomp/prompt.h"
#include "gridcomp/protocol.h"
#include "gridcomp/verify.h"

namespace {

using gridcomp::Error;
using nlohmann::json;

gridcomp::Lexicon LoadLexicon(const std::string& path) {
  if (path.empty()) return gridcomp::Lexicon::Default();
  json doc = json::parse(gridcomp::ReadFile(path), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(gridcomp::ErrorKind::kMalformedDocument, path + ": not valid JSON");
  }
  // A dataset manifest carries its lexicon under "lexicon".
  if (doc.is_object() && doc.contains("spec")) {
    return doc.contains("lexicon") ? gridcomp::LexiconFromJson(doc["lexicon"])
                                   : gridcomp::Lexicon::Default();
  }
  return gridcomp::LexiconFromJson(doc);
}

gridcomp::SplitSpec LoadSpec(const std::string& spec, std::uint64_t seed, bool seed_given) {
  for (const std::string& name : gridcomp::PresetNames()) {
    if (name == spec) return gridcomp::Preset(name, seed);
  }
  json doc = json::parse(gridcomp::ReadFile(spec), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(gridcomp::ErrorKind::kMalformedDocument, spec + ": not valid JSON");
  }
  gridcomp::SplitSpec out = gridcomp::SpecFromJson(doc);
  if (seed_given) out.seed = seed;
  return out;
}

void WriteOrPrint(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    gridcomp::WriteFile(path, text);
  }
}

std::string SplitNameOf(const std::vector<gridcomp::Episode>& episodes) {
  return episodes.empty() ? std::string() : episodes.front().split;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-world compositional reasoning benchmark and tool harness"};
  app.require_subcommand(1);

  // generate
  std::string spec_arg;
  std::uint64_t seed = 0;
  std::string out_path;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int test_episodes = -1;
  int train_episodes = -1;
  std::string lexicon_path;
  std::uint64_t remap_seed = 0;
  auto* generate = app.add_subcommand("generate", "Generate a split into dataset files");
  generate->add_option("--spec", spec_arg, "Preset name (A1..S6) or split spec JSON file")
      ->required();
  auto* seed_opt = generate->add_option("--seed", seed, "Generation seed");
  generate->add_option("--out", out_path, "Output directory")->required();
  generate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  generate->add_option("--test-episodes", test_episodes, "Override the test episode count");
  generate->add_option("--train-episodes", train_episodes, "Override the train episode count");
  generate->add_option("--lexicon", lexicon_path, "Lexicon JSON file");
  auto* remap_opt =
      generate->add_option("--remap-seed", remap_seed, "Replace content words with random symbols");

  // resolve
  std::string dataset;
  std::string field_name = "target";
  auto* resolve = app.add_subcommand("resolve", "Oracle predictions for a dataset file");
  resolve->add_option("--dataset", dataset, "Episode JSONL file")->required();
  resolve->add_option("--out", out_path, "Prediction JSONL file (default stdout)");
  resolve->add_option("--field", field_name, "target or actions");
  resolve->add_option("--lexicon", lexicon_path, "Lexicon JSON file or dataset manifest");

  // evaluate
  std::string predictions_path;
  std::string report_path;
  auto* evaluate = app.add_subcommand("evaluate", "Exact-match score of predictions");
  evaluate->add_option("--dataset", dataset, "Episode JSONL file")->required();
  evaluate->add_option("--predictions", predictions_path, "Prediction JSONL file")
      ->required();
  evaluate->add_option("--field", field_name, "target or actions");
  evaluate->add_option("--out", report_path, "Write the report as JSON here");
  evaluate->add_option("--lexicon", lexicon_path, "Lexicon JSON file or dataset manifest");

  // serve
  std::string transport = "stdio";
  std::string socket_path;
  std::string mutant_name;
  auto* serve = app.add_subcommand("serve", "Serve the tool protocol");
  serve->add_option("--transport", transport, "stdio or unix")
      ->check(CLI::IsMember({"stdio", "unix"}));
  serve->add_option("--socket", socket_path, "Socket path for the unix transport");
  serve->add_option("--dataset", dataset, "Episode JSONL file for episode.next and resolve.submit");
  serve->add_option("--lexicon", lexicon_path, "Lexicon JSON file or dataset manifest");
  serve->add_option("--mutant", mutant_name, "Serve a built-in faulty tool");

  // verify-tool
  std::string tool_name;
  std::string command;
  bool all_mutants = false;
  auto* verify = app.add_subcommand("verify-tool", "Check a candidate tool on 3+5 examples");
  verify->add_option("--tool", tool_name, "Tool to verify (default: all four)");
  verify->add_option("--mutant", mutant_name, "Verify a built-in mutant in process");
  verify->add_flag("--all-mutants", all_mutants, "Verify every built-in mutant");
  verify->add_option("--socket", socket_path, "Candidate listening on a unix socket");
  verify->add_option("--command", command,
                     "Candidate command line (split on spaces) speaking the protocol on stdio");
  verify->add_option("--out", report_path, "Write the reports as JSON here");

  // prompt-pack
  int k = gridcomp::kDefaultDemonstrations;
  auto* prompt = app.add_subcommand("prompt-pack", "Emit tool descriptions and demonstrations");
  prompt->add_option("--dataset", dataset, "Episode JSONL file (demonstrations come first)")
      ->required();
  prompt->add_option("--k", k, "Number of demonstrations")->check(CLI::PositiveNumber);
  prompt->add_option("--out", out_path, "Output file (default stdout)");
  prompt->add_option("--lexicon", lexicon_path, "Lexicon JSON file or dataset manifest");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      gridcomp::SplitSpec spec = LoadSpec(spec_arg, seed, seed_opt->count() > 0);
      if (test_episodes >= 0) spec.episodes_per_split = test_episodes;
      if (train_episodes >= 0) spec.train_episodes = train_episodes;
      gridcomp::Lexicon lexicon = LoadLexicon(lexicon_path);
      if (remap_opt->count() > 0) lexicon = gridcomp::RemapLexicon(lexicon, remap_seed);
      const gridcomp::SplitData data = gridcomp::GenerateSplit(spec, lexicon, jobs);
      const gridcomp::DatasetFiles files =
          gridcomp::WriteDataset(out_path, spec, data, lexicon);
      std::cout << files.train_path << " (" << data.train.size() << ")\n"
                << files.test_path << " (" << data.test.size() << ")\n"
                << files.manifest_path << "\n"
                << files.digest << "\n";
      return 0;
    }
    if (*resolve) {
      const gridcomp::EvalField field = gridcomp::ParseEvalField(field_name);
      const gridcomp::Lexicon lexicon = LoadLexicon(lexicon_path);
      const auto episodes = gridcomp::ReadEpisodesFile(dataset, lexicon);
      std::vector<std::string> order;
      for (const auto& e : episodes) order.push_back(e.episode_id);
      WriteOrPrint(out_path, gridcomp::PredictionsToJsonl(
                                 order, gridcomp::OraclePredictions(episodes, field, lexicon),
                                 field));
      return 0;
    }
    if (*evaluate) {
      const gridcomp::EvalField field = gridcomp::ParseEvalField(field_name);
      const auto episodes = gridcomp::ReadEpisodesFile(dataset, LoadLexicon(lexicon_path));
      const auto predictions = gridcomp::ReadPredictions(predictions_path, field);
      const gridcomp::EvalReport report = gridcomp::EvaluateEm(
          predictions, episodes, field, SplitNameOf(episodes), jobs);
      std::cout << gridcomp::ReportTable(report);
      if (!report_path.empty()) {
        gridcomp::WriteFile(report_path, gridcomp::ReportToJson(report).dump(2) + "\n");
      }
      return 0;
    }
    if (*serve) {
      gridcomp::SessionConfig config;
      config.lexicon = LoadLexicon(lexicon_path);
      if (!dataset.empty()) {
        config.episodes = std::make_shared<const std::vector<gridcomp::Episode>>(
            gridcomp::ReadEpisodesFile(dataset, config.lexicon));
      }
      if (!mutant_name.empty()) config.invoker = gridcomp::FindMutant(mutant_name).invoker;
      if (transport == "stdio") {
        gridcomp::ServeStream(std::cin, std::cout, config);
        return 0;
      }
      if (socket_path.empty()) {
        std::cerr << "serve: --socket is required with --transport unix\n";
        return 2;
      }
      // Worker threads inherit the mask; the main thread waits for the signal.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      gridcomp::UnixServer server(socket_path, config);
      server.Start();
      std::cerr << "listening on " << socket_path << "\n";
      int received = 0;
      sigwait(&signals, &received);
      server.Stop();
      return 0;
    }
    if (*verify) {
      std::vector<gridcomp::VerificationReport> reports;
      auto tools_for = [&](const std::string& fallback) {
        std::vector<std::string> tools;
        if (!tool_name.empty()) {
          tools.push_back(tool_name);
        } else if (!fallback.empty()) {
          tools.push_back(fallback);
        } else {
          for (const auto& d : gridcomp::DescribeTools()) tools.push_back(d.name);
        }
        return tools;
      };
      if (all_mutants) {
        for (const gridcomp::Mutant& m : gridcomp::BuiltinMutants()) {
          gridcomp::LocalEndpoint endpoint(m.invoker);
          reports.push_back(gridcomp::VerifyTool(endpoint, m.tool));
          reports.back().tool += " [" + m.name + "]";
        }
      } else if (!mutant_name.empty()) {
        const gridcomp::Mutant& m = gridcomp::FindMutant(mutant_name);
        for (const std::string& tool : tools_for(m.tool)) {
          gridcomp::LocalEndpoint endpoint(m.invoker);
          reports.push_back(gridcomp::VerifyTool(endpoint, tool));
        }
      } else {
        for (const std::string& tool : tools_for("")) {
          std::unique_ptr<gridcomp::ToolEndpoint> endpoint;
          if (!socket_path.empty()) {
            endpoint = std::make_unique<gridcomp::SocketEndpoint>(socket_path);
          } else if (!command.empty()) {
            std::istringstream words(command);
            std::vector<std::string> argv_words{std::istream_iterator<std::string>(words),
                                                std::istream_iterator<std::string>()};
            endpoint = std::make_unique<gridcomp::ProcessEndpoint>(std::move(argv_words));
          } else {
            endpoint = std::make_unique<gridcomp::LocalEndpoint>();
          }
          reports.push_back(gridcomp::VerifyTool(*endpoint, tool));
        }
      }
      std::cout << gridcomp::VerificationTable(reports);
      if (!report_path.empty()) {
        json doc = json::array();
        for (const auto& r : reports) doc.push_back(gridcomp::VerificationReportToJson(r));
        gridcomp::WriteFile(report_path, doc.dump(2) + "\n");
      }
      bool all_pass = true;
      for (const auto& r : reports) all_pass = all_pass && r.pass;
      return all_pass || all_mutants ? 0 : 3;
    }
    if (*prompt) {
      const gridcomp::Lexicon lexicon = LoadLexicon(lexicon_path);
      const auto episodes = gridcomp::ReadEpisodesFile(dataset, lexicon);
      WriteOrPrint(out_path, gridcomp::EmitPromptPack(episodes, k, lexicon));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "gridcomp: " << gridcomp::ErrorKindName(e.kind()) << ": " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "gridcomp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
