// Copyright 2026 The statflow Authors
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
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

#include "test_support.hpp"

#ifndef STATFLOW_CLI
#error "STATFLOW_CLI must name the built command-line tool"
#endif

namespace statflow {
namespace {

struct Invocation {
  int status = -1;
  std::string out;
};

// Runs the tool with stderr discarded; returns exit status and stdout.
Invocation cli(const std::string& args) {
  const std::string cmd = std::string(STATFLOW_CLI) + " " + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string prog(const std::string& name) { return testing::source_path("programs/" + name); }

TEST(Cli, RunFibonacci) {
  const auto r = cli("run " + prog("fibonacci.dfasm") + " " + prog("fibonacci.json"));
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["terminated"], "completed");
  EXPECT_EQ(j["outputs"]["fibo"].back(), 144);
  EXPECT_EQ(j["fire_counts"].size(), 20u);
  EXPECT_EQ(j["arc_token_counts"].size(), 38u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("run " + prog("starve.dfasm") + " " + prog("starve.json")).status, 2);
  EXPECT_EQ(cli("run " + prog("fibonacci.dfasm") + " " + prog("fibonacci.json") +
                " --max-ticks 1").status, 3);
  EXPECT_EQ(cli("validate " + prog("unbalanced.dfasm")).status, 1);
  EXPECT_EQ(cli("validate " + prog("fibonacci.dfasm")).status, 0);
  EXPECT_EQ(cli("run /nonexistent.dfasm " + prog("fibonacci.json")).status, 1);
  EXPECT_EQ(cli("bench nosuch").status, 1);
  EXPECT_EQ(cli("frobnicate").status, 1);
}

TEST(Cli, ValidateStats) {
  const auto r = cli("validate " + prog("fibonacci.dfasm"));
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["valid"], true);
  EXPECT_EQ(j["nodes"], 20);
  EXPECT_EQ(j["arcs"], 38);
  EXPECT_EQ(j["histogram"]["ndmerge"], 6);
}

TEST(Cli, BenchAll) {
  const auto r = cli("bench all");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 6u);
  for (const auto& row : j) EXPECT_EQ(row["match"], true) << row["name"];
}

TEST(Cli, BenchSeedIsReproducible) {
  const auto a = cli("bench all --seed 5");
  const auto b = cli("bench all --seed 5");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, cli("bench all --seed 6").out);
}

TEST(Cli, BenchExplicitInputs) {
  const auto r = cli("bench dot_prod --x 1,2,3 --y 4,5,6");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)[0]["outputs"][0], 32);
  EXPECT_EQ(nlohmann::json::parse(cli("bench fibonacci --n 20").out)[0]["outputs"][0], 17711);
}

TEST(Cli, TraceAndEmitFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "statflow_cli_test";
  std::filesystem::create_directories(dir);
  const auto trace = (dir / "t.jsonl").string();
  const auto vhd = (dir / "f.vhd").string();
  EXPECT_EQ(cli("run " + prog("fibonacci.dfasm") + " " + prog("fibonacci.json") +
                " --trace " + trace).status, 0);
  const std::string t = testing::read_file(trace);
  const auto streamed = cli("trace " + prog("fibonacci.dfasm") + " " + prog("fibonacci.json"));
  EXPECT_EQ(t, streamed.out);
  EXPECT_EQ(cli("emit " + prog("fibonacci.dfasm") + " --out " + vhd).status, 0);
  EXPECT_EQ(testing::read_file(vhd), testing::read_source("tests/golden/fibonacci.vhd"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, PrintRoundTrips) {
  const auto r = cli("print --numbered " + prog("fibonacci.dfasm"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, std::string(bench::kFibonacciSource));
}

}  // namespace
}  // namespace statflow
