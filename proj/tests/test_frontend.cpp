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

#include <random>
#include <set>
#include <tuple>

#include "test_support.hpp"

namespace statflow {
namespace {

DataflowGraph fibonacci() { return parse_program(bench::kFibonacciSource); }

TEST(Dfasm, FibonacciInterface) {
  const auto g = fibonacci();
  EXPECT_EQ(g.nodes().size(), 20u);
  const std::vector<std::string> in = {"dadoa", "dadob", "dadoc", "dadod", "dadoe",
                                       "dadof", "dadog", "dadoh", "dadoi", "dadoj"};
  EXPECT_EQ(std::set<std::string>(g.inputs().begin(), g.inputs().end()),
            std::set<std::string>(in.begin(), in.end()));
  EXPECT_EQ(std::set<std::string>(g.outputs().begin(), g.outputs().end()),
            (std::set<std::string>{"pf", "fibo"}));
}

// Connectivity of every internal arc, transcribed by hand from the listing:
// label, producer instance/port, consumer instance/port.
TEST(Dfasm, FibonacciInternalArcs) {
  using Row = std::tuple<std::string, std::string, Slot, std::string, Slot>;
  const std::vector<Row> expected = {
      {"s1", "ndmerge_1", Slot::Z, "dmerge_2", Slot::Ctl},
      {"s2", "ndmerge_3", Slot::Z, "dmerge_2", Slot::A},
      {"s3", "dmerge_2", Slot::Z, "copy_5", Slot::A},
      {"s4", "copy_5", Slot::Z1, "gtdecider_4", Slot::B},
      {"s5", "gtdecider_4", Slot::Z, "copy_6", Slot::A},
      {"s6", "copy_6", Slot::Z1, "copy_8", Slot::A},
      {"s7", "copy_8", Slot::Z1, "ndmerge_1", Slot::A},
      {"s8", "copy_6", Slot::Z2, "branch_7", Slot::Ctl},
      {"s9", "copy_5", Slot::Z2, "branch_7", Slot::A},
      {"s10", "branch_7", Slot::T, "add_9", Slot::A},
      {"s11", "add_9", Slot::Z, "ndmerge_3", Slot::B},
      {"s12", "copy_8", Slot::Z2, "dmerge_15", Slot::Ctl},
      {"s13", "ndmerge_10", Slot::Z, "add_18", Slot::A},
      {"s14", "ndmerge_11", Slot::Z, "add_18", Slot::B},
      {"s15", "add_18", Slot::Z, "copy_19", Slot::A},
      {"s16", "copy_19", Slot::Z1, "copy_20", Slot::A},
      {"s17", "copy_20", Slot::Z1, "ndmerge_10", Slot::A},
      {"s18", "copy_19", Slot::Z2, "copy_14", Slot::A},
      {"s19", "copy_14", Slot::Z1, "ndmerge_13", Slot::B},
      {"s20", "copy_14", Slot::Z2, "dmerge_16", Slot::A},
      {"s21", "ndmerge_13", Slot::Z, "dmerge_16", Slot::B},
      {"s22", "dmerge_16", Slot::Z, "ndmerge_12", Slot::B},
      {"s23", "ndmerge_12", Slot::Z, "dmerge_15", Slot::A},
      {"s24", "dmerge_15", Slot::Z, "copy_17", Slot::A},
      {"s25", "copy_17", Slot::Z1, "ndmerge_11", Slot::B},
      {"s26", "copy_17", Slot::Z2, "dmerge_16", Slot::Ctl},
  };
  const auto g = fibonacci();
  std::map<std::string, Arc> arcs;
  for (const auto& a : g.arcs()) arcs.emplace(a.label, a);
  std::size_t internal = 0;
  for (const auto& [_, a] : arcs) internal += a.producer && a.consumer;
  EXPECT_EQ(internal, expected.size());
  for (const auto& [label, from, from_slot, to, to_slot] : expected) {
    ASSERT_TRUE(arcs.count(label)) << label;
    const Arc& a = arcs.at(label);
    ASSERT_TRUE(a.producer && a.consumer) << label;
    EXPECT_EQ(g.nodes()[a.producer->node].name, from) << label;
    EXPECT_EQ(a.producer->slot, from_slot) << label;
    EXPECT_EQ(g.nodes()[a.consumer->node].name, to) << label;
    EXPECT_EQ(a.consumer->slot, to_slot) << label;
  }
}

// The listing splits into a loop-control region (statements 1-9) and an
// accumulation region (10-20) that meet on a single arc.
TEST(Dfasm, FibonacciTwoRegions) {
  const auto g = fibonacci();
  std::vector<std::string> crossing;
  for (const auto& a : g.arcs()) {
    if (!a.producer || !a.consumer) continue;
    if ((a.producer->node < 9) != (a.consumer->node < 9)) crossing.push_back(a.label);
  }
  EXPECT_EQ(crossing, std::vector<std::string>{"s12"});
}

TEST(Dfasm, SingleCopy) {
  const auto g = parse_program("copy s1,s2,s3;");
  ASSERT_EQ(g.nodes().size(), 1u);
  EXPECT_EQ(g.nodes()[0].kind, OperatorKind::Copy);
  EXPECT_EQ(g.nodes()[0].name, "copy_1");
  EXPECT_EQ(g.inputs(), std::vector<std::string>{"s1"});
  EXPECT_EQ(g.outputs(), (std::vector<std::string>{"s2", "s3"}));
}

TEST(Dfasm, ArityErrorNamesLine) {
  try {
    parse_program("add s1,s2;");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location().line, 1u);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("expects 3 arguments"), std::string::npos);
  }
}

TEST(Dfasm, SyntaxErrors) {
  auto line_of = [](std::string_view src) -> std::size_t {
    try {
      parse_program(src);
    } catch (const ParseError& e) {
      return e.location().line;
    }
    return 0;
  };
  EXPECT_EQ(line_of("copy a,b,c;\nxor a,b,c;"), 2u);   // unknown mnemonic
  EXPECT_EQ(line_of("copy a,b,c"), 1u);                // missing ';'
  EXPECT_EQ(line_of("copy a,,c;"), 1u);                // empty label
  EXPECT_EQ(line_of("\n\ncopy a,b,c;#"), 3u);          // stray character
  EXPECT_EQ(line_of("1 copy a,b,c;"), 1u);             // number without '.'
  EXPECT_EQ(line_of("not a,b;\ndmerge a,b,c;"), 2u);   // arity
}

TEST(Dfasm, CommentsAndNumbering) {
  const auto a = parse_program("-- header\n1.add x,y,z; -- trailing\n\n2.not z,w;\n");
  const auto b = parse_program("add x,y,z; not z,w;");
  ASSERT_EQ(a.nodes().size(), 2u);
  EXPECT_EQ(print_program(a), print_program(b));
  EXPECT_EQ(a.inputs(), b.inputs());
  EXPECT_EQ(a.outputs(), b.outputs());
}

TEST(Dfasm, PrintListingNumbered) {
  const auto g = fibonacci();
  const std::string printed = print_program(g, true);
  EXPECT_EQ(printed, std::string(bench::kFibonacciSource));
}

// parse(print(g)) keeps every node's kind and port labels, and the set of
// inputs and outputs.
TEST(Dfasm, RoundTripProperty) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const auto g = testing::random_graph(rng);
    const auto h = parse_program(print_program(g));
    ASSERT_EQ(h.nodes().size(), g.nodes().size());
    for (std::size_t n = 0; n < g.nodes().size(); ++n) {
      EXPECT_EQ(h.nodes()[n].kind, g.nodes()[n].kind);
      EXPECT_EQ(h.nodes()[n].name, g.nodes()[n].name);
      EXPECT_EQ(h.nodes()[n].ports, g.nodes()[n].ports);
    }
    EXPECT_EQ(std::set<std::string>(h.inputs().begin(), h.inputs().end()),
              std::set<std::string>(g.inputs().begin(), g.inputs().end()));
    EXPECT_EQ(std::set<std::string>(h.outputs().begin(), h.outputs().end()),
              std::set<std::string>(g.outputs().begin(), g.outputs().end()));
    EXPECT_EQ(print_program(h), print_program(g));
  }
}

TEST(Manifest, Defaults) {
  const Manifest m = parse_manifest("{}");
  EXPECT_EQ(m.width, 16u);
  EXPECT_EQ(m.max_ticks, 1'000'000u);
  EXPECT_TRUE(m.inputs.empty());
  EXPECT_TRUE(m.results.empty());
}

TEST(Manifest, RejectsBadFields) {
  EXPECT_THROW(parse_manifest(R"({"width":0})"), ManifestError);
  EXPECT_THROW(parse_manifest(R"({"width":33})"), ManifestError);
  EXPECT_THROW(parse_manifest(R"({"max_ticks":0})"), ManifestError);
  EXPECT_THROW(parse_manifest(R"({"inputs":{"a":[1.5]}})"), ManifestError);
  EXPECT_THROW(parse_manifest(R"({"results":{"z":-1}})"), ManifestError);
  EXPECT_THROW(parse_manifest(R"({"widht":8})"), ManifestError);
  EXPECT_THROW(parse_manifest("[1,2"), ManifestError);
}

TEST(Manifest, BindsFibonacci) {
  const Manifest m = parse_manifest(testing::read_source("programs/fibonacci.json"));
  const BoundProgram p = bind_manifest(fibonacci(), m);
  EXPECT_EQ(p.width.bits(), 16u);
  ASSERT_EQ(p.input_streams.size(), 10u);
  for (std::size_t i = 0; i < p.graph.inputs().size(); ++i) {
    if (p.graph.inputs()[i] == "dadoa") {
      EXPECT_EQ(p.input_streams[i].size(), 11u);
    }
  }
}

TEST(Manifest, UnknownLabelRejected) {
  EXPECT_THROW(bind_manifest(fibonacci(), parse_manifest(R"({"inputs":{"dadoz":[1]}})")),
               ManifestError);
  EXPECT_THROW(bind_manifest(fibonacci(), parse_manifest(R"({"results":{"s3":1}})")),
               ManifestError);
}

TEST(Manifest, TokensWrapOrFail) {
  const auto g = parse_program("not a,z;");
  const auto p = bind_manifest(g, parse_manifest(R"({"width":8,"inputs":{"a":[-1,255,-128]}})"));
  EXPECT_EQ(p.input_streams[0], (std::vector<Word>{255, 255, 128}));
  EXPECT_THROW(bind_manifest(g, parse_manifest(R"({"width":8,"inputs":{"a":[256]}})")),
               ManifestError);
  EXPECT_THROW(bind_manifest(g, parse_manifest(R"({"width":8,"inputs":{"a":[-129]}})")),
               ManifestError);
}

TEST(Manifest, JsonRoundTrip) {
  Manifest m;
  m.width = 12;
  m.max_ticks = 77;
  m.inputs["a"] = {1, -2, 3};
  m.results["z"] = 2;
  const Manifest back = parse_manifest(manifest_to_json(m));
  EXPECT_EQ(back.width, 12u);
  EXPECT_EQ(back.max_ticks, 77u);
  EXPECT_EQ(back.inputs, m.inputs);
  EXPECT_EQ(back.results, m.results);
}

}  // namespace
}  // namespace statflow
