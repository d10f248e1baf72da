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

// Helpers shared by the unit tests and the acceptance runner: file access,
// a random well-formed graph generator, and an independent checker for the
// handshake protocol that works purely from a recorded trace.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "statflow/statflow.hpp"

#ifndef STATFLOW_SOURCE_DIR
#error "STATFLOW_SOURCE_DIR must point at the repository root"
#endif

namespace statflow::testing {

inline std::string source_path(const std::string& rel) {
  return std::string(STATFLOW_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string read_source(const std::string& rel) {
  return read_file(source_path(rel));
}

inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// A random graph in which every port is wired: a random subset of
// (output, input) port pairs become internal arcs, leftover inputs become
// graph inputs and leftover outputs graph outputs. Cycles are allowed.
inline DataflowGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes = 15) {
  const auto n = static_cast<std::size_t>(draw(rng, 1, static_cast<std::int64_t>(max_nodes)));
  DataflowGraph g;
  std::vector<std::pair<std::size_t, std::size_t>> in_ports, out_ports;
  for (std::size_t i = 0; i < n; ++i) {
    const OperatorKind kind = kAllOperatorKinds[static_cast<std::size_t>(
        draw(rng, 0, static_cast<std::int64_t>(kAllOperatorKinds.size()) - 1))];
    g.add_node(kind, std::string(mnemonic(kind)) + "_" + std::to_string(i + 1),
               std::vector<std::string>(port_count(kind)));
    const std::size_t n_in = input_slots(kind).size();
    for (std::size_t p = 0; p < port_count(kind); ++p) {
      (p < n_in ? in_ports : out_ports).emplace_back(i, p);
    }
  }
  std::shuffle(in_ports.begin(), in_ports.end(), rng);
  std::shuffle(out_ports.begin(), out_ports.end(), rng);
  const auto pairs = static_cast<std::size_t>(
      draw(rng, 0, static_cast<std::int64_t>(std::min(in_ports.size(), out_ports.size()))));
  auto& nodes = g.mutable_nodes();
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::string label = "s" + std::to_string(k + 1);
    nodes[out_ports[k].first].ports[out_ports[k].second] = label;
    nodes[in_ports[k].first].ports[in_ports[k].second] = label;
  }
  for (std::size_t k = pairs; k < in_ports.size(); ++k) {
    const std::string label = "in" + std::to_string(k - pairs + 1);
    nodes[in_ports[k].first].ports[in_ports[k].second] = label;
    g.add_input(label);
  }
  for (std::size_t k = pairs; k < out_ports.size(); ++k) {
    const std::string label = "out" + std::to_string(k - pairs + 1);
    nodes[out_ports[k].first].ports[out_ports[k].second] = label;
    g.add_output(label);
  }
  return g;
}

// Random token streams (0..6 tokens, small signed values so deciders and
// control inputs see both polarities) for every input. Needs width >= 3.
inline Manifest random_manifest(const DataflowGraph& g, std::mt19937_64& rng,
                                unsigned width, std::uint64_t max_ticks) {
  Manifest m;
  m.width = width;
  m.max_ticks = max_ticks;
  for (const auto& l : g.inputs()) {
    auto& s = m.inputs[l];
    const auto len = draw(rng, 0, 6);
    for (std::int64_t i = 0; i < len; ++i) s.push_back(draw(rng, -3, 3));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Netlist scanner

// Counts read back out of emitted VHDL with a few regular expressions, so the
// emitter's structure is checked without trusting its own bookkeeping.
struct NetlistScan {
  std::size_t instances = 0;
  std::size_t internal_bundles = 0;
  std::size_t external_bundles = 0;
  std::map<std::string, std::size_t> per_op;
};

inline NetlistScan scan(const std::string& vhdl, const std::string& entity = "dataflow_top") {
  NetlistScan s;
  const auto top = vhdl.find("entity " + entity + " is");
  if (top == std::string::npos) return s;
  const std::string body = vhdl.substr(top);
  static const std::regex inst(
      R"re(\n  (\S+) : entity work\.df_op_\dx\d\n    generic map \(OP => "(\w+)")re");
  for (std::sregex_iterator it(body.begin(), body.end(), inst), end; it != end; ++it) {
    ++s.instances;
    ++s.per_op[(*it)[2]];
  }
  static const std::regex sig(R"(\n  signal (\S+)_data : std_logic_vector)");
  s.internal_bundles = static_cast<std::size_t>(
      std::distance(std::sregex_iterator(body.begin(), body.end(), sig), std::sregex_iterator()));
  static const std::regex port(R"(\n    (\S+)_data : (in|out) std_logic_vector)");
  s.external_bundles = static_cast<std::size_t>(
      std::distance(std::sregex_iterator(body.begin(), body.end(), port), std::sregex_iterator()));
  return s;
}

// ---------------------------------------------------------------------------
// Protocol checker

constexpr std::size_t consumed_per_fire(OperatorKind k) {
  switch (k) {
    case OperatorKind::Copy:
    case OperatorKind::Not:
    case OperatorKind::NDMerge:
      return 1;
    case OperatorKind::DMerge:
      return 3;
    default:
      return 2;
  }
}

constexpr std::size_t produced_per_fire(OperatorKind k) {
  return k == OperatorKind::Copy ? 2 : 1;
}

struct ProtocolReport {
  std::vector<std::string> alternation;   // (a) single-token rule
  std::vector<std::string> conservation;  // (b) no loss / duplication
  std::vector<std::string> gating;        // (c) fire gating
  std::vector<std::string> per_fire;      // (d) per-fire token conservation

  bool ok() const {
    return alternation.empty() && conservation.empty() && gating.empty() &&
           per_fire.empty();
  }
  std::string summary() const {
    std::string s;
    for (const auto* v : {&alternation, &conservation, &gating, &per_fire}) {
      for (const auto& e : *v) s += e + "\n";
    }
    return s;
  }
};

// Checks a complete trace against the handshake rules:
//  (a) per arc, send and ack strictly alternate starting with send, and a
//      new token is only driven after the consumer has consumed the last one;
//  (b) per arc, the latched value sequence is the sent sequence (minus at
//      most one token still in flight);
//  (c) every fire consumes only inputs latched at an earlier tick and not
//      consumed since, and consumes what the firing rule requires;
//  (d) every fire consumes/produces the per-kind number of tokens.
inline ProtocolReport check_protocol(const Program& p, const std::vector<TraceEvent>& trace) {
  ProtocolReport rep;
  const std::size_t n_arcs = p.arcs().size();
  std::vector<std::vector<Word>> sent(n_arcs), latched(n_arcs);
  std::vector<char> last(n_arcs, 'A');
  // Arc occupied from send until the consumer fires on it (env: until latch).
  std::vector<bool> occupied(n_arcs, false);

  struct NodeTrack {
    std::vector<bool> held;
    std::vector<std::uint64_t> latched_at;
    std::size_t sends_since_fire = 0;
    std::size_t fires = 0;
  };
  std::vector<NodeTrack> nodes(p.nodes().size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].held.assign(p.nodes()[i].n_in, false);
    nodes[i].latched_at.assign(p.nodes()[i].n_in, 0);
  }

  std::uint64_t prev_tick = 0;
  for (const TraceEvent& e : trace) {
    const std::string where = "tick " + std::to_string(e.tick) + " " +
                              std::string(p.node_name(e.node));
    if (e.tick < prev_tick) rep.alternation.push_back(where + ": ticks go backwards");
    prev_tick = e.tick;
    switch (e.event) {
      case EventKind::Send: {
        if (last[e.arc] != 'A') rep.alternation.push_back(where + ": send without ack on " + p.arcs()[e.arc].label);
        if (occupied[e.arc]) rep.alternation.push_back(where + ": second token on occupied arc " + p.arcs()[e.arc].label);
        last[e.arc] = 'S';
        occupied[e.arc] = true;
        sent[e.arc].push_back(e.value);
        if (e.node != kEnvironment) {
          NodeTrack& t = nodes[e.node];
          if (t.fires == 0) rep.per_fire.push_back(where + ": send before any fire");
          ++t.sends_since_fire;
          if (t.sends_since_fire > produced_per_fire(p.nodes()[e.node].kind)) {
            rep.per_fire.push_back(where + ": too many sends for one fire");
          }
        }
        break;
      }
      case EventKind::Ack:
        if (last[e.arc] != 'S') rep.alternation.push_back(where + ": ack without send on " + p.arcs()[e.arc].label);
        last[e.arc] = 'A';
        if (e.node == kEnvironment) occupied[e.arc] = false;
        break;
      case EventKind::Latch: {
        latched[e.arc].push_back(e.value);
        if (e.node != kEnvironment) {
          NodeTrack& t = nodes[e.node];
          const auto idx = p.arcs()[e.arc].consumer_in;
          if (t.held[idx]) rep.gating.push_back(where + ": latch into a full register");
          t.held[idx] = true;
          t.latched_at[idx] = e.tick;
        }
        break;
      }
      case EventKind::Fire: {
        NodeTrack& t = nodes[e.node];
        const NodeInfo& info = p.nodes()[e.node];
        if (t.fires > 0 && t.sends_since_fire != produced_per_fire(info.kind)) {
          rep.per_fire.push_back(where + ": previous fire produced " +
                                 std::to_string(t.sends_since_fire) + " tokens");
        }
        ++t.fires;
        t.sends_since_fire = 0;
        std::size_t consumed = 0;
        for (std::size_t i = 0; i < info.n_in; ++i) {
          const bool takes = e.consumed & (1u << i);
          if (!takes) {
            if (info.kind != OperatorKind::NDMerge) {
              rep.gating.push_back(where + ": fired without consuming input " + std::to_string(i));
            }
            continue;
          }
          ++consumed;
          if (!t.held[i] || t.latched_at[i] >= e.tick) {
            rep.gating.push_back(where + ": consumed input " + std::to_string(i) +
                                 " that was not latched before this tick");
          }
          t.held[i] = false;
          occupied[info.in_arcs[i]] = false;
        }
        if (consumed != consumed_per_fire(info.kind)) {
          rep.per_fire.push_back(where + ": consumed " + std::to_string(consumed) + " tokens");
        }
        break;
      }
      case EventKind::Warn:
        break;
    }
  }

  for (std::size_t a = 0; a < n_arcs; ++a) {
    const auto& s = sent[a];
    const auto& l = latched[a];
    const bool prefix = l.size() <= s.size() && std::equal(l.begin(), l.end(), s.begin());
    if (!prefix || s.size() - l.size() > 1) {
      rep.conservation.push_back("arc " + p.arcs()[a].label + ": sent " +
                                 std::to_string(s.size()) + ", latched " +
                                 std::to_string(l.size()));
    }
  }
  return rep;
}

}  // namespace statflow::testing
