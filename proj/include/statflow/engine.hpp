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

// Clock-tick simulator for static dataflow graphs.
//
// Every arc is a Channel: a data register, a strobe line driven by the
// producer and an acknowledge line driven by the consumer. ack=1 means the
// consumer's input latch for that arc is occupied (busy); ack=0 means it can
// take a token. A producer drives a token only when str=0 and ack=0, so an arc
// never holds more than one item, whether on the bus or in the latch.
//
// Every operator runs the same four-state controller:
//
//   S0  reset: clear latches and status bits                     -> S1
//   S1  latch every strobed input whose status bit is clear,
//       raise its status bit and ack; once the firing rule holds  -> S2
//   S2  execute: consume the latched inputs, fill the output
//       latches, clear the consumed acks                          -> S3
//   S3  drive each filled output once its arc is free; when all
//       outputs are gone                                          -> S1
//
// Firing rule: NDMerge needs any one input; every other kind needs all of
// its inputs, DMerge included (the unselected data token is consumed too).
//
// A tick is two-phase: every next-state is computed from the pre-tick
// snapshot and committed together, so node order never matters.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "statflow/graph.hpp"
#include "statflow/manifest.hpp"
#include "statflow/operator_kind.hpp"
#include "statflow/semantics.hpp"
#include "statflow/validate.hpp"

namespace statflow {

inline constexpr std::uint32_t kEnvironment = std::numeric_limits<std::uint32_t>::max();

// ---------------------------------------------------------------------------
// Compiled program

struct ArcInfo {
  std::string label;
  std::uint32_t producer = kEnvironment;  // node index, or environment input
  std::uint8_t producer_out = 0;          // index into output_slots()
  std::uint32_t consumer = kEnvironment;  // node index, or environment output
  std::uint8_t consumer_in = 0;           // index into input_slots()
};

struct NodeInfo {
  OperatorKind kind = OperatorKind::Copy;
  std::string name;
  std::array<std::uint32_t, kMaxInputs> in_arcs{};
  std::array<std::uint32_t, kMaxOutputs> out_arcs{};
  std::uint8_t n_in = 0;
  std::uint8_t n_out = 0;
};

// Index-based view of a bound program, built once per run.
class Program {
 public:
  explicit Program(const BoundProgram& bound)
      : width_(bound.width),
        max_ticks_(bound.max_ticks),
        input_streams_(bound.input_streams),
        expected_(bound.expected) {
    const DataflowGraph& g = bound.graph;
    if (auto report = validate_graph(g); !report.ok()) {
      throw std::invalid_argument("cannot simulate an invalid graph: " +
                                  report.diagnostics.front().message);
    }
    if (input_streams_.size() != g.inputs().size() ||
        expected_.size() != g.outputs().size()) {
      throw std::invalid_argument("bound program does not match its graph");
    }
    std::unordered_map<std::string, std::uint32_t> arc_of;
    for (const Arc& a : g.arcs()) {
      arc_of.emplace(a.label, static_cast<std::uint32_t>(arcs_.size()));
      ArcInfo info;
      info.label = a.label;
      if (a.producer) {
        info.producer = static_cast<std::uint32_t>(a.producer->node);
        info.producer_out = static_cast<std::uint8_t>(
            *slot_index(g.nodes()[a.producer->node].kind, a.producer->slot));
      }
      if (a.consumer) {
        info.consumer = static_cast<std::uint32_t>(a.consumer->node);
        info.consumer_in = static_cast<std::uint8_t>(
            *slot_index(g.nodes()[a.consumer->node].kind, a.consumer->slot));
      }
      arcs_.push_back(std::move(info));
    }
    for (const Node& n : g.nodes()) {
      NodeInfo info;
      info.kind = n.kind;
      info.name = n.name;
      info.n_in = static_cast<std::uint8_t>(input_slots(n.kind).size());
      info.n_out = static_cast<std::uint8_t>(output_slots(n.kind).size());
      for (std::size_t p = 0; p < info.n_in; ++p) info.in_arcs[p] = arc_of.at(n.ports[p]);
      for (std::size_t p = 0; p < info.n_out; ++p) {
        info.out_arcs[p] = arc_of.at(n.ports[info.n_in + p]);
      }
      nodes_.push_back(std::move(info));
    }
    for (const auto& l : g.inputs()) input_arcs_.push_back(arc_of.at(l));
    for (const auto& l : g.outputs()) output_arcs_.push_back(arc_of.at(l));
  }

  const std::vector<NodeInfo>& nodes() const { return nodes_; }
  const std::vector<ArcInfo>& arcs() const { return arcs_; }
  const std::vector<std::uint32_t>& input_arcs() const { return input_arcs_; }
  const std::vector<std::uint32_t>& output_arcs() const { return output_arcs_; }
  const std::vector<std::vector<Word>>& input_streams() const { return input_streams_; }
  const std::vector<std::uint64_t>& expected() const { return expected_; }
  Width width() const { return width_; }
  std::uint64_t max_ticks() const { return max_ticks_; }

  std::string_view node_name(std::uint32_t n) const {
    return n == kEnvironment ? std::string_view("env") : std::string_view(nodes_[n].name);
  }

 private:
  Width width_;
  std::uint64_t max_ticks_;
  std::vector<std::vector<Word>> input_streams_;
  std::vector<std::uint64_t> expected_;
  std::vector<NodeInfo> nodes_;
  std::vector<ArcInfo> arcs_;
  std::vector<std::uint32_t> input_arcs_;
  std::vector<std::uint32_t> output_arcs_;
};

// ---------------------------------------------------------------------------
// Machine state

enum class Fsm : std::uint8_t { S0, S1, S2, S3 };

struct Channel {
  Word data = 0;
  bool str = false;
  bool ack = false;

  friend bool operator==(const Channel&, const Channel&) = default;
};

struct OperatorState {
  Fsm fsm = Fsm::S0;
  std::array<Word, kMaxInputs> latches{};          // dadoa, dadob, ...
  std::array<bool, kMaxInputs> status{};           // bita, bitb, ...
  std::array<std::uint64_t, kMaxInputs> arrival{};  // tick each latch was filled
  std::array<Word, kMaxOutputs> out_latches{};     // dadoz
  std::array<bool, kMaxOutputs> out_status{};      // bitz

  friend bool operator==(const OperatorState&, const OperatorState&) = default;
};

struct MachineState {
  std::uint64_t tick = 0;
  std::vector<Channel> channels;       // per arc
  std::vector<OperatorState> ops;      // per node
  std::vector<std::size_t> injected;   // per graph input: tokens sent so far
  std::vector<std::vector<Word>> collected;  // per graph output
  std::vector<std::uint64_t> fire_counts;    // per node
  std::vector<std::uint64_t> arc_tokens;     // per arc: tokens driven

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

inline MachineState initial_state(const Program& p) {
  MachineState s;
  s.channels.resize(p.arcs().size());
  s.ops.resize(p.nodes().size());
  s.injected.assign(p.input_arcs().size(), 0);
  s.collected.resize(p.output_arcs().size());
  s.fire_counts.assign(p.nodes().size(), 0);
  s.arc_tokens.assign(p.arcs().size(), 0);
  return s;
}

// ---------------------------------------------------------------------------
// Trace

enum class EventKind : std::uint8_t { Latch, Fire, Send, Ack, Warn };

constexpr std::string_view event_name(EventKind k) {
  switch (k) {
    case EventKind::Latch: return "latch";
    case EventKind::Fire: return "fire";
    case EventKind::Send: return "send";
    case EventKind::Ack: return "ack";
    case EventKind::Warn: return "warn";
  }
  return "?";
}

// Port events (latch/send/ack) carry slot, arc and value. Fire events carry
// the set of consumed input slots as a bitmask over input_slots().
struct TraceEvent {
  std::uint64_t tick = 0;
  std::uint32_t node = kEnvironment;
  EventKind event = EventKind::Fire;
  Slot slot = Slot::A;
  std::uint32_t arc = 0;
  Word value = 0;
  std::uint8_t consumed = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

inline nlohmann::ordered_json to_json(const Program& p, const TraceEvent& e) {
  nlohmann::ordered_json j;
  j["tick"] = e.tick;
  j["node"] = p.node_name(e.node);
  j["event"] = event_name(e.event);
  switch (e.event) {
    case EventKind::Latch:
    case EventKind::Send:
    case EventKind::Ack:
      // Environment ports are named after their arc.
      j["port"] = e.node == kEnvironment ? p.arcs()[e.arc].label
                                         : std::string(slot_name(e.slot));
      j["arc"] = p.arcs()[e.arc].label;
      if (e.event != EventKind::Ack) j["value"] = e.value;
      break;
    case EventKind::Fire: {
      auto consumed = nlohmann::ordered_json::array();
      const auto ins = input_slots(p.nodes()[e.node].kind);
      for (std::size_t i = 0; i < ins.size(); ++i) {
        if (e.consumed & (1u << i)) consumed.push_back(slot_name(ins[i]));
      }
      j["consumed"] = consumed;
      break;
    }
    case EventKind::Warn:
      j["message"] = "division by zero";
      break;
  }
  return j;
}

inline void write_trace_jsonl(std::ostream& os, const Program& p,
                              const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) os << to_json(p, e).dump() << '\n';
}

// ---------------------------------------------------------------------------
// One clock tick

struct TickResult {
  MachineState state;
  bool changed = false;
};

namespace detail {

inline bool firing_rule_holds(OperatorKind kind, const OperatorState& op,
                              std::size_t n_in) {
  if (kind == OperatorKind::NDMerge) return op.status[0] || op.status[1];
  for (std::size_t i = 0; i < n_in; ++i) {
    if (!op.status[i]) return false;
  }
  return true;
}

}  // namespace detail

// Advances every operator and the environment by one clock from `pre`.
// Events, when `trace` is non-null, are appended in a fixed order:
// environment inputs, nodes in statement order, environment outputs.
inline TickResult tick(const Program& p, const MachineState& pre,
                       std::vector<TraceEvent>* trace = nullptr) {
  TickResult r{pre, false};
  MachineState& next = r.state;
  const std::uint64_t now = pre.tick + 1;
  next.tick = now;
  const Width w = p.width();

  auto emit = [&](std::uint32_t node, EventKind kind, Slot slot, std::uint32_t arc,
                  Word value, std::uint8_t consumed = 0) {
    r.changed = true;
    if (trace) trace->push_back(TraceEvent{now, node, kind, slot, arc, value, consumed});
  };

  // Environment drives its next token whenever the arc is free.
  for (std::size_t i = 0; i < p.input_arcs().size(); ++i) {
    const std::uint32_t arc = p.input_arcs()[i];
    const Channel& ch = pre.channels[arc];
    const auto& stream = p.input_streams()[i];
    if (!ch.str && !ch.ack && pre.injected[i] < stream.size()) {
      const Word v = stream[pre.injected[i]];
      next.channels[arc].data = v;
      next.channels[arc].str = true;
      ++next.injected[i];
      ++next.arc_tokens[arc];
      emit(kEnvironment, EventKind::Send, Slot::Z, arc, v);
    }
  }

  for (std::uint32_t n = 0; n < p.nodes().size(); ++n) {
    const NodeInfo& info = p.nodes()[n];
    const OperatorState& op = pre.ops[n];
    OperatorState& nx = next.ops[n];
    const auto ins = input_slots(info.kind);
    const auto outs = output_slots(info.kind);

    switch (op.fsm) {
      case Fsm::S0:
        nx = OperatorState{};
        nx.fsm = Fsm::S1;
        r.changed = true;
        break;

      case Fsm::S1: {
        for (std::size_t i = 0; i < info.n_in; ++i) {
          const std::uint32_t arc = info.in_arcs[i];
          const Channel& ch = pre.channels[arc];
          if (op.status[i] || !ch.str) continue;
          nx.latches[i] = ch.data;
          nx.status[i] = true;
          nx.arrival[i] = now;
          next.channels[arc].str = false;
          next.channels[arc].ack = true;
          emit(n, EventKind::Latch, ins[i], arc, ch.data);
          emit(n, EventKind::Ack, ins[i], arc, ch.data);
        }
        if (detail::firing_rule_holds(info.kind, nx, info.n_in)) {
          nx.fsm = Fsm::S2;
          r.changed = true;
        }
        break;
      }

      case Fsm::S2: {
        std::uint8_t consumed = 0;
        auto take = [&](std::size_t i) {
          consumed |= static_cast<std::uint8_t>(1u << i);
          nx.status[i] = false;
          next.channels[info.in_arcs[i]].ack = false;
        };
        auto put = [&](std::size_t o, Word v) {
          nx.out_latches[o] = v;
          nx.out_status[o] = true;
        };
        bool div_by_zero = false;
        switch (info.kind) {
          case OperatorKind::Copy: {
            auto [z1, z2] = eval_copy(op.latches[0]);
            take(0);
            put(0, z1);
            put(1, z2);
            break;
          }
          case OperatorKind::Not:
            take(0);
            put(0, eval_not(op.latches[0], w));
            break;
          case OperatorKind::DMerge:
            take(0);
            take(1);
            take(2);
            put(0, eval_dmerge(op.latches[0], op.latches[1], op.latches[2]));
            break;
          case OperatorKind::NDMerge: {
            std::optional<Arrival> a, b;
            if (op.status[0]) a = Arrival{op.latches[0], op.arrival[0]};
            if (op.status[1]) b = Arrival{op.latches[1], op.arrival[1]};
            const Routed won = eval_ndmerge(a, b);
            take(won.port == Slot::A ? 0 : 1);
            put(0, won.value);
            break;
          }
          case OperatorKind::Branch: {
            const Routed routed = eval_branch(op.latches[0], op.latches[1]);
            take(0);
            take(1);
            put(routed.port == Slot::T ? 0 : 1, routed.value);
            break;
          }
          default: {
            const auto res = eval_primitive(info.kind, op.latches[0], op.latches[1], w);
            take(0);
            take(1);
            put(0, res.value);
            div_by_zero = res.div_by_zero;
            break;
          }
        }
        ++next.fire_counts[n];
        emit(n, EventKind::Fire, Slot::Z, 0, 0, consumed);
        if (div_by_zero) emit(n, EventKind::Warn, Slot::Z, 0, 0);
        nx.fsm = Fsm::S3;
        break;
      }

      case Fsm::S3: {
        bool pending = false;
        for (std::size_t o = 0; o < info.n_out; ++o) {
          if (!op.out_status[o]) continue;
          const std::uint32_t arc = info.out_arcs[o];
          const Channel& ch = pre.channels[arc];
          if (ch.str || ch.ack) {
            pending = true;
            continue;
          }
          next.channels[arc].data = op.out_latches[o];
          next.channels[arc].str = true;
          nx.out_status[o] = false;
          ++next.arc_tokens[arc];
          emit(n, EventKind::Send, outs[o], arc, op.out_latches[o]);
        }
        if (!pending) {
          nx.fsm = Fsm::S1;
          r.changed = true;
        }
        break;
      }
    }
  }

  // Environment outputs latch and acknowledge in the same tick.
  for (std::size_t i = 0; i < p.output_arcs().size(); ++i) {
    const std::uint32_t arc = p.output_arcs()[i];
    const Channel& ch = pre.channels[arc];
    if (!ch.str) continue;
    next.collected[i].push_back(ch.data);
    next.channels[arc].str = false;
    emit(kEnvironment, EventKind::Latch, Slot::A, arc, ch.data);
    emit(kEnvironment, EventKind::Ack, Slot::A, arc, ch.data);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Running to termination

enum class Termination { Completed, Deadlock, BudgetExhausted };

constexpr std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Deadlock: return "deadlock";
    case Termination::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

struct SimResult {
  Termination terminated = Termination::Deadlock;
  std::uint64_t ticks_elapsed = 0;
  std::map<std::string, std::vector<Word>> outputs;
  std::map<std::string, std::uint64_t> fire_counts;
  std::map<std::string, std::uint64_t> arc_token_counts;
  bool div_by_zero = false;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

inline nlohmann::ordered_json to_json(const SimResult& r) {
  nlohmann::ordered_json j;
  j["terminated"] = termination_name(r.terminated);
  j["ticks"] = r.ticks_elapsed;
  j["outputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.outputs) j["outputs"][k] = v;
  j["fire_counts"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.fire_counts) j["fire_counts"][k] = v;
  j["arc_token_counts"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.arc_token_counts) j["arc_token_counts"][k] = v;
  if (r.div_by_zero) j["warnings"] = {"division by zero"};
  return j;
}

struct RunOptions {
  bool record_trace = true;
};

struct RunOutcome {
  SimResult result;
  std::vector<TraceEvent> trace;
};

inline bool expectations_met(const Program& p, const MachineState& s) {
  bool any = false;
  for (std::size_t i = 0; i < p.expected().size(); ++i) {
    if (p.expected()[i] == 0) continue;
    any = true;
    if (s.collected[i].size() < p.expected()[i]) return false;
  }
  return any;
}

// Ticks until every output with a nonzero expected count has delivered it
// (completed), a tick passes with no state change at all (deadlock), or the
// tick budget runs out.
inline RunOutcome run(const Program& p, RunOptions opts = {}) {
  RunOutcome out;
  MachineState s = initial_state(p);
  std::vector<TraceEvent>* trace = opts.record_trace ? &out.trace : nullptr;
  std::vector<TraceEvent> scratch;
  Termination why = Termination::BudgetExhausted;
  bool warned = false;
  while (s.tick < p.max_ticks()) {
    // Warnings are needed even when the trace is off.
    std::vector<TraceEvent>* sink = trace ? trace : &scratch;
    const std::size_t before = sink->size();
    TickResult t = tick(p, s, sink);
    for (std::size_t i = before; i < sink->size(); ++i) {
      if ((*sink)[i].event == EventKind::Warn) warned = true;
    }
    if (!trace) scratch.clear();
    s = std::move(t.state);
    if (expectations_met(p, s)) {
      why = Termination::Completed;
      break;
    }
    if (!t.changed) {
      why = Termination::Deadlock;
      break;
    }
  }

  SimResult& r = out.result;
  r.terminated = why;
  r.ticks_elapsed = s.tick;
  r.div_by_zero = warned;
  for (std::size_t i = 0; i < p.output_arcs().size(); ++i) {
    r.outputs[p.arcs()[p.output_arcs()[i]].label] = s.collected[i];
  }
  for (std::size_t n = 0; n < p.nodes().size(); ++n) {
    r.fire_counts[p.nodes()[n].name] = s.fire_counts[n];
  }
  for (std::size_t a = 0; a < p.arcs().size(); ++a) {
    r.arc_token_counts[p.arcs()[a].label] = s.arc_tokens[a];
  }
  return out;
}

inline RunOutcome run(const BoundProgram& bound, RunOptions opts = {}) {
  return run(Program(bound), opts);
}

}  // namespace statflow
